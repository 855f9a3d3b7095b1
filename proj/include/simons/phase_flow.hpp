#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "simons/cone_geometry.hpp"
#include "simons/numerics.hpp"
#include "simons/rk45.hpp"

namespace simons {

// Point of the reduced phase plane.  theta is the polar angle of the profile
// point (a, b) = e^rho (cos theta, sin theta) and phi the polar angle of its
// tangent (a', b') = e^rho sin(2 theta) (cos phi, sin phi).  For interior
// profile points theta lies in (0, pi/2); phi is only defined modulo 2 pi and
// the doubled-cone separatrices make use of values outside (-pi/2, pi/2].
struct PhasePoint {
    double theta = 0.0;
    double phi = 0.0;
};

// Phase point together with the logarithmic radius rho = log |(a, b)|.
struct FlowState {
    double rho = 0.0;
    PhasePoint point;
};

// theta' and phi' of the angular subsystem, which is autonomous.
std::array<double, 2> vector_field(const ConeParams& params, const PhasePoint& q);

// rho' = sin(2 theta) cos(theta - phi); rho decouples from (theta, phi).
double radial_rate(const ConeParams& params, const PhasePoint& q);

// Jacobian of vector_field with respect to (theta, phi), evaluated analytically.
std::array<std::array<double, 2>, 2> vector_field_jacobian(const ConeParams& params,
                                                           const PhasePoint& q);

enum class SingularKind {
    Saddle,
    StableNode,   // real negative eigenvalues (n >= 6)
    StableFocus,  // complex pair with negative real part (n <= 5)
};

struct SingularPointInfo {
    PhasePoint location;
    SingularKind kind = SingularKind::Saddle;
    std::array<std::array<double, 2>, 2> jacobian{};
    Eigen2 eigen;  // eigen.values[0] has the larger real part

    // For a saddle, the direction leaving the singular point (unit vector,
    // eigenvector of the positive eigenvalue).  Undefined for sinks.
    std::array<double, 2> unstable_direction() const;
};

// The three stationary points relevant to the cone: the saddle at
// (pi/2, 0), the saddle at (0, pi/2), and the sink at (theta0, theta0).
// The sink is a node when (n+1)^2 - 8n >= 0 (n >= 6) and a focus otherwise.
std::array<SingularPointInfo, 3> singular_points(const ConeParams& params);

// Side length tau(phi) >= 0 such that the square
// [phi, phi + tau] x [phi, phi + tau] is flow-invariant.  Defined for
// phi in [0, theta0]; tau(0) = pi/2 and tau(theta0) = 0.
double invariant_region_tau(const ConeParams& params, double phi);

struct InvariantRegionReport {
    double phi = 0.0;
    double tau = 0.0;
    // Minimum over all boundary samples of the inward component of the field.
    double min_inward = 0.0;
    // Samples where the field is tangent to within 1e-10 (e.g. corners on the
    // diagonal and the saddle connections along the edges).
    std::size_t tangency_count = 0;
    bool inward = false;       // min_inward >= -1e-10
    // Positivity of phi' on [0, pi/2] x (-pi/2, 0), the strip that forces
    // orbits below the square to enter it.
    double strip_min_phi_rate = 0.0;
    bool strip_positive = false;
};

// Checks that the square [phi, phi + tau(phi)]^2 is invariant by sampling the
// inward normal component of the field on all four edges.
InvariantRegionReport check_invariant_region(const ConeParams& params, double phi,
                                             std::size_t samples_per_edge = 100);

struct OrbitControls {
    double offset = 1e-8;        // initial displacement along the seed direction
    double rho_span = 15.0;      // required increase of rho before termination
    double terminal_dist = 1e-8; // distance to the sink at termination
    double h_max = 1e-2;
    double abs_tol = 1e-11;
    double rel_tol = 1e-11;
    std::size_t max_steps = 10'000'000;
};

struct ProfileSample {
    double s = 0.0;  // flow parameter
    double rho = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    double a = 0.0;   // e^rho cos theta
    double b = 0.0;   // e^rho sin theta
    double da = 0.0;  // da/ds = e^rho sin(2 theta) cos phi
    double db = 0.0;  // db/ds = e^rho sin(2 theta) sin phi
};

struct ProfileCurve {
    ConeParams params;
    int sign = 0;  // +1 for the branch leaving (pi/2, 0), -1 for (0, pi/2), 0 otherwise
    std::vector<ProfileSample> samples;
};

// Integrates the flow from `start` displaced by controls.offset along
// `direction` (normalized internally) until the orbit settles at the sink
// (theta0, theta0): distance below controls.terminal_dist after rho has grown
// by controls.rho_span.  Throws ValidationError for out-of-range offsets and
// ConvergenceError if the orbit leaves the admissible region or the step
// budget is exhausted.
ProfileCurve integrate_orbit(const ConeParams& params, const FlowState& start,
                             const std::array<double, 2>& direction,
                             const OrbitControls& controls = {});

// The two minimal hypersurfaces asymptotic to the cone: sign = +1 follows the
// unstable direction of the saddle (pi/2, 0), sign = -1 the one of (0, pi/2).
ProfileCurve generate_sigma(const ConeParams& params, int sign,
                            const OrbitControls& controls = {});

// Separatrices of the doubled cone: orbits from the source representatives
// (theta0, theta0 -+ pi) to the sink.  variant = +1 starts at phi = theta0 - pi,
// variant = -1 at phi = theta0 + pi.
ProfileCurve doubled_cone_orbit(const ConeParams& params, int variant,
                                const OrbitControls& controls = {});

// Residual of the profile ODE  a'' b' - b'' a' + (a'^2 + b'^2)
// ((n-p) a'/b - p b'/a)  evaluated with derivatives re-fitted from the
// samples (degree-5 local fits in s), divided by the scale
// (a'^2 + b'^2)^{3/2} max(1/a, 1/b).  Entries within residual_fit_margin of
// either end are less accurate: they use one-sided windows, and at the start
// the windows also straddle the integrator's tiny ramp-up steps, which
// amplifies roundoff in the second-derivative estimates.
std::vector<double> scaled_reduced_residuals(const ProfileCurve& curve);

inline constexpr std::size_t residual_fit_margin = 8;

}  // namespace simons
