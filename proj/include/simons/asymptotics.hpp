#pragma once

#include <vector>

#include "simons/graphs.hpp"
#include "simons/numerics.hpp"
#include "simons/phase_flow.hpp"
#include "simons/spectral.hpp"

namespace simons {

// Converts the tail of a profile curve (the part spiralling into (theta0,
// theta0)) into a normal graph over the cone:
//   e^t = a cos theta0 + b sin theta0,   g = e^{-t} (a sin theta0 - b cos theta0),
// computed as t = rho + log cos(theta - theta0), g = tan(theta0 - theta) to
// stay exact at small amplitudes.  The near-cap part (|theta - theta0| beyond
// half the admissible band) is dropped so the amplitude bound holds strictly.
RadialGraph profile_to_graph(const ProfileCurve& curve);

// Inverse map: reconstructs the curve parametrized by t, with
// a = e^t (cos theta0 + g sin theta0), b = e^t (sin theta0 - g cos theta0).
ProfileCurve graph_to_profile(const RadialGraph& graph);

// Exact cone profile a = e^rho cos theta0, b = e^rho sin theta0 with rho
// spanning [rho0, rho1] uniformly and the flow-time parametrization
// s = (rho - rho0)/sin(2 theta0); useful as the zero-graph reference.
ProfileCurve make_cone_profile(const ConeParams& params, double rho0, double rho1, double drho);

// Residual of the invariant minimal-surface equation
//   (g' + g'')/W^3 + (n g + (g + g')(n + n kappa g)) / (W (1 + kappa g - g^2)),
// W = sqrt(1 + (g+g')^2), kappa = (n-2p)/sqrt(p(n-p)).  `scaled` divides by
// the size of the linear terms |g''| + (n+1)|g'| + 2n|g|.
struct ResidualSeries {
    std::vector<double> t;
    std::vector<double> raw;
    std::vector<double> scaled;
};

ResidualSeries residual_invariant(const ConeParams& params, const RadialGraph& graph);

// Linear part g'' + (n+1) g' + 2n g; the nonlinear remainder of the full
// equation is residual_invariant().raw minus this.
std::vector<double> linear_residual(const ConeParams& params, const RadialGraph& graph);

// Samples g(t) of a radial graph onto a uniform t-grid (local polynomial
// interpolation) and extends it as a constant in both angles.
TorusGraph extend_radial_to_torus(const RadialGraph& graph, double t0, double dt, int nt,
                                  int ntheta, int nphi);

// Full minimal-surface-equation residual for n=2, p=1 torus graphs:
// spectral derivatives in the angles, 4th-order centered differences in t
// (applied twice, so 4 slices are trimmed at each end).  The result is a grid
// of residual values starting at t0 + 4 dt with nt - 8 slices.
TorusGraph residual_full_torus(const TorusGraph& graph);

struct DecayFit {
    double rate = 0.0;       // fitted exponential rate (negative for decay)
    double frequency = 0.0;  // fitted angular frequency; 0 for monotone data
    double window_lo = 0.0;  // t-interval actually used
    double window_hi = 0.0;
    double rms_residual = 0.0;
};

struct DecayFitControls {
    double noise_floor = 1e-10;  // |g| below ~3x this is treated as noise
    double amplitude_cap = 0.0;  // 0 = default: 1e-3 monotone, 1e-2 oscillatory
    int min_sign_changes = 4;    // required zero crossings, oscillatory case
    double min_window = 5.0;     // required t-length of the fitting window
};

// Fits the asymptotic decay of g.  expected.kind selects the model: a complex
// pair means envelope + zero-crossing analysis, real roots mean a straight
// log|g| regression.  Throws ConvergenceError when the usable window is too
// short or has too few sign changes.
DecayFit fit_decay(const RadialGraph& graph, const IndicialRoots& expected,
                   const DecayFitControls& controls = {});

// theta(0, r) = Vol(Sigma cap B(0, r)) / (omega_{n+1} r^{n+1}) for the listed
// radii.  The volume integral is re-integrated along the flow with the
// augmented state V' = e^{(n+1) rho} cos^p(theta) sin^{n-p}(theta) sin(2 theta),
// landing exactly on rho = log r for each radius.  cap_bound bounds the volume
// of the cap sliver between the axis and the first curve sample, which is not
// included in the integral.
struct DensityProfile {
    std::vector<double> radii;
    std::vector<double> theta;
    double limit_estimate = 0.0;
    double cap_bound = 0.0;
};

DensityProfile density_profile(const ProfileCurve& curve, const std::vector<double>& radii);

// Density ratio centered at the cap tip (the point where the collapsing
// sphere factor degenerates; a smooth point of the surface, so the ratio
// tends to 1 as r -> 0).  Only defined for curves with sign = +1 or -1.
DensityProfile density_at_axis_point(const ProfileCurve& curve, const std::vector<double>& radii);

// Flux of the outward conormal over the torus slice at parameter t of an
// n=2, p=1 graph: F = sum over the grid of cross4(n, Y_theta, Y_phi) dtheta dphi
// with n = cross4(Y_t, Y_theta, Y_phi) normalized; exact frame, trapezoid rule.
struct FluxResult {
    double t = 0.0;
    Vec4 flux{};
    int resolution = 0;
};

FluxResult flux(const TorusGraph& graph, double t, int resolution);

// Max over common flow parameter s of |(rho, pi/2 - theta, pi/2 - phi) - image|
// between sigma(curve a) and curve b, where sigma reflects both angles through
// pi/4.  sigma conjugates the flow of (n, p) to the flow of (n, n-p), so the
// + orbit of one family maps onto the - orbit of the other with the same s.
double sigma_orbit_distance(const ProfileCurve& a, const ProfileCurve& b);

} // namespace simons
