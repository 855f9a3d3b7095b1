#include "simons/phase_flow.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "simons/errors.hpp"

namespace simons {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::array<double, 2> vector_field(const ConeParams& params, const PhasePoint& q) {
    const double n = params.n, p = params.p;
    const double dtheta = -std::sin(2.0 * q.theta) * std::sin(q.theta - q.phi);
    const double dphi =
        (n - 2.0 * p) * std::cos(q.theta - q.phi) + n * std::cos(q.theta + q.phi);
    return {dtheta, dphi};
}

double radial_rate(const ConeParams& params, const PhasePoint& q) {
    (void)params;
    return std::sin(2.0 * q.theta) * std::cos(q.theta - q.phi);
}

std::array<std::array<double, 2>, 2> vector_field_jacobian(const ConeParams& params,
                                                           const PhasePoint& q) {
    const double n = params.n, p = params.p;
    const double s2t = std::sin(2.0 * q.theta), c2t = std::cos(2.0 * q.theta);
    const double sm = std::sin(q.theta - q.phi), cm = std::cos(q.theta - q.phi);
    const double sp = std::sin(q.theta + q.phi);
    return {{{-2.0 * c2t * sm - s2t * cm, s2t * cm},
             {-(n - 2.0 * p) * sm - n * sp, (n - 2.0 * p) * sm - n * sp}}};
}

std::array<double, 2> SingularPointInfo::unstable_direction() const {
    const double vx = eigen.vectors[0][0].real(), vy = eigen.vectors[0][1].real();
    const double norm = std::hypot(vx, vy);
    return {vx / norm, vy / norm};
}

namespace {

SingularPointInfo make_info(const ConeParams& params, double theta, double phi) {
    SingularPointInfo info;
    info.location = {theta, phi};
    info.jacobian = vector_field_jacobian(params, info.location);
    info.eigen = eigen2(info.jacobian);
    const auto l0 = info.eigen.values[0], l1 = info.eigen.values[1];
    if (l0.imag() != 0.0)
        info.kind = SingularKind::StableFocus;
    else if (l0.real() > 0.0 && l1.real() < 0.0)
        info.kind = SingularKind::Saddle;
    else
        info.kind = SingularKind::StableNode;
    return info;
}

} // namespace

std::array<SingularPointInfo, 3> singular_points(const ConeParams& params) {
    return {make_info(params, kPi / 2.0, 0.0), make_info(params, 0.0, kPi / 2.0),
            make_info(params, params.theta0, params.theta0)};
}

double invariant_region_tau(const ConeParams& params, double phi) {
    if (!(phi >= -1e-12 && phi <= params.theta0 + 1e-12))
        throw ValidationError("invariant_region_tau: phi must lie in [0, theta0]");
    const double num = std::cos(2.0 * phi) - std::cos(2.0 * params.theta0);
    const double den = std::sin(2.0 * phi);
    if (num <= 0.0) return 0.0; // phi == theta0 up to roundoff
    return std::atan2(num, den);
}

InvariantRegionReport check_invariant_region(const ConeParams& params, double phi,
                                             std::size_t samples_per_edge) {
    if (samples_per_edge < 2)
        throw ValidationError("check_invariant_region: need at least 2 samples per edge");
    InvariantRegionReport report;
    report.phi = phi;
    report.tau = invariant_region_tau(params, phi);

    const double lo = phi, hi = phi + report.tau;
    const std::size_t m = samples_per_edge;
    double min_inward = std::numeric_limits<double>::infinity();
    std::size_t tangencies = 0;
    auto record = [&](double c) {
        min_inward = std::min(min_inward, c);
        if (std::abs(c) <= 1e-10) ++tangencies;
    };
    for (std::size_t i = 0; i < m; ++i) {
        const double u = lo + (hi - lo) * double(i) / double(m - 1);
        record(vector_field(params, {u, lo})[1]);   // bottom: phi' >= 0
        record(-vector_field(params, {u, hi})[1]);  // top: phi' <= 0
        record(vector_field(params, {lo, u})[0]);   // left: theta' >= 0
        record(-vector_field(params, {hi, u})[0]);  // right: theta' <= 0
    }
    report.min_inward = min_inward;
    report.tangency_count = tangencies;
    report.inward = min_inward >= -1e-10;

    // phi' > 0 below the square pushes orbits with phi < 0 up into it.
    double strip_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        const double theta = (kPi / 2.0) * (double(i) + 0.5) / double(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double ph = -kPi / 2.0 + (kPi / 2.0) * (double(j) + 0.5) / double(m);
            strip_min = std::min(strip_min, vector_field(params, {theta, ph})[1]);
        }
    }
    report.strip_min_phi_rate = strip_min;
    report.strip_positive = strip_min > 0.0;
    return report;
}

ProfileCurve integrate_orbit(const ConeParams& params, const FlowState& start,
                             const std::array<double, 2>& direction,
                             const OrbitControls& controls) {
    if (!(controls.offset >= 1e-10 && controls.offset <= 1e-6))
        throw ValidationError("integrate_orbit: offset must lie in [1e-10, 1e-6]");
    const double dn = std::hypot(direction[0], direction[1]);
    if (!(dn > 0.0)) throw ValidationError("integrate_orbit: zero seed direction");

    const double theta0 = params.theta0;
    const double theta_lo = -1e-6, theta_hi = kPi / 2.0 + 1e-6;
    // Orbits seeded at a spiral source swing well past the seed before the
    // nonlinear flow channels them, so leave generous room around start.phi.
    const double phi_lo = std::min(start.point.phi - 1.8, -kPi / 2.0 - 0.2);
    const double phi_hi = std::max(start.point.phi + 1.8, kPi / 2.0 + 0.2);

    std::array<double, 3> y = {start.rho, start.point.theta + controls.offset * direction[0] / dn,
                               start.point.phi + controls.offset * direction[1] / dn};
    const double rho_start = start.rho;

    auto rhs = [&params](double, const std::array<double, 3>& y, std::array<double, 3>& dy) {
        const PhasePoint q{y[1], y[2]};
        const auto v = vector_field(params, q);
        dy[0] = radial_rate(params, q);
        dy[1] = v[0];
        dy[2] = v[1];
    };

    ProfileCurve curve;
    curve.params = params;
    auto observe = [&](double s, const std::array<double, 3>& y) {
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(y[2]))
            throw ConvergenceError("integrate_orbit: state is not finite");
        if (y[1] < theta_lo || y[1] > theta_hi || y[2] < phi_lo || y[2] > phi_hi)
            throw ConvergenceError("integrate_orbit: orbit left the admissible region at s=" +
                                   std::to_string(s));
        ProfileSample sample;
        sample.s = s;
        sample.rho = y[0];
        sample.theta = y[1];
        sample.phi = y[2];
        const double e = std::exp(y[0]), s2t = std::sin(2.0 * y[1]);
        sample.a = e * std::cos(y[1]);
        sample.b = e * std::sin(y[1]);
        sample.da = e * s2t * std::cos(y[2]);
        sample.db = e * s2t * std::sin(y[2]);
        curve.samples.push_back(sample);
    };
    auto done = [&](double, const std::array<double, 3>& y) {
        return std::hypot(y[1] - theta0, y[2] - theta0) <= controls.terminal_dist &&
               y[0] - rho_start >= controls.rho_span;
    };

    Rk45Controls ctl;
    ctl.abs_tol = controls.abs_tol;
    ctl.rel_tol = controls.rel_tol;
    ctl.h_max = controls.h_max;
    ctl.max_steps = static_cast<std::int64_t>(controls.max_steps);
    double s = 0.0;
    rk45_integrate<3>(rhs, s, y, ctl, observe, done);
    return curve;
}

ProfileCurve generate_sigma(const ConeParams& params, int sign, const OrbitControls& controls) {
    if (sign != 1 && sign != -1)
        throw ValidationError("generate_sigma: sign must be +1 or -1");
    const auto infos = singular_points(params);
    const SingularPointInfo& saddle = (sign == 1) ? infos[0] : infos[1];
    auto dir = saddle.unstable_direction();
    // Orient the seed into the open quadrant: theta decreasing from pi/2 for
    // the + branch, increasing from 0 for the - branch.
    if ((sign == 1 && dir[0] > 0.0) || (sign == -1 && dir[0] < 0.0)) {
        dir[0] = -dir[0];
        dir[1] = -dir[1];
    }
    ProfileCurve curve =
        integrate_orbit(params, {0.0, saddle.location}, dir, controls);
    curve.sign = sign;
    return curve;
}

ProfileCurve doubled_cone_orbit(const ConeParams& params, int variant,
                                const OrbitControls& controls) {
    if (variant != 1 && variant != -1)
        throw ValidationError("doubled_cone_orbit: variant must be +1 or -1");
    const double theta0 = params.theta0;
    const FlowState start{0.0, {theta0, theta0 - variant * kPi}};
    // The outward spiral flips the seed phase: offsetting against the net
    // phi-drift is what routes the orbit to the sink representative at
    // (theta0, theta0) instead of its 2 pi translate on the cylinder.
    const std::array<double, 2> dir = {0.0, -double(variant)};
    return integrate_orbit(params, start, dir, controls);
}

std::vector<double> scaled_reduced_residuals(const ProfileCurve& curve) {
    const std::size_t m = curve.samples.size();
    if (m < 9)
        throw ValidationError("scaled_reduced_residuals: need at least 9 samples");
    std::vector<double> s(m), rho(m), theta(m);
    for (std::size_t i = 0; i < m; ++i) {
        s[i] = curve.samples[i].s;
        rho[i] = curve.samples[i].rho;
        theta[i] = curve.samples[i].theta;
    }
    // Degree 5 keeps the smoothing bias of the second-derivative estimates
    // well below the 1e-6 residual scale at the default step size.
    const LocalFit frho = local_poly_derivatives(s, rho, 5, 9);
    const LocalFit ftheta = local_poly_derivatives(s, theta, 5, 9);

    const double n = curve.params.n, p = curve.params.p;
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double e = std::exp(rho[i]);
        const double ct = std::cos(theta[i]), st = std::sin(theta[i]);
        const double a = e * ct, b = e * st;
        const double r1 = frho.d1[i], r2 = frho.d2[i];
        const double t1 = ftheta.d1[i], t2 = ftheta.d2[i];
        const double da = e * (r1 * ct - t1 * st);
        const double db = e * (r1 * st + t1 * ct);
        const double qa = r1 * r1 + r2 - t1 * t1, qb = 2.0 * r1 * t1 + t2;
        const double dda = e * (qa * ct - qb * st);
        const double ddb = e * (qa * st + qb * ct);
        const double speed_sq = da * da + db * db;
        const double residual =
            dda * db - ddb * da + speed_sq * ((n - p) * da / b - p * db / a);
        const double scale =
            speed_sq * std::sqrt(speed_sq) * std::max(1.0 / a, 1.0 / b);
        out[i] = std::abs(residual) / scale;
    }
    return out;
}

} // namespace simons
