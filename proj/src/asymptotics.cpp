#include "simons/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "simons/errors.hpp"
#include "simons/rk45.hpp"

namespace simons {

namespace {

constexpr double kPi = 3.14159265358979323846;

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

} // namespace

RadialGraph profile_to_graph(const ProfileCurve& curve) {
    const ConeParams& cp = curve.params;
    const double theta0 = cp.theta0;
    // Admissible band: |g| = |tan(theta0 - theta)| stays under the amplitude
    // bound iff |theta - theta0| < min(theta0, pi/2 - theta0); cut at half.
    const double band = 0.5 * std::min(theta0, kPi / 2.0 - theta0);
    std::size_t start = 0;
    if (curve.sign == 1) {
        while (start < curve.samples.size() && curve.samples[start].theta > theta0 + band)
            ++start;
    } else if (curve.sign == -1) {
        while (start < curve.samples.size() && curve.samples[start].theta < theta0 - band)
            ++start;
    }
    if (curve.samples.size() - start < 9)
        throw ValidationError("profile_to_graph: too few samples past the cap region");

    std::vector<double> t, g;
    t.reserve(curve.samples.size() - start);
    g.reserve(curve.samples.size() - start);
    for (std::size_t i = start; i < curve.samples.size(); ++i) {
        const auto& smp = curve.samples[i];
        const double c = std::cos(smp.theta - theta0);
        if (!(c > 0.0))
            throw ValidationError("profile_to_graph: sample outside the graph chart");
        const double ti = smp.rho + std::log(c);
        if (!t.empty() && !(ti > t.back()))
            throw ValidationError("profile_to_graph: non-monotone graph parameter");
        t.push_back(ti);
        g.push_back(std::tan(theta0 - smp.theta));
    }
    return make_radial_graph(cp, std::move(t), std::move(g));
}

ProfileCurve graph_to_profile(const RadialGraph& graph) {
    const double c0 = graph.params.cos_theta0, s0 = graph.params.sin_theta0;
    ProfileCurve curve;
    curve.params = graph.params;
    curve.sign = 0;
    curve.samples.resize(graph.t.size());
    // Parametrized by t (not flow time): a = e^t(cos theta0 + g sin theta0),
    // b = e^t(sin theta0 - g cos theta0), derivatives taken in t.
    for (std::size_t i = 0; i < graph.t.size(); ++i) {
        const double et = std::exp(graph.t[i]), g = graph.g[i], dg = graph.dg[i];
        ProfileSample& smp = curve.samples[i];
        smp.s = graph.t[i];
        smp.a = et * (c0 + g * s0);
        smp.b = et * (s0 - g * c0);
        smp.da = smp.a + et * dg * s0;
        smp.db = smp.b - et * dg * c0;
        smp.rho = 0.5 * std::log(smp.a * smp.a + smp.b * smp.b);
        smp.theta = std::atan2(smp.b, smp.a);
        smp.phi = std::atan2(smp.db, smp.da);
    }
    return curve;
}

ProfileCurve make_cone_profile(const ConeParams& params, double rho0, double rho1, double drho) {
    if (!(drho > 0.0) || !(rho1 > rho0))
        throw ValidationError("make_cone_profile: need rho1 > rho0 and drho > 0");
    const double theta0 = params.theta0, s2t = params.sin_two_theta0;
    ProfileCurve curve;
    curve.params = params;
    curve.sign = 0;
    const std::size_t m = std::size_t((rho1 - rho0) / drho + 1e-9) + 1;
    curve.samples.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double rho = rho0 + drho * double(i);
        const double e = std::exp(rho);
        ProfileSample& smp = curve.samples[i];
        smp.s = (rho - rho0) / s2t;
        smp.rho = rho;
        smp.theta = theta0;
        smp.phi = theta0;
        smp.a = e * params.cos_theta0;
        smp.b = e * params.sin_theta0;
        smp.da = e * s2t * params.cos_theta0;
        smp.db = e * s2t * params.sin_theta0;
    }
    return curve;
}

ResidualSeries residual_invariant(const ConeParams& params, const RadialGraph& graph) {
    const double n = params.n, p = params.p;
    const double kappa = (n - 2.0 * p) / std::sqrt(p * (n - p));
    ResidualSeries out;
    out.t = graph.t;
    out.raw.resize(graph.t.size());
    out.scaled.resize(graph.t.size());
    for (std::size_t i = 0; i < graph.t.size(); ++i) {
        const double g = graph.g[i], dg = graph.dg[i], ddg = graph.ddg[i];
        const double u = g + dg;
        const double W = std::sqrt(1.0 + u * u);
        const double denom = 1.0 + kappa * g - g * g;
        if (!(denom > 1e-9))
            throw ValidationError("residual_invariant: amplitude bound violated");
        const double raw =
            (dg + ddg) / (W * W * W) + (n * g + u * (n + n * kappa * g)) / (W * denom);
        const double scale = std::abs(ddg) + (n + 1.0) * std::abs(dg) + 2.0 * n * std::abs(g);
        out.raw[i] = raw;
        out.scaled[i] = std::abs(raw) / std::max(scale, 1e-300);
    }
    return out;
}

std::vector<double> linear_residual(const ConeParams& params, const RadialGraph& graph) {
    const double n = params.n;
    std::vector<double> out(graph.t.size());
    for (std::size_t i = 0; i < graph.t.size(); ++i)
        out[i] = graph.ddg[i] + (n + 1.0) * graph.dg[i] + 2.0 * n * graph.g[i];
    return out;
}

TorusGraph extend_radial_to_torus(const RadialGraph& graph, double t0, double dt, int nt,
                                  int ntheta, int nphi) {
    if (graph.t.empty() || t0 < graph.t.front() - 1e-12 ||
        t0 + dt * (nt - 1) > graph.t.back() + 1e-12)
        throw ValidationError("extend_radial_to_torus: t-grid outside the graph range");
    TorusGraph tg = make_torus_graph(t0, dt, nt, ntheta, nphi);
    for (int it = 0; it < nt; ++it) {
        const double g = local_poly_interpolate(graph.t, graph.g, tg.t_at(it));
        for (int jt = 0; jt < ntheta; ++jt)
            for (int jp = 0; jp < nphi; ++jp) tg.at(it, jt, jp) = g;
    }
    return tg;
}

namespace {

// d/dtheta and d/dphi of a slice, dense spectral differentiation.
void apply_dtheta(const std::vector<double>& d, int m1, int m2, const double* w, double* out) {
    for (int j = 0; j < m1; ++j)
        for (int k = 0; k < m2; ++k) {
            double acc = 0.0;
            for (int j2 = 0; j2 < m1; ++j2) acc += d[std::size_t(j) * m1 + j2] * w[j2 * m2 + k];
            out[j * m2 + k] = acc;
        }
}

void apply_dphi(const std::vector<double>& d, int m1, int m2, const double* w, double* out) {
    for (int j = 0; j < m1; ++j)
        for (int k = 0; k < m2; ++k) {
            double acc = 0.0;
            for (int k2 = 0; k2 < m2; ++k2) acc += d[std::size_t(k) * m2 + k2] * w[j * m2 + k2];
            out[j * m2 + k] = acc;
        }
}

} // namespace

TorusGraph residual_full_torus(const TorusGraph& graph) {
    const int nt = graph.nt, m1 = graph.ntheta, m2 = graph.nphi;
    if (nt < 9) throw ValidationError("residual_full_torus: need at least 9 t-slices");
    if (m1 < 32 || m2 < 32)
        throw ValidationError("residual_full_torus: need at least 32 points per angle");
    for (double v : graph.values)
        if (!(std::abs(v) < 1.0 - 1e-9))
            throw ValidationError("residual_full_torus: amplitude bound violated");

    const std::vector<double> dth = periodic_diff_matrix(m1);
    const std::vector<double> dph = periodic_diff_matrix(m2);
    const std::size_t npts = std::size_t(m1) * m2;
    const double dt = graph.dt;

    // Stage 1 on slices [2, nt-3]: A = (w + w_t)/W and the three non-d/dt
    // terms of the equation (n=2, p=1, so kappa = 0).
    std::vector<double> A(std::size_t(nt) * npts, 0.0), S(std::size_t(nt) * npts, 0.0);
    std::vector<double> wt(npts), wth(npts), wph(npts), W(npts), B(npts), DB(npts);
    for (int it = 2; it + 2 < nt; ++it) {
        const double* w = graph.values.data() + std::size_t(it) * npts;
        const double* wm2 = graph.values.data() + std::size_t(it - 2) * npts;
        const double* wm1 = graph.values.data() + std::size_t(it - 1) * npts;
        const double* wp1 = graph.values.data() + std::size_t(it + 1) * npts;
        const double* wp2 = graph.values.data() + std::size_t(it + 2) * npts;
        for (std::size_t q = 0; q < npts; ++q)
            wt[q] = (wm2[q] - 8.0 * wm1[q] + 8.0 * wp1[q] - wp2[q]) / (12.0 * dt);
        apply_dtheta(dth, m1, m2, w, wth.data());
        apply_dphi(dph, m1, m2, w, wph.data());
        for (std::size_t q = 0; q < npts; ++q) {
            const double u = w[q] + wt[q];
            const double f1 = 1.0 + w[q], f2 = 1.0 - w[q];
            W[q] = std::sqrt(1.0 + u * u + 2.0 * wth[q] * wth[q] / (f1 * f1) +
                             2.0 * wph[q] * wph[q] / (f2 * f2));
            A[std::size_t(it) * npts + q] = u / W[q];
            S[std::size_t(it) * npts + q] =
                (2.0 * w[q] + 2.0 * u) / (W[q] * (1.0 - w[q] * w[q]));
        }
        for (std::size_t q = 0; q < npts; ++q) B[q] = wth[q] / ((1.0 + w[q]) * W[q]);
        apply_dtheta(dth, m1, m2, B.data(), DB.data());
        for (std::size_t q = 0; q < npts; ++q)
            S[std::size_t(it) * npts + q] += 2.0 / (1.0 + w[q]) * DB[q];
        for (std::size_t q = 0; q < npts; ++q) B[q] = wph[q] / ((1.0 - w[q]) * W[q]);
        apply_dphi(dph, m1, m2, B.data(), DB.data());
        for (std::size_t q = 0; q < npts; ++q)
            S[std::size_t(it) * npts + q] += 2.0 / (1.0 - w[q]) * DB[q];
    }

    // Stage 2 on slices [4, nt-5]: residual = d/dt A + S.
    TorusGraph res = make_torus_graph(graph.t0 + 4.0 * dt, dt, nt - 8, m1, m2);
    for (int it = 4; it + 4 < nt; ++it) {
        const double* am2 = A.data() + std::size_t(it - 2) * npts;
        const double* am1 = A.data() + std::size_t(it - 1) * npts;
        const double* ap1 = A.data() + std::size_t(it + 1) * npts;
        const double* ap2 = A.data() + std::size_t(it + 2) * npts;
        const double* s = S.data() + std::size_t(it) * npts;
        double* out = res.values.data() + std::size_t(it - 4) * npts;
        for (std::size_t q = 0; q < npts; ++q)
            out[q] = (am2[q] - 8.0 * am1[q] + 8.0 * ap1[q] - ap2[q]) / (12.0 * dt) + s[q];
    }
    return res;
}

DecayFit fit_decay(const RadialGraph& graph, const IndicialRoots& expected,
                   const DecayFitControls& controls) {
    const auto& t = graph.t;
    const auto& g = graph.g;
    const bool oscillatory = expected.kind == RootKind::ComplexPair;
    const double cap =
        controls.amplitude_cap > 0.0 ? controls.amplitude_cap : (oscillatory ? 1e-2 : 1e-3);
    const double lo_amp = 3.0 * controls.noise_floor;

    DecayFit fit;
    if (oscillatory) {
        std::vector<double> tc;           // interpolated zero crossings
        std::vector<std::size_t> ci;      // sample index left of each crossing
        for (std::size_t i = 0; i + 1 < t.size(); ++i)
            if (g[i] != 0.0 && g[i] * g[i + 1] < 0.0) {
                tc.push_back(t[i] + (t[i + 1] - t[i]) * g[i] / (g[i] - g[i + 1]));
                ci.push_back(i);
            }
        if (tc.size() < 2) throw ConvergenceError("fit_decay: too few sign changes");

        // Envelope from the largest |g| between consecutive crossings.
        std::vector<double> pk_t(tc.size() - 1), pk_v(tc.size() - 1);
        for (std::size_t j = 0; j + 1 < tc.size(); ++j) {
            double best = 0.0, best_t = tc[j];
            for (std::size_t i = ci[j] + 1; i <= ci[j + 1]; ++i)
                if (std::abs(g[i]) > best) {
                    best = std::abs(g[i]);
                    best_t = t[i];
                }
            pk_t[j] = best_t;
            pk_v[j] = best;
        }
        std::size_t j0 = 0;
        while (j0 < pk_v.size() && pk_v[j0] > cap) ++j0;
        std::size_t j1 = pk_v.size();
        while (j1 > j0 && pk_v[j1 - 1] < lo_amp) --j1;
        if (j1 <= j0 + 2) throw ConvergenceError("fit_decay: too few envelope maxima");
        const std::size_t crossings = j1 - j0 + 1;
        if (crossings < std::size_t(controls.min_sign_changes))
            throw ConvergenceError("fit_decay: too few sign changes");

        double spacing = (tc[j1] - tc[j0]) / double(crossings - 1);
        fit.frequency = kPi / spacing;
        std::vector<double> xs(pk_t.begin() + j0, pk_t.begin() + j1);
        std::vector<double> ys(j1 - j0);
        for (std::size_t j = j0; j < j1; ++j) ys[j - j0] = std::log(pk_v[j]);
        const LineFit lf = fit_line(xs, ys);
        fit.rate = lf.slope;
        fit.rms_residual = lf.rms_residual;
        fit.window_lo = tc[j0];
        fit.window_hi = tc[j1];
    } else {
        std::size_t i1 = t.size();
        while (i1 > 0 && std::abs(g[i1 - 1]) < lo_amp) --i1;
        std::size_t i0 = 0;
        while (i0 < i1 && std::abs(g[i0]) > cap) ++i0;
        if (i1 <= i0 + 4) throw ConvergenceError("fit_decay: too few samples in window");
        std::vector<double> xs, ys;
        xs.reserve(i1 - i0);
        ys.reserve(i1 - i0);
        for (std::size_t i = i0; i < i1; ++i) {
            const double a = std::abs(g[i]);
            if (a < lo_amp || a > cap) continue;
            xs.push_back(t[i]);
            ys.push_back(std::log(a));
        }
        if (xs.size() < 5) throw ConvergenceError("fit_decay: too few samples in window");
        const LineFit lf = fit_line(xs, ys);
        fit.rate = lf.slope;
        fit.frequency = 0.0;
        fit.rms_residual = lf.rms_residual;
        fit.window_lo = xs.front();
        fit.window_hi = xs.back();
    }
    if (fit.window_hi - fit.window_lo < controls.min_window)
        throw ConvergenceError("fit_decay: fitting window shorter than " +
                               std::to_string(controls.min_window));
    return fit;
}

namespace {

// Augmented flow with the swept-volume coordinate; lands exactly on each
// rho = log r target by shrinking the final step.
struct VolumeIntegrator {
    const ConeParams& params;

    void operator()(double, const std::array<double, 4>& y, std::array<double, 4>& dy) const {
        const PhasePoint q{y[1], y[2]};
        const auto v = vector_field(params, q);
        dy[0] = radial_rate(params, q);
        dy[1] = v[0];
        dy[2] = v[1];
        const double c = std::cos(y[1]), s = std::sin(y[1]);
        dy[3] = std::exp((params.n + 1.0) * y[0]) * ipow(c, params.p) *
                ipow(s, params.n - params.p) * std::sin(2.0 * y[1]);
    }
};

std::vector<double> sweep_volumes(const ProfileCurve& curve, const std::vector<double>& rho_targets) {
    const auto& first = curve.samples.front();
    VolumeIntegrator rhs{curve.params};
    Rk45Controls ctl;
    std::array<double, 4> y = {first.rho, first.theta, first.phi, 0.0};
    double s = 0.0, h = ctl.h_init;
    std::vector<double> out(rho_targets.size());
    std::size_t k = 0;
    std::int64_t attempts = 0;
    while (k < rho_targets.size()) {
        const double target = rho_targets[k];
        if (y[0] >= target - 1e-12 * std::max(1.0, std::abs(target))) {
            out[k++] = y[3];
            continue;
        }
        if (++attempts > ctl.max_steps)
            throw ConvergenceError("density_profile: step budget exhausted");
        const std::array<double, 4> y_prev = y;
        const double s_prev = s;
        double h_next = h;
        if (!rk45_step<4>(rhs, s, y, h, &h_next, ctl)) {
            h = h_next;
            continue;
        }
        if (y[0] > target) {
            // Re-take the step from y_prev with a clipped size; Newton on
            // h using the observed slope, a few iterations suffice.
            double hm = h * (target - y_prev[0]) / (y[0] - y_prev[0]);
            bool landed = false;
            for (int iter = 0; iter < 60 && !landed; ++iter) {
                s = s_prev;
                y = y_prev;
                double hn = hm;
                if (!rk45_step<4>(rhs, s, y, hm, &hn, ctl)) {
                    hm = hn;
                    continue;
                }
                const double err = y[0] - target;
                if (std::abs(err) <= 1e-12 * std::max(1.0, std::abs(target))) {
                    landed = true;
                } else {
                    const double slope = (y[0] - y_prev[0]) / hm;
                    const double hm_new = hm - err / slope;
                    hm = (hm_new > 0.0) ? hm_new : 0.5 * hm;
                }
            }
            if (!landed) throw ConvergenceError("density_profile: failed to land on radius");
        }
        h = h_next;
    }
    return out;
}

double cap_volume_bound(const ProfileCurve& curve) {
    const auto& first = curve.samples.front();
    const ConeParams& cp = curve.params;
    const double sp = sphere_volume(cp.p) * sphere_volume(cp.n - cp.p);
    if (curve.sign == 1)
        return 1.25 * sp * ipow(first.b, cp.n - cp.p) * ipow(first.a, cp.p + 1) / (cp.p + 1.0);
    if (curve.sign == -1)
        return 1.25 * sp * ipow(first.a, cp.p) * ipow(first.b, cp.n - cp.p + 1) /
               (cp.n - cp.p + 1.0);
    // Open-ended curve (e.g. exact cone): bound the missing inner piece by
    // the cone volume below the first sample's scale.
    return 1.25 * sp * ipow(std::cos(first.theta), cp.p) *
           ipow(std::sin(first.theta), cp.n - cp.p) * std::exp((cp.n + 1.0) * first.rho) /
           (cp.n + 1.0);
}

} // namespace

DensityProfile density_profile(const ProfileCurve& curve, const std::vector<double>& radii) {
    if (curve.samples.size() < 2) throw ValidationError("density_profile: empty curve");
    if (radii.empty()) throw ValidationError("density_profile: no radii");
    for (std::size_t j = 0; j < radii.size(); ++j) {
        if (!(radii[j] > 0.0)) throw ValidationError("density_profile: radii must be positive");
        if (j > 0 && !(radii[j] > radii[j - 1]))
            throw ValidationError("density_profile: radii must increase");
    }
    const double rho_lo = curve.samples.front().rho, rho_hi = curve.samples.back().rho;
    std::vector<double> targets(radii.size());
    for (std::size_t j = 0; j < radii.size(); ++j) {
        targets[j] = std::log(radii[j]);
        if (targets[j] < rho_lo - 1e-12 || targets[j] > rho_hi + 1e-12)
            throw ValidationError("density_profile: radius outside curve coverage");
    }

    const std::vector<double> vols = sweep_volumes(curve, targets);
    const ConeParams& cp = curve.params;
    const double sp = sphere_volume(cp.p) * sphere_volume(cp.n - cp.p);
    const double omega = ball_volume(cp.n + 1);

    DensityProfile prof;
    prof.radii = radii;
    prof.theta.resize(radii.size());
    for (std::size_t j = 0; j < radii.size(); ++j)
        prof.theta[j] = sp * vols[j] / (omega * ipow(radii[j], cp.n + 1));
    prof.limit_estimate = prof.theta.back();
    prof.cap_bound = cap_volume_bound(curve);
    return prof;
}

namespace {

// Fraction of the unit m-sphere with u = cos(angle to a fixed pole) >= q.
double cap_fraction(int m, double q) {
    if (q <= -1.0) return 1.0;
    if (q >= 1.0) return 0.0;
    if (m == 1) return std::acos(q) / kPi;
    if (m == 2) return 0.5 * (1.0 - q);
    static const GaussRule rule = gauss_legendre(96);
    auto f = [m](double u) { return std::pow(1.0 - u * u, 0.5 * (m - 2)); };
    const double num = integrate_panels(f, {q, 1.0}, rule);
    const double den = integrate_panels(f, {-1.0, 0.0, 1.0}, rule);
    return num / den;
}

} // namespace

DensityProfile density_at_axis_point(const ProfileCurve& curve, const std::vector<double>& radii) {
    if (curve.sign != 1 && curve.sign != -1)
        throw ValidationError("density_at_axis_point: curve must come from generate_sigma");
    if (radii.empty()) throw ValidationError("density_at_axis_point: no radii");
    for (std::size_t j = 0; j < radii.size(); ++j) {
        if (!(radii[j] > 0.0))
            throw ValidationError("density_at_axis_point: radii must be positive");
        if (j > 0 && !(radii[j] > radii[j - 1]))
            throw ValidationError("density_at_axis_point: radii must increase");
    }

    const ConeParams& cp = curve.params;
    const bool plus = curve.sign == 1;
    const auto& first = curve.samples.front();
    const double center = plus ? first.b : first.a;  // cap-tip distance from 0
    const int m = plus ? (cp.n - cp.p) : cp.p;       // sphere factor that stays
    const double r_max = radii.back();
    if (std::exp(curve.samples.back().rho) < 1.5 * (center + r_max))
        throw ValidationError("density_at_axis_point: radius outside curve coverage");

    const double sp = sphere_volume(cp.p) * sphere_volume(cp.n - cp.p);
    const double omega = ball_volume(cp.n + 1);

    DensityProfile prof;
    prof.radii = radii;
    prof.theta.resize(radii.size());
    std::vector<double> integrand(curve.samples.size());
    for (std::size_t j = 0; j < radii.size(); ++j) {
        const double r = radii[j];
        for (std::size_t i = 0; i < curve.samples.size(); ++i) {
            const auto& smp = curve.samples[i];
            const double rr = smp.a * smp.a + smp.b * smp.b + center * center - r * r;
            const double q = rr / (2.0 * center * (plus ? smp.b : smp.a));
            integrand[i] = ipow(smp.a, cp.p) * ipow(smp.b, cp.n - cp.p) * std::exp(smp.rho) *
                           std::sin(2.0 * smp.theta) * cap_fraction(m, q);
        }
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < curve.samples.size(); ++i)
            acc += 0.5 * (integrand[i] + integrand[i + 1]) *
                   (curve.samples[i + 1].s - curve.samples[i].s);
        prof.theta[j] = sp * acc / (omega * ipow(r, cp.n + 1));
    }
    prof.limit_estimate = prof.theta.front();  // smooth-point limit is at small r
    prof.cap_bound = cap_volume_bound(curve);
    return prof;
}

namespace {

Vec4 axpy(double alpha, const Vec4& x, const Vec4& y) {
    return {alpha * x[0] + y[0], alpha * x[1] + y[1], alpha * x[2] + y[2], alpha * x[3] + y[3]};
}

} // namespace

FluxResult flux(const TorusGraph& graph, double t, int resolution) {
    if (resolution < 64 || resolution % 2 != 0)
        throw ValidationError("flux: resolution must be even and >= 64");
    if (graph.ntheta != resolution || graph.nphi != resolution)
        throw ValidationError("flux: graph angular resolution must match");
    if (graph.nt < 5) throw ValidationError("flux: need at least 5 t-slices");
    const int it = int(std::lround((t - graph.t0) / graph.dt));
    if (it < 2 || it + 2 >= graph.nt || std::abs(graph.t_at(it) - t) > 1e-9)
        throw ValidationError("flux: t must be an interior grid slice");

    const int m = resolution;
    const std::size_t npts = std::size_t(m) * m;
    const double* w = graph.values.data() + std::size_t(it) * npts;
    std::vector<double> wt(npts), wth(npts), wph(npts);
    {
        const double* wm2 = graph.values.data() + std::size_t(it - 2) * npts;
        const double* wm1 = graph.values.data() + std::size_t(it - 1) * npts;
        const double* wp1 = graph.values.data() + std::size_t(it + 1) * npts;
        const double* wp2 = graph.values.data() + std::size_t(it + 2) * npts;
        for (std::size_t q = 0; q < npts; ++q)
            wt[q] = (wm2[q] - 8.0 * wm1[q] + 8.0 * wp1[q] - wp2[q]) / (12.0 * graph.dt);
    }
    const std::vector<double> d = periodic_diff_matrix(m);
    apply_dtheta(d, m, m, w, wth.data());
    apply_dphi(d, m, m, w, wph.data());

    const double et = std::exp(t);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const double cell = (2.0 * kPi / m) * (2.0 * kPi / m);
    // The summands scale like e^{2t} and cancel almost completely, so
    // accumulate in extended precision to keep the cancellation clean.
    std::array<long double, 4> total = {0.0L, 0.0L, 0.0L, 0.0L};
    for (int j = 0; j < m; ++j) {
        const double cth = std::cos(2.0 * kPi * j / m), sth = std::sin(2.0 * kPi * j / m);
        for (int k = 0; k < m; ++k) {
            const double cph = std::cos(2.0 * kPi * k / m), sph = std::sin(2.0 * kPi * k / m);
            const std::size_t q = std::size_t(j) * m + k;
            const Vec4 R = {inv_sqrt2 * cth, inv_sqrt2 * sth, inv_sqrt2 * cph, inv_sqrt2 * sph};
            const Vec4 N = {inv_sqrt2 * cth, inv_sqrt2 * sth, -inv_sqrt2 * cph,
                            -inv_sqrt2 * sph};
            const Vec4 Eth = {-sth, cth, 0.0, 0.0};
            const Vec4 Eph = {0.0, 0.0, -sph, cph};
            Vec4 Yt = axpy(w[q] + wt[q], N, R);
            Vec4 Yth = axpy(wth[q], N, {(1.0 + w[q]) * inv_sqrt2 * Eth[0],
                                        (1.0 + w[q]) * inv_sqrt2 * Eth[1],
                                        (1.0 + w[q]) * inv_sqrt2 * Eth[2],
                                        (1.0 + w[q]) * inv_sqrt2 * Eth[3]});
            Vec4 Yph = axpy(wph[q], N, {(1.0 - w[q]) * inv_sqrt2 * Eph[0],
                                        (1.0 - w[q]) * inv_sqrt2 * Eph[1],
                                        (1.0 - w[q]) * inv_sqrt2 * Eph[2],
                                        (1.0 - w[q]) * inv_sqrt2 * Eph[3]});
            for (int c = 0; c < 4; ++c) {
                Yt[c] *= et;
                Yth[c] *= et;
                Yph[c] *= et;
            }
            const Vec4 u = cross4(Yt, Yth, Yph);
            const double un = norm4(u);
            if (!(un > 1e-12 * et * et * et))
                throw ConvergenceError("flux: degenerate tangent frame");
            const Vec4 nhat = {u[0] / un, u[1] / un, u[2] / un, u[3] / un};
            const Vec4 conormal = cross4(nhat, Yth, Yph);
            for (int c = 0; c < 4; ++c) total[c] += (long double)(conormal[c]) * cell;
        }
    }
    FluxResult out;
    out.t = t;
    for (int c = 0; c < 4; ++c) out.flux[c] = double(total[c]);
    out.resolution = resolution;
    return out;
}

double sigma_orbit_distance(const ProfileCurve& a, const ProfileCurve& b) {
    if (a.samples.size() < 9 || b.samples.size() < 9)
        throw ValidationError("sigma_orbit_distance: need at least 9 samples");
    std::vector<double> sb(b.samples.size()), rb(b.samples.size()), tb(b.samples.size()),
        pb(b.samples.size());
    for (std::size_t i = 0; i < b.samples.size(); ++i) {
        sb[i] = b.samples[i].s;
        rb[i] = b.samples[i].rho;
        tb[i] = b.samples[i].theta;
        pb[i] = b.samples[i].phi;
    }
    const double s_max = std::min(a.samples.back().s, b.samples.back().s);
    double worst = 0.0;
    for (const auto& smp : a.samples) {
        if (smp.s > s_max) break;
        const double rho_b = local_poly_interpolate(sb, rb, smp.s);
        const double theta_b = local_poly_interpolate(sb, tb, smp.s);
        const double phi_b = local_poly_interpolate(sb, pb, smp.s);
        const double d_rho = smp.rho - rho_b;
        const double d_theta = (kPi / 2.0 - smp.theta) - theta_b;
        const double d_phi = (kPi / 2.0 - smp.phi) - phi_b;
        worst = std::max(worst,
                         std::sqrt(d_rho * d_rho + d_theta * d_theta + d_phi * d_phi));
    }
    return worst;
}

} // namespace simons
