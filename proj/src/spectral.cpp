#include "simons/spectral.hpp"

#include "simons/errors.hpp"
#include "simons/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace simons {

IndicialRoots indicial_roots(const ConeParams& cp, ModeIndex mode) {
    if (mode.k < 0 || mode.l < 0) throw ValidationError("indicial_roots: mode indices must be >= 0");
    const double n = cp.n, p = cp.p;
    const double c = 2.0 * n - (n / p) * mode.k * (mode.k + p - 1.0) -
                     (n / (n - p)) * mode.l * (mode.l + (n - p) - 1.0);
    const double half_sum = -0.5 * (n + 1.0);
    const double disc = (n + 1.0) * (n + 1.0) - 4.0 * c;

    IndicialRoots r;
    r.mode = mode;
    r.constant_term = c;
    if (std::abs(disc) < 1e-12) {
        r.kind = RootKind::RealDouble;
        r.plus = r.minus = half_sum;
    } else if (disc > 0.0) {
        r.kind = RootKind::RealDistinct;
        const double s = 0.5 * std::sqrt(disc);
        r.plus = half_sum + s;
        r.minus = half_sum - s;
    } else {
        r.kind = RootKind::ComplexPair;
        const double s = 0.5 * std::sqrt(-disc);
        r.plus = {half_sum, s};
        r.minus = {half_sum, -s};
    }
    return r;
}

std::vector<BandEntry> kernel_band(const ConeParams& cp, double a, double b) {
    if (!(0.0 < a && a < b)) throw ValidationError("kernel_band: need 0 < a < b");
    const double lo = -b, hi = -a; // band is (lo, hi]
    const double guard = 1e-9;

    std::vector<BandEntry> out;
    auto consider = [&](ModeIndex m, std::complex<double> root, int sign) {
        const double re = root.real();
        if (std::abs(re - hi) < guard || std::abs(re - lo) < guard)
            throw ValidationError("kernel_band: band endpoint collides with an indicial root");
        if (re > lo && re <= hi) out.push_back({m, root, sign});
    };

    // c(k,l) is strictly decreasing in k and in l, so along diagonals k+l = d
    // the plus roots only grow and the minus roots only shrink with d.
    for (int d = 0; d <= 10000; ++d) {
        double min_plus = 1e300, max_minus = -1e300;
        for (int k = 0; k <= d; ++k) {
            const ModeIndex m{k, d - k};
            const IndicialRoots r = indicial_roots(cp, m);
            consider(m, r.plus, +1);
            consider(m, r.minus, -1);
            min_plus = std::min(min_plus, r.plus.real());
            max_minus = std::max(max_minus, r.minus.real());
        }
        if (min_plus > hi + guard && max_minus < lo - guard) break;
        if (d == 10000) throw ConvergenceError("kernel_band: scan failed to terminate");
    }

    std::sort(out.begin(), out.end(), [](const BandEntry& x, const BandEntry& y) {
        if (x.root.real() != y.root.real()) return x.root.real() > y.root.real();
        if (x.mode.k != y.mode.k) return x.mode.k < y.mode.k;
        if (x.mode.l != y.mode.l) return x.mode.l < y.mode.l;
        return x.sign > y.sign;
    });
    return out;
}

double sphere_eigen_multiplicity(int m, int k) {
    if (m < 1 || k < 0) throw ValidationError("sphere_eigen_multiplicity: need m >= 1, k >= 0");
    if (k == 0) return 1.0;
    return binomial(m + k, k) - binomial(m + k - 2, k - 2);
}

TorusModeSeries torus_mode_project(const TorusGraph& tg, ModeIndex mode) {
    if (mode.k < 0 || mode.l < 0) throw ValidationError("torus_mode_project: bad mode");
    const int need = 4 * (mode.k + mode.l + 1);
    if (tg.ntheta < need || tg.nphi < need)
        throw ValidationError("torus_mode_project: angular grid too coarse for mode");

    // Unit-L2 circle harmonics: 1/sqrt(2 pi) and cos/sin(k x)/sqrt(pi).
    const double nt_c = (mode.k == 0) ? 1.0 / std::sqrt(2.0 * M_PI) : 1.0 / std::sqrt(M_PI);
    const double np_c = (mode.l == 0) ? 1.0 / std::sqrt(2.0 * M_PI) : 1.0 / std::sqrt(M_PI);

    std::vector<double> ct(tg.ntheta), st(tg.ntheta), cp2(tg.nphi), sp(tg.nphi);
    for (int j = 0; j < tg.ntheta; ++j) {
        ct[j] = std::cos(mode.k * tg.theta_at(j)) * nt_c;
        st[j] = (mode.k == 0) ? 0.0 : std::sin(mode.k * tg.theta_at(j)) * nt_c;
    }
    for (int j = 0; j < tg.nphi; ++j) {
        cp2[j] = std::cos(mode.l * tg.phi_at(j)) * np_c;
        sp[j] = (mode.l == 0) ? 0.0 : std::sin(mode.l * tg.phi_at(j)) * np_c;
    }

    const double cell = (2.0 * M_PI / tg.ntheta) * (2.0 * M_PI / tg.nphi);
    TorusModeSeries s;
    s.mode = mode;
    s.t.resize(tg.nt);
    s.coeff.resize(tg.nt);
    for (int it = 0; it < tg.nt; ++it) {
        s.t[it] = tg.t_at(it);
        double cc = 0.0, cs = 0.0, sc = 0.0, ss = 0.0;
        for (int jt = 0; jt < tg.ntheta; ++jt) {
            double acc_c = 0.0, acc_s = 0.0;
            for (int jp = 0; jp < tg.nphi; ++jp) {
                const double v = tg.at(it, jt, jp);
                acc_c += v * cp2[jp];
                acc_s += v * sp[jp];
            }
            cc += ct[jt] * acc_c;
            cs += ct[jt] * acc_s;
            sc += st[jt] * acc_c;
            ss += st[jt] * acc_s;
        }
        s.coeff[it] = {cc * cell, cs * cell, sc * cell, ss * cell};
    }
    return s;
}

} // namespace simons
