#include "simons/numerics.hpp"

#include "simons/errors.hpp"

#include <algorithm>
#include <cmath>

namespace simons {

double sphere_volume(int m) {
    if (m < 0) throw ValidationError("sphere_volume: dimension must be >= 0");
    // Vol(S^m) = 2 pi^{(m+1)/2} / Gamma((m+1)/2)
    const double h = 0.5 * (m + 1);
    return 2.0 * std::pow(M_PI, h) / std::tgamma(h);
}

double ball_volume(int m) {
    if (m < 0) throw ValidationError("ball_volume: dimension must be >= 0");
    return std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return std::round(r);
}

GaussRule gauss_legendre(int npoints) {
    if (npoints < 1) throw ValidationError("gauss_legendre: need npoints >= 1");
    GaussRule rule;
    rule.nodes.resize(npoints);
    rule.weights.resize(npoints);
    const int n = npoints;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev initial guess, Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

void solve_dense(std::vector<double>& a, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (a[piv * n + col] == 0.0) throw ConvergenceError("solve_dense: singular matrix");
        if (piv != col) {
            for (int c = col; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        const double d = a[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * b[c];
        b[r] = s / a[r * n + r];
    }
}

namespace {

// Degree-`degree` LS fit of (x,y) over [lo, lo+window) in the scaled variable
// u = (x - xc)/h.  Returns polynomial coefficients in u.
std::vector<double> window_fit(const std::vector<double>& x, const std::vector<double>& y,
                               std::size_t lo, int window, int degree, double xc, double* hscale) {
    const int m = degree + 1;
    double h = 0.0;
    for (int j = 0; j < window; ++j) h = std::max(h, std::abs(x[lo + j] - xc));
    if (h == 0.0) h = 1.0;
    *hscale = h;
    std::vector<double> ata(std::size_t(m) * m, 0.0), atb(m, 0.0), pw(m);
    for (int j = 0; j < window; ++j) {
        const double u = (x[lo + j] - xc) / h;
        pw[0] = 1.0;
        for (int d = 1; d < m; ++d) pw[d] = pw[d - 1] * u;
        for (int r = 0; r < m; ++r) {
            atb[r] += pw[r] * y[lo + j];
            for (int c = 0; c < m; ++c) ata[r * m + c] += pw[r] * pw[c];
        }
    }
    solve_dense(ata, atb, m);
    return atb;
}

} // namespace

LocalFit local_poly_derivatives(const std::vector<double>& x, const std::vector<double>& y,
                                int degree, int window) {
    const std::size_t n = x.size();
    if (y.size() != n) throw ValidationError("local_poly_derivatives: size mismatch");
    if (int(n) < window) throw ValidationError("local_poly_derivatives: too few samples");
    if (window < degree + 1) throw ValidationError("local_poly_derivatives: window < degree + 1");
    LocalFit out;
    out.value.resize(n);
    out.d1.resize(n);
    out.d2.resize(n);
    const int halfw = window / 2;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = (i < std::size_t(halfw)) ? 0 : i - halfw;
        lo = std::min(lo, n - window);
        double h = 1.0;
        const auto c = window_fit(x, y, lo, window, degree, x[i], &h);
        out.value[i] = c[0];
        out.d1[i] = c[1] / h;
        out.d2[i] = 2.0 * c[2] / (h * h);
    }
    return out;
}

double local_poly_interpolate(const std::vector<double>& x, const std::vector<double>& y,
                              double xq, int degree, int window) {
    const std::size_t n = x.size();
    if (y.size() != n || int(n) < window) throw ValidationError("local_poly_interpolate: bad sizes");
    // anchor = nearest sample (x assumed sorted ascending)
    std::size_t i = std::lower_bound(x.begin(), x.end(), xq) - x.begin();
    if (i == n) i = n - 1;
    if (i > 0 && std::abs(x[i - 1] - xq) < std::abs(x[i] - xq)) --i;
    const int halfw = window / 2;
    std::size_t lo = (i < std::size_t(halfw)) ? 0 : i - halfw;
    lo = std::min(lo, n - window);
    double h = 1.0;
    const auto c = window_fit(x, y, lo, window, degree, xq, &h);
    return c[0];
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw ValidationError("fit_line: need >= 2 samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw ValidationError("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms_residual = std::sqrt(ss / double(n));
    return f;
}

Eigen2 eigen2(const std::array<std::array<double, 2>, 2>& m) {
    const double a = m[0][0], b = m[0][1], c = m[1][0], d = m[1][1];
    const double tr = a + d, det = a * d - b * c;
    const double disc = tr * tr - 4.0 * det;
    Eigen2 e;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        e.values[0] = 0.5 * (tr + s);
        e.values[1] = 0.5 * (tr - s);
    } else {
        const double s = std::sqrt(-disc);
        e.values[0] = {0.5 * tr, 0.5 * s};
        e.values[1] = {0.5 * tr, -0.5 * s};
    }
    for (int i = 0; i < 2; ++i) {
        const std::complex<double> lam = e.values[i];
        // rows of (M - lam I); eigenvector is orthogonal to a nonzero row
        const std::complex<double> r1[2] = {a - lam, b};
        const std::complex<double> r2[2] = {c, d - lam};
        const double n1 = std::abs(r1[0]) + std::abs(r1[1]);
        const double n2 = std::abs(r2[0]) + std::abs(r2[1]);
        std::complex<double> v0, v1;
        if (n1 >= n2 && n1 > 0.0) {
            v0 = -r1[1];
            v1 = r1[0];
        } else if (n2 > 0.0) {
            v0 = -r2[1];
            v1 = r2[0];
        } else { // M is lam * I
            v0 = (i == 0) ? 1.0 : 0.0;
            v1 = (i == 0) ? 0.0 : 1.0;
        }
        const double nn = std::sqrt(std::norm(v0) + std::norm(v1));
        e.vectors[i] = {v0 / nn, v1 / nn};
    }
    return e;
}

Vec4 cross4(const Vec4& u, const Vec4& v, const Vec4& w) {
    // Expansion of det[u, v, w, x] along x.
    auto det3 = [](double a00, double a01, double a02, double a10, double a11, double a12,
                   double a20, double a21, double a22) {
        return a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) +
               a02 * (a10 * a21 - a11 * a20);
    };
    Vec4 r;
    // det[u,v,w,x] = sum_i x_i * C_i with C_i = (-1)^{i+3} * minor_i; columns are u,v,w.
    r[0] = -det3(u[1], v[1], w[1], u[2], v[2], w[2], u[3], v[3], w[3]);
    r[1] = det3(u[0], v[0], w[0], u[2], v[2], w[2], u[3], v[3], w[3]);
    r[2] = -det3(u[0], v[0], w[0], u[1], v[1], w[1], u[3], v[3], w[3]);
    r[3] = det3(u[0], v[0], w[0], u[1], v[1], w[1], u[2], v[2], w[2]);
    return r;
}

double dot4(const Vec4& a, const Vec4& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

double norm4(const Vec4& a) { return std::sqrt(dot4(a, a)); }

std::vector<double> periodic_diff_matrix(int m) {
    if (m < 4 || m % 2 != 0) throw ValidationError("periodic_diff_matrix: need even m >= 4");
    std::vector<double> d(std::size_t(m) * m, 0.0);
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            if (j == k) continue;
            const int diff = j - k;
            const double sgn = (diff % 2 == 0) ? 1.0 : -1.0;
            d[std::size_t(j) * m + k] = 0.5 * sgn / std::tan(0.5 * diff * (2.0 * M_PI / m));
        }
    }
    return d;
}

} // namespace simons
