#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace simons {

// ---------------------------------------------------------------------------
// Sphere / ball volumes (Gamma closed forms).

double sphere_volume(int m);              // Vol(S^m), m >= 0
double ball_volume(int m);                // Vol(B^m), m >= 0
double binomial(int n, int k);            // exact for the small arguments used here

// ---------------------------------------------------------------------------
// Gauss-Legendre quadrature.

struct GaussRule {
    std::vector<double> nodes;            // on [-1, 1]
    std::vector<double> weights;
};

// Nodes by Newton iteration on the Legendre recurrence.
GaussRule gauss_legendre(int npoints);

// Composite rule over consecutive panels [x_i, x_{i+1}].
template <class F>
double integrate_panels(F&& f, const std::vector<double>& breaks, const GaussRule& rule) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double acc = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            acc += rule.weights[j] * f(mid + half * rule.nodes[j]);
        total += half * acc;
    }
    return total;
}

template <class F>
std::complex<double> integrate_panels_complex(F&& f, const std::vector<double>& breaks,
                                              const GaussRule& rule) {
    std::complex<double> total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            acc += rule.weights[j] * f(mid + half * rule.nodes[j]);
        total += half * acc;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Local least-squares polynomial fits on scattered 1-d samples.
//
// Value/derivative estimates at x[i] come from a degree-`degree` polynomial
// fitted to the `window` nearest samples.  The window is centered when
// possible and one-sided near the ends.

struct LocalFit {
    std::vector<double> value;
    std::vector<double> d1;
    std::vector<double> d2;
};

LocalFit local_poly_derivatives(const std::vector<double>& x, const std::vector<double>& y,
                                int degree = 4, int window = 9);

// Fit polynomial around anchor index and evaluate value at xq.
double local_poly_interpolate(const std::vector<double>& x, const std::vector<double>& y,
                              double xq, int degree = 4, int window = 9);

// Least squares line y ~ intercept + slope * x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------------------------------------------------------------
// Dense linear solve (partial pivoting), small systems only.
void solve_dense(std::vector<double>& a, std::vector<double>& b, int n); // a is n*n row-major

// ---------------------------------------------------------------------------
// 2x2 eigen decomposition.

struct Eigen2 {
    std::array<std::complex<double>, 2> values;   // values[0] has the larger real part
    std::array<std::array<std::complex<double>, 2>, 2> vectors; // vectors[i] for values[i]
};

Eigen2 eigen2(const std::array<std::array<double, 2>, 2>& m);

// ---------------------------------------------------------------------------
// Vectors in R^4.

using Vec4 = std::array<double, 4>;

// Generalized cross product: dot(cross4(u,v,w), x) == det[u, v, w, x].
Vec4 cross4(const Vec4& u, const Vec4& v, const Vec4& w);

double dot4(const Vec4& a, const Vec4& b);
double norm4(const Vec4& a);

// ---------------------------------------------------------------------------
// Spectral differentiation on a uniform periodic grid of even size m
// (grid points 2*pi*j/m).  Returns the m x m dense matrix, row-major.
std::vector<double> periodic_diff_matrix(int m);

} // namespace simons
