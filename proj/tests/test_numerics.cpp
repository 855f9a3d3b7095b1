#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "simons/numerics.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace simons;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Recursion oracle: Vol(S^m) = Vol(S^{m-1}) * int_0^pi sin^{m-1}.
double sphere_volume_by_recursion(int m) {
    if (m == 0) return 2.0;
    const GaussRule rule = gauss_legendre(24);
    std::vector<double> breaks;
    for (int i = 0; i <= 16; ++i) breaks.push_back(kPi * i / 16);
    const double slice =
        integrate_panels([&](double u) { return std::pow(std::sin(u), m - 1); }, breaks, rule);
    return sphere_volume_by_recursion(m - 1) * slice;
}

double det4(const Vec4& u, const Vec4& v, const Vec4& w, const Vec4& x) {
    const Vec4 rows[4] = {u, v, w, x};
    double a[16];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a[4 * i + j] = rows[i][j];
    // cofactor expansion along the first row
    auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
        return a[4 * r0 + c0] * (a[4 * r1 + c1] * a[4 * r2 + c2] - a[4 * r1 + c2] * a[4 * r2 + c1]) -
               a[4 * r0 + c1] * (a[4 * r1 + c0] * a[4 * r2 + c2] - a[4 * r1 + c2] * a[4 * r2 + c0]) +
               a[4 * r0 + c2] * (a[4 * r1 + c0] * a[4 * r2 + c1] - a[4 * r1 + c1] * a[4 * r2 + c0]);
    };
    return a[0] * det3(1, 2, 3, 1, 2, 3) - a[1] * det3(1, 2, 3, 0, 2, 3) +
           a[2] * det3(1, 2, 3, 0, 1, 3) - a[3] * det3(1, 2, 3, 0, 1, 2);
}
} // namespace

TEST_CASE("sphere and ball volumes") {
    CHECK(sphere_volume(0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sphere_volume(1) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(sphere_volume(2) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
    CHECK(sphere_volume(3) == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-14));
    CHECK(ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ball_volume(2) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
    for (int m = 1; m <= 9; ++m) {
        CHECK(sphere_volume(m) == doctest::Approx(sphere_volume_by_recursion(m)).epsilon(1e-12));
        // Vol(S^m) = (m+1) Vol(B^{m+1})
        CHECK(sphere_volume(m) == doctest::Approx((m + 1) * ball_volume(m + 1)).epsilon(1e-14));
    }
    CHECK(binomial(0, 0) == doctest::Approx(1.0));
    CHECK(binomial(5, 2) == doctest::Approx(10.0));
    CHECK(binomial(8, 4) == doctest::Approx(70.0));
}

TEST_CASE("gauss-legendre rules") {
    for (int npts : {2, 5, 12, 24}) {
        const GaussRule rule = gauss_legendre(npts);
        REQUIRE(rule.nodes.size() == std::size_t(npts));
        double wsum = 0.0;
        for (std::size_t i = 0; i < rule.weights.size(); ++i) {
            wsum += rule.weights[i];
            CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[npts - 1 - i]).epsilon(1e-14));
        }
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        // exact for polynomials up to degree 2 npts - 1
        const int deg = 2 * npts - 2;
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights[i] * std::pow(rule.nodes[i], deg);
        CHECK(acc == doctest::Approx(2.0 / (deg + 1)).epsilon(1e-13));
    }
    const GaussRule rule = gauss_legendre(12);
    std::vector<double> breaks = {0.0, 1.0, 2.0, kPi};
    CHECK(integrate_panels([](double x) { return std::sin(x); }, breaks, rule) ==
          doctest::Approx(2.0).epsilon(1e-14));
    const std::complex<double> z = integrate_panels_complex(
        [](double x) { return std::exp(std::complex<double>(0.0, x)); },
        std::vector<double>{0.0, kPi / 2}, rule);
    CHECK(z.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(z.imag() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("local polynomial fits are exact on quartics") {
    std::vector<double> x, y;
    auto f = [](double u) { return 1.0 + u - 2.0 * u * u + 0.5 * u * u * u + 0.25 * u * u * u * u; };
    auto fp = [](double u) { return 1.0 - 4.0 * u + 1.5 * u * u + u * u * u; };
    auto fpp = [](double u) { return -4.0 + 3.0 * u + 3.0 * u * u; };
    for (int i = 0; i <= 40; ++i) {
        // deliberately non-uniform spacing
        const double u = 0.05 * i + 0.01 * std::sin(3.0 * i);
        x.push_back(u);
        y.push_back(f(u));
    }
    const LocalFit fit = local_poly_derivatives(x, y, 4, 9);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(fit.value[i] == doctest::Approx(f(x[i])).epsilon(1e-10));
        CHECK(fit.d1[i] == doctest::Approx(fp(x[i])).epsilon(1e-8));
        CHECK(fit.d2[i] == doctest::Approx(fpp(x[i])).epsilon(1e-7));
    }
    CHECK(local_poly_interpolate(x, y, 0.777) == doctest::Approx(f(0.777)).epsilon(1e-10));
    CHECK(local_poly_interpolate(x, y, 1.9) == doctest::Approx(f(1.9)).epsilon(1e-10));
}

TEST_CASE("local fits track smooth data") {
    std::vector<double> x, y;
    for (int i = 0; i <= 300; ++i) {
        x.push_back(0.01 * i);
        y.push_back(std::sin(x.back()));
    }
    const LocalFit fit = local_poly_derivatives(x, y);
    for (std::size_t i = 10; i + 10 < x.size(); ++i) {
        CHECK(std::abs(fit.d1[i] - std::cos(x[i])) < 1e-8);
        CHECK(std::abs(fit.d2[i] + std::sin(x[i])) < 1e-6);
    }
}

TEST_CASE("line fit") {
    std::vector<double> x = {0.0, 1.0, 2.0, 3.0, 4.5};
    std::vector<double> y;
    for (double u : x) y.push_back(2.5 - 0.75 * u);
    const LineFit lf = fit_line(x, y);
    CHECK(lf.slope == doctest::Approx(-0.75).epsilon(1e-13));
    CHECK(lf.intercept == doctest::Approx(2.5).epsilon(1e-13));
    CHECK(lf.rms_residual < 1e-13);
}

TEST_CASE("dense solve") {
    std::vector<double> a = {2, 1, 0, 1, 3, 1, 0, 1, 4};
    std::vector<double> b = {3, 5, 6};
    std::vector<double> a0 = a, b0 = b;
    solve_dense(a, b, 3);
    for (int i = 0; i < 3; ++i) {
        double acc = 0.0;
        for (int j = 0; j < 3; ++j) acc += a0[3 * i + j] * b[j];
        CHECK(acc == doctest::Approx(b0[i]).epsilon(1e-13));
    }
}

TEST_CASE("2x2 eigen decomposition") {
    {
        const Eigen2 e = eigen2({{{2.0, 1.0}, {1.0, 2.0}}});
        CHECK(e.values[0].real() == doctest::Approx(3.0).epsilon(1e-13));
        CHECK(e.values[1].real() == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(e.values[0].imag()) < 1e-13);
    }
    {
        const Eigen2 e = eigen2({{{0.0, 1.0}, {-1.0, 0.0}}});
        CHECK(e.values[0].imag() == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(e.values[1].imag() == doctest::Approx(-1.0).epsilon(1e-13));
    }
    // eigenvector residual |A v - lambda v| for a generic matrix
    const std::array<std::array<double, 2>, 2> m = {{{-1.0, 1.0}, {-2.0, -2.0}}};
    const Eigen2 e = eigen2(m);
    for (int i = 0; i < 2; ++i) {
        const std::complex<double> r0 =
            m[0][0] * e.vectors[i][0] + m[0][1] * e.vectors[i][1] - e.values[i] * e.vectors[i][0];
        const std::complex<double> r1 =
            m[1][0] * e.vectors[i][0] + m[1][1] * e.vectors[i][1] - e.values[i] * e.vectors[i][1];
        CHECK(std::abs(r0) < 1e-12);
        CHECK(std::abs(r1) < 1e-12);
    }
    CHECK(e.values[0].real() >= e.values[1].real() - 1e-15);
}

TEST_CASE("cross4 determinant identity") {
    const Vec4 e1 = {1, 0, 0, 0}, e2 = {0, 1, 0, 0}, e3 = {0, 0, 1, 0}, e4 = {0, 0, 0, 1};
    const Vec4 c = cross4(e1, e2, e3);
    CHECK(c[0] == doctest::Approx(0.0));
    CHECK(c[3] == doctest::Approx(1.0)); // det[e1,e2,e3,e4] = 1
    const Vec4 u = {0.3, -1.2, 0.8, 2.0};
    const Vec4 v = {1.0, 0.5, -0.7, 0.1};
    const Vec4 w = {-0.4, 0.9, 1.3, -0.6};
    const Vec4 xs[4] = {e1, e2, e4, {0.2, 0.4, -1.0, 0.5}};
    for (const Vec4& x : xs)
        CHECK(dot4(cross4(u, v, w), x) == doctest::Approx(det4(u, v, w, x)).epsilon(1e-12));
    // antisymmetry and orthogonality
    const Vec4 c1 = cross4(u, v, w), c2 = cross4(v, u, w);
    for (int i = 0; i < 4; ++i) CHECK(c1[i] == doctest::Approx(-c2[i]).epsilon(1e-13));
    CHECK(std::abs(dot4(c1, u)) < 1e-12);
    CHECK(std::abs(dot4(c1, v)) < 1e-12);
    CHECK(std::abs(dot4(c1, w)) < 1e-12);
    CHECK(norm4({3, 0, 4, 0}) == doctest::Approx(5.0));
}

TEST_CASE("periodic spectral differentiation") {
    const int m = 16;
    const std::vector<double> d = periodic_diff_matrix(m);
    for (int mode : {1, 3, 5}) {
        for (int j = 0; j < m; ++j) {
            double acc = 0.0;
            for (int k = 0; k < m; ++k) acc += d[std::size_t(j) * m + k] * std::sin(mode * 2.0 * kPi * k / m);
            CHECK(acc == doctest::Approx(mode * std::cos(mode * 2.0 * kPi * j / m)).epsilon(1e-11));
        }
    }
    // derivative of a constant vanishes
    for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int k = 0; k < m; ++k) acc += d[std::size_t(j) * m + k];
        CHECK(std::abs(acc) < 1e-12);
    }
}
