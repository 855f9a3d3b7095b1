#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "simons/errors.hpp"
#include "simons/graphs.hpp"
#include "simons/spectral.hpp"

#include <cmath>
#include <complex>

using namespace simons;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("indicial roots, frozen values") {
    const ConeParams c21(2, 1);
    {
        const IndicialRoots r = indicial_roots(c21, {0, 0});
        CHECK(r.kind == RootKind::ComplexPair);
        CHECK(r.plus.real() == doctest::Approx(-1.5).epsilon(1e-14));
        CHECK(r.plus.imag() == doctest::Approx(std::sqrt(7.0) / 2).epsilon(1e-14));
        CHECK(r.minus == std::conj(r.plus));
        CHECK(r.constant_term == doctest::Approx(4.0).epsilon(1e-14));
    }
    const ConeParams c73(7, 3);
    {
        const IndicialRoots r = indicial_roots(c73, {0, 0});
        CHECK(r.kind == RootKind::RealDistinct);
        CHECK(r.plus.real() == doctest::Approx(-4.0 + std::sqrt(2.0)).epsilon(1e-14));
        CHECK(r.minus.real() == doctest::Approx(-4.0 - std::sqrt(2.0)).epsilon(1e-14));
        CHECK(std::abs(r.plus.imag()) < 1e-15);
    }
}

TEST_CASE("first modes give -1 and -n for every cone") {
    for (int n = 2; n <= 9; ++n)
        for (int p = 1; p < n; ++p) {
            const ConeParams cp(n, p);
            for (const ModeIndex mode : {ModeIndex{1, 0}, ModeIndex{0, 1}}) {
                const IndicialRoots r = indicial_roots(cp, mode);
                CHECK(r.kind == RootKind::RealDistinct);
                CHECK(r.plus.real() == doctest::Approx(-1.0).epsilon(1e-14));
                CHECK(r.minus.real() == doctest::Approx(double(-n)).epsilon(1e-14));
            }
        }
}

TEST_CASE("roots solve their quadratic") {
    const ConeParams cp(5, 2);
    for (int k = 0; k <= 3; ++k)
        for (int l = 0; l <= 3; ++l) {
            const IndicialRoots r = indicial_roots(cp, {k, l});
            for (const std::complex<double> z : {r.plus, r.minus})
                CHECK(std::abs(z * z + double(cp.n + 1) * z + r.constant_term) < 1e-11);
            CHECK((r.plus * r.minus).real() == doctest::Approx(r.constant_term).epsilon(1e-11));
            CHECK(r.plus.real() >= r.minus.real() - 1e-14);
        }
    CHECK_THROWS_AS(indicial_roots(cp, {-1, 0}), ValidationError);
}

TEST_CASE("kernel band enumeration") {
    const ConeParams c21(2, 1);
    // (-2.6, -0.9]: both (0,0) roots at Re = -3/2, and -1, -2 from each of the
    // two first modes.
    const auto band = kernel_band(c21, 0.9, 2.6);
    CHECK(band.size() == 6);
    int complex_count = 0, minus_one = 0, minus_two = 0;
    for (const auto& e : band) {
        if (std::abs(e.root.imag()) > 1e-12) {
            ++complex_count;
            CHECK(e.root.real() == doctest::Approx(-1.5).epsilon(1e-13));
        } else if (std::abs(e.root.real() + 1.0) < 1e-12) {
            ++minus_one;
        } else {
            CHECK(e.root.real() == doctest::Approx(-2.0).epsilon(1e-13));
            ++minus_two;
        }
    }
    CHECK(complex_count == 2);
    CHECK(minus_one == 2);
    CHECK(minus_two == 2);

    const ConeParams c73(7, 3);
    // (-1.1, -0.4] catches only the two -1 roots of the first modes.
    const auto narrow = kernel_band(c73, 0.4, 1.1);
    CHECK(narrow.size() == 2);
    for (const auto& e : narrow) {
        CHECK(e.root.real() == doctest::Approx(-1.0).epsilon(1e-13));
        CHECK(e.mode.k + e.mode.l == 1);
        CHECK(e.sign == +1);
    }

    // endpoint collides with the root -1
    CHECK_THROWS_AS(kernel_band(c73, 1.0, 2.0), ValidationError);
    CHECK_THROWS_AS(kernel_band(c73, 2.0, 1.0), ValidationError);
}

TEST_CASE("sphere eigenvalue multiplicities") {
    CHECK(sphere_eigen_multiplicity(1, 0) == doctest::Approx(1.0));
    CHECK(sphere_eigen_multiplicity(1, 3) == doctest::Approx(2.0));
    CHECK(sphere_eigen_multiplicity(2, 1) == doctest::Approx(3.0));
    CHECK(sphere_eigen_multiplicity(2, 2) == doctest::Approx(5.0));
    CHECK(sphere_eigen_multiplicity(3, 2) == doctest::Approx(9.0));
    CHECK(sphere_eigen_multiplicity(4, 1) == doctest::Approx(5.0));
}

TEST_CASE("torus mode projection") {
    const TorusGraph tg = make_torus_graph_from(
        0.0, 0.1, 5, 32, 32,
        [](double t, double theta, double) { return std::exp(-2.0 * t) * std::cos(theta); });
    {
        const TorusModeSeries s = torus_mode_project(tg, {1, 0});
        REQUIRE(s.t.size() == 5);
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            // L2-normalized cos(theta): coefficient pi sqrt(2) e^{-2t}
            CHECK(s.coeff[i][0] ==
                  doctest::Approx(kPi * std::sqrt(2.0) * std::exp(-2.0 * s.t[i])).epsilon(1e-12));
            CHECK(std::abs(s.coeff[i][1]) < 1e-12);
            CHECK(std::abs(s.coeff[i][2]) < 1e-12);
            CHECK(std::abs(s.coeff[i][3]) < 1e-12);
        }
    }
    for (const ModeIndex m : {ModeIndex{0, 0}, ModeIndex{2, 0}, ModeIndex{0, 1}, ModeIndex{1, 1}}) {
        const TorusModeSeries s = torus_mode_project(tg, m);
        for (const auto& c : s.coeff)
            for (double v : c) CHECK(std::abs(v) < 1e-12);
    }
}
