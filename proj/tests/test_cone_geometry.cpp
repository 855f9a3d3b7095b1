#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "simons/cone_geometry.hpp"
#include "simons/errors.hpp"
#include "simons/numerics.hpp"

#include <cmath>
#include <vector>

using namespace simons;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("cone parameters") {
    const ConeParams c21(2, 1);
    CHECK(c21.theta0 == doctest::Approx(kPi / 4).epsilon(1e-15));
    CHECK(c21.sin_two_theta0 == doctest::Approx(1.0).epsilon(1e-15));
    const ConeParams c73(7, 3);
    CHECK(c73.cos_theta0 == doctest::Approx(std::sqrt(3.0 / 7.0)).epsilon(1e-15));
    CHECK(c73.sin_theta0 == doctest::Approx(std::sqrt(4.0 / 7.0)).epsilon(1e-15));
    CHECK(c73.sin_two_theta0 == doctest::Approx(2.0 * std::sqrt(12.0) / 7.0).epsilon(1e-14));
    const ConeParams c42(4, 2);
    CHECK(c42.theta0 == doctest::Approx(kPi / 4).epsilon(1e-15));

    CHECK_THROWS_AS(ConeParams(1, 1), ValidationError);
    CHECK_THROWS_AS(ConeParams(3, 0), ValidationError);
    CHECK_THROWS_AS(ConeParams(3, 3), ValidationError);
    CHECK_THROWS_AS(ConeParams(-2, 1), ValidationError);
}

TEST_CASE("cone point and frame") {
    const ConeParams cp(3, 1);
    const std::vector<double> x = {1.0, 0.0};
    const std::vector<double> y = {0.0, 0.6, 0.8};
    const ConePointFrame f = cone_point(cp, 0.7, x, y);
    REQUIRE(f.position.size() == 5);
    REQUIRE(f.normal.size() == 5);
    double pos2 = 0.0, nrm2 = 0.0, dot = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        pos2 += f.position[i] * f.position[i];
        nrm2 += f.normal[i] * f.normal[i];
        dot += f.position[i] * f.normal[i];
    }
    CHECK(std::sqrt(pos2) == doctest::Approx(std::exp(0.7)).epsilon(1e-13));
    CHECK(std::sqrt(nrm2) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(dot) < 1e-12);

    CHECK_THROWS_AS(cone_point(cp, 0.0, {2.0, 0.0}, y), ValidationError);
}

TEST_CASE("shape operator spectrum is trace free") {
    for (int n = 2; n <= 8; ++n)
        for (int p = 1; p < n; ++p) {
            const ConeParams cp(n, p);
            const ShapeOperatorSpectrum s = shape_operator_eigenvalues(cp, 0.3);
            CHECK(s.mult_first == p);
            CHECK(s.mult_second == n - p);
            CHECK(std::abs(s.radial) < 1e-15);
            CHECK(s.mult_first * s.first + s.mult_second * s.second ==
                  doctest::Approx(0.0).epsilon(1e-13));
            CHECK(s.first == doctest::Approx(std::exp(-0.3) * std::sqrt(double(n - p) / p))
                                 .epsilon(1e-13));
        }
}

TEST_CASE("link volume closed forms") {
    const ConeParams c42(4, 2);
    CHECK(link_volume(c42) == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-13));
    const ConeParams c21(2, 1);
    CHECK(link_volume(c21) == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-13));
    // oracle: Vol(S^p) (p/n)^{p/2} Vol(S^{n-p}) ((n-p)/n)^{(n-p)/2}
    for (int n = 2; n <= 8; ++n)
        for (int p = 1; p < n; ++p) {
            const ConeParams cp(n, p);
            const double oracle = sphere_volume(p) * std::pow(double(p) / n, 0.5 * p) *
                                  sphere_volume(n - p) * std::pow(double(n - p) / n, 0.5 * (n - p));
            CHECK(link_volume(cp) == doctest::Approx(oracle).epsilon(1e-13));
        }
}

TEST_CASE("density at infinity") {
    CHECK(cone_density(ConeParams(2, 1)) == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK(cone_density(ConeParams(4, 2)) == doctest::Approx(1.5).epsilon(1e-14));
    for (int n = 2; n <= 8; ++n)
        for (int p = 1; p < n; ++p) {
            const double th = cone_density(ConeParams(n, p));
            CHECK(th > 1.0);
            CHECK(th < 2.0);
            // symmetric under p <-> n-p
            CHECK(th == doctest::Approx(cone_density(ConeParams(n, n - p))).epsilon(1e-14));
        }
}
