#include "simons/cone_geometry.hpp"

#include "simons/errors.hpp"
#include "simons/numerics.hpp"

#include <cmath>
#include <string>

namespace simons {

ConeParams::ConeParams(int n_, int p_) : n(n_), p(p_) {
    if (n < 2) throw ValidationError("ConeParams: need n >= 2");
    if (p < 1 || p > n - 1) throw ValidationError("ConeParams: need 1 <= p <= n-1");
    cos_theta0 = std::sqrt(double(p) / double(n));
    sin_theta0 = std::sqrt(double(n - p) / double(n));
    theta0 = std::acos(cos_theta0);
    sin_two_theta0 = 2.0 * std::sqrt(double(p) * double(n - p)) / double(n);
}

namespace {
double norm_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}
} // namespace

ConePointFrame cone_point(const ConeParams& cp, double t, const std::vector<double>& x,
                          const std::vector<double>& y) {
    if (int(x.size()) != cp.p + 1)
        throw ValidationError("cone_point: x must lie in R^{p+1}");
    if (int(y.size()) != cp.n - cp.p + 1)
        throw ValidationError("cone_point: y must lie in R^{n-p+1}");
    if (std::abs(norm_of(x) - 1.0) > 1e-12 || std::abs(norm_of(y) - 1.0) > 1e-12)
        throw ValidationError("cone_point: x and y must be unit vectors (1e-12)");

    ConePointFrame f;
    f.t = t;
    f.x = x;
    f.y = y;
    const double et = std::exp(t);
    f.position.reserve(x.size() + y.size());
    f.normal.reserve(x.size() + y.size());
    for (double c : x) f.position.push_back(et * cp.cos_theta0 * c);
    for (double c : y) f.position.push_back(et * cp.sin_theta0 * c);
    for (double c : x) f.normal.push_back(cp.sin_theta0 * c);
    for (double c : y) f.normal.push_back(-cp.cos_theta0 * c);
    return f;
}

ShapeOperatorSpectrum shape_operator_eigenvalues(const ConeParams& cp, double t) {
    ShapeOperatorSpectrum s;
    const double emt = std::exp(-t);
    s.radial = 0.0;
    s.first = emt * std::sqrt(double(cp.n - cp.p) / double(cp.p));
    s.second = -emt * std::sqrt(double(cp.p) / double(cp.n - cp.p));
    s.mult_first = cp.p;
    s.mult_second = cp.n - cp.p;
    return s;
}

double link_volume(const ConeParams& cp) {
    const double r1 = std::pow(cp.cos_theta0, cp.p);
    const double r2 = std::pow(cp.sin_theta0, cp.n - cp.p);
    return r1 * r2 * sphere_volume(cp.p) * sphere_volume(cp.n - cp.p);
}

double cone_density(const ConeParams& cp) { return link_volume(cp) / sphere_volume(cp.n); }

} // namespace simons
