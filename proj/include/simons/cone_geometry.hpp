#pragma once

// Geometry of the Lawson-type cones over S^p(sqrt(p/n)) x S^{n-p}(sqrt((n-p)/n)):
// parametrization, unit normal, principal curvatures, link volume and the
// density of the cone at infinity.

#include <vector>

namespace simons {

struct ConeParams {
    int n = 2; // hypersurface dimension, cone lives in R^{n+2}
    int p = 1; // 1 <= p <= n-1

    double theta0 = 0.0;       // axis angle: cos(theta0) = sqrt(p/n)
    double cos_theta0 = 0.0;
    double sin_theta0 = 0.0;
    double sin_two_theta0 = 0.0;

    ConeParams() = default;
    ConeParams(int n_, int p_);
};

struct ConePointFrame {
    double t = 0.0;
    std::vector<double> x;        // unit vector in R^{p+1}
    std::vector<double> y;        // unit vector in R^{n-p+1}
    std::vector<double> position; // e^t (sqrt(p/n) x, sqrt((n-p)/n) y), in R^{n+2}
    std::vector<double> normal;   // (sqrt((n-p)/n) x, -sqrt(p/n) y), unit
};

struct ShapeOperatorSpectrum {
    double radial = 0.0;   // along the ray, multiplicity 1
    double first = 0.0;    //  e^{-t} sqrt((n-p)/p), multiplicity p
    double second = 0.0;   // -e^{-t} sqrt(p/(n-p)), multiplicity n-p
    int mult_first = 0;
    int mult_second = 0;
};

// Point + frame on the cone; |x| and |y| must be 1 within 1e-12.
ConePointFrame cone_point(const ConeParams& cp, double t, const std::vector<double>& x,
                          const std::vector<double>& y);

ShapeOperatorSpectrum shape_operator_eigenvalues(const ConeParams& cp, double t);

// Volume of the link sqrt(p/n)S^p x sqrt((n-p)/n)S^{n-p} inside S^{n+1}.
double link_volume(const ConeParams& cp);

// Density at infinity: link_volume / Vol(S^n).  Always in (1, 2) here.
double cone_density(const ConeParams& cp);

} // namespace simons
