#pragma once

// Indicial analysis of the linearized minimal-surface operator
//   L u = u_tt + (n/p) Lap_1 u + (n/(n-p)) Lap_2 u + (n+1) u_t + 2n u
// on product modes.  A mode (k, l) contributes the quadratic
//   lambda^2 + (n+1) lambda + c(k,l),
//   c(k,l) = 2n - (n/p) k(k+p-1) - (n/(n-p)) l(l+n-p-1).

#include "simons/cone_geometry.hpp"
#include "simons/graphs.hpp"

#include <array>
#include <complex>
#include <vector>

namespace simons {

struct ModeIndex {
    int k = 0;
    int l = 0;
};

enum class RootKind { RealDistinct, ComplexPair, RealDouble };

struct IndicialRoots {
    ModeIndex mode;
    std::complex<double> plus;  // larger real part, or positive imaginary part
    std::complex<double> minus;
    RootKind kind = RootKind::RealDistinct;
    double constant_term = 0.0; // c(k,l); equals plus*minus
};

IndicialRoots indicial_roots(const ConeParams& cp, ModeIndex mode);

// One root lying in the decay band (-b, -a].
struct BandEntry {
    ModeIndex mode;
    std::complex<double> root;
    int sign = +1; // +1 for the plus branch
};

// All indicial roots with real part in (-b, -a], 0 < a < b.  Rejects bands
// whose endpoints pass within 1e-9 of a root.
std::vector<BandEntry> kernel_band(const ConeParams& cp, double a, double b);

// Multiplicity of the k-th Laplace eigenvalue k(k+m-1) on the round S^m.
double sphere_eigen_multiplicity(int m, int k);

// L2 projection of a torus graph (n=2, p=1) onto the four unit-normalized
// harmonics of mode (k, l): cos/sin(k theta) x cos/sin(l phi).
struct TorusModeSeries {
    ModeIndex mode;
    std::vector<double> t;
    std::vector<std::array<double, 4>> coeff; // {cc, cs, sc, ss}; sin legs are 0 when k or l is 0
};

TorusModeSeries torus_mode_project(const TorusGraph& tg, ModeIndex mode);

} // namespace simons
