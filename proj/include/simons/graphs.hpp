#pragma once

// Normal-graph containers shared by the spectral and asymptotics modules.
// A surface near the cone is written as the normal graph of g over the cone,
// scaled by e^t; g must stay inside the amplitude bounds that keep the two
// sphere factors from collapsing.

#include "simons/cone_geometry.hpp"

#include <cstddef>
#include <vector>

namespace simons {

// sup|g| that keeps both factors positive: min(sqrt(p/(n-p)), sqrt((n-p)/p)).
double amplitude_bound(const ConeParams& cp);

// g(t) for an O(p+1) x O(n-p+1)-invariant graph, sampled on increasing t.
// dg/ddg come from moving local polynomial fits at construction.
struct RadialGraph {
    ConeParams params;
    std::vector<double> t;
    std::vector<double> g;
    std::vector<double> dg;
    std::vector<double> ddg;
};

// Fits derivatives, checks strict monotonicity of t and the amplitude bound.
RadialGraph make_radial_graph(const ConeParams& cp, std::vector<double> t, std::vector<double> g);

// g(t, theta, phi) on a uniform grid, n = 2, p = 1 only.  The angular grids
// are the periodic points 2 pi j / m; t is uniform with spacing dt.
struct TorusGraph {
    double t0 = 0.0;
    double dt = 0.0;
    int nt = 0;
    int ntheta = 0;
    int nphi = 0;
    std::vector<double> values; // [it][itheta][iphi] row-major

    double t_at(int it) const { return t0 + dt * it; }
    double theta_at(int j) const;
    double phi_at(int j) const;
    double at(int it, int jt, int jp) const {
        return values[(std::size_t(it) * ntheta + jt) * nphi + jp];
    }
    double& at(int it, int jt, int jp) {
        return values[(std::size_t(it) * ntheta + jt) * nphi + jp];
    }
};

TorusGraph make_torus_graph(double t0, double dt, int nt, int ntheta, int nphi);

template <class F>
TorusGraph make_torus_graph_from(double t0, double dt, int nt, int ntheta, int nphi, F&& f) {
    TorusGraph tg = make_torus_graph(t0, dt, nt, ntheta, nphi);
    for (int it = 0; it < nt; ++it)
        for (int jt = 0; jt < ntheta; ++jt)
            for (int jp = 0; jp < nphi; ++jp)
                tg.at(it, jt, jp) = f(tg.t_at(it), tg.theta_at(jt), tg.phi_at(jp));
    return tg;
}

} // namespace simons
