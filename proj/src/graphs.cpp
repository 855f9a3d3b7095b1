#include "simons/graphs.hpp"

#include "simons/errors.hpp"
#include "simons/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace simons {

double amplitude_bound(const ConeParams& cp) {
    const double r = std::sqrt(double(cp.p) / double(cp.n - cp.p));
    return std::min(r, 1.0 / r);
}

RadialGraph make_radial_graph(const ConeParams& cp, std::vector<double> t, std::vector<double> g) {
    if (t.size() != g.size()) throw ValidationError("make_radial_graph: size mismatch");
    if (t.size() < 9) throw ValidationError("make_radial_graph: need >= 9 samples");
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (!(t[i] < t[i + 1]))
            throw ValidationError("make_radial_graph: t must be strictly increasing");
    const double bound = amplitude_bound(cp);
    for (double v : g)
        if (!(std::abs(v) < bound))
            throw ValidationError("make_radial_graph: amplitude bound violated");

    RadialGraph rg;
    rg.params = cp;
    const auto fit = local_poly_derivatives(t, g);
    rg.t = std::move(t);
    rg.g = std::move(g);
    rg.dg = fit.d1;
    rg.ddg = fit.d2;
    return rg;
}

double TorusGraph::theta_at(int j) const { return 2.0 * M_PI * j / ntheta; }
double TorusGraph::phi_at(int j) const { return 2.0 * M_PI * j / nphi; }

TorusGraph make_torus_graph(double t0, double dt, int nt, int ntheta, int nphi) {
    if (nt < 1 || dt <= 0.0) throw ValidationError("make_torus_graph: bad t grid");
    if (ntheta < 4 || nphi < 4 || ntheta % 2 != 0 || nphi % 2 != 0)
        throw ValidationError("make_torus_graph: angular grids must be even and >= 4");
    TorusGraph tg;
    tg.t0 = t0;
    tg.dt = dt;
    tg.nt = nt;
    tg.ntheta = ntheta;
    tg.nphi = nphi;
    tg.values.assign(std::size_t(nt) * ntheta * nphi, 0.0);
    return tg;
}

} // namespace simons
