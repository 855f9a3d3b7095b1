#pragma once

// Embedded Dormand-Prince 5(4) pair with the usual PI-free step controller:
// accept when the scaled error norm is <= 1, step factor 0.9*err^(-1/5)
// clamped to [0.2, 5].

#include "simons/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

namespace simons {

struct Rk45Controls {
    double abs_tol = 1e-11;
    double rel_tol = 1e-11;
    double h_init = 1e-6;
    double h_max = 1e-2;
    std::int64_t max_steps = 10'000'000; // accepted + rejected attempts
};

namespace rk45_detail {
inline constexpr double A21 = 1.0 / 5;
inline constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
inline constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
inline constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                        A54 = -212.0 / 729;
inline constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                        A64 = 49.0 / 176, A65 = -5103.0 / 18656;
inline constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                        B5 = -2187.0 / 6784, B6 = 11.0 / 84;
inline constexpr double E1 = B1 - 5179.0 / 57600, E3 = B3 - 7571.0 / 16695,
                        E4 = B4 - 393.0 / 640, E5 = B5 + 92097.0 / 339200,
                        E6 = B6 - 187.0 / 2100, E7 = -1.0 / 40;
inline constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
} // namespace rk45_detail

// One attempted step from (t, y) with size h.  On acceptance y/t are advanced.
// Returns true iff accepted; *h_next is the suggested next size either way.
template <std::size_t N, class F>
bool rk45_step(F&& f, double& t, std::array<double, N>& y, double h, double* h_next,
               const Rk45Controls& ctl) {
    using namespace rk45_detail;
    std::array<double, N> k1, k2, k3, k4, k5, k6, k7, yt, y5;
    f(t, y, k1);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * A21 * k1[i];
    f(t + C2 * h, yt, k2);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
    f(t + C3 * h, yt, k3);
    for (std::size_t i = 0; i < N; ++i)
        yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    f(t + C4 * h, yt, k4);
    for (std::size_t i = 0; i < N; ++i)
        yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    f(t + C5 * h, yt, k5);
    for (std::size_t i = 0; i < N; ++i)
        yt[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
    f(t + h, yt, k6);
    for (std::size_t i = 0; i < N; ++i)
        y5[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    f(t + h, y5, k7);

    double errsq = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                              E7 * k7[i]);
        const double sc = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
        errsq += (e / sc) * (e / sc);
    }
    const double err = std::sqrt(errsq / double(N));
    double factor = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    factor = std::clamp(factor, 0.2, 5.0);
    *h_next = std::min(h * factor, ctl.h_max);
    if (err <= 1.0) {
        y = y5;
        t += h;
        return true;
    }
    return false;
}

// Integrate until `done(t, y)` is true after an accepted step.  `observe` is
// called at the initial state and after every accepted step.  Throws
// ConvergenceError when the attempt budget runs out.
template <std::size_t N, class F, class Observe, class Done>
std::int64_t rk45_integrate(F&& f, double& t, std::array<double, N>& y, const Rk45Controls& ctl,
                            Observe&& observe, Done&& done) {
    double h = std::min(ctl.h_init, ctl.h_max);
    std::int64_t attempts = 0;
    observe(t, y);
    if (done(t, y)) return 0;
    while (attempts < ctl.max_steps) {
        ++attempts;
        double h_next = h;
        if (rk45_step<N>(f, t, y, h, &h_next, ctl)) {
            observe(t, y);
            if (done(t, y)) return attempts;
        }
        h = h_next;
        if (!(h > 0.0) || !std::isfinite(h)) throw ConvergenceError("rk45: step size underflow");
    }
    throw ConvergenceError("rk45: step budget exhausted");
}

} // namespace simons
