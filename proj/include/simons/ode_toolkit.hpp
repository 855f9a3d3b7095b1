#pragma once

// Decomposition of solutions of  g'' - (lambda+mu) g' + lambda mu g = f
// into a e^{lambda t} + b e^{mu t} + v, where v is the variation-of-parameters
// integral with each convolution split at +infinity when delta + Re(root) > 0
// (so that v decays like e^{-delta t}) and taken from 0 otherwise.
//
// ||f||_delta denotes sup_t e^{delta t} |f(t)| over the sampled horizon.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace simons {

using Cplx = std::complex<double>;

struct OdeProblem {
    Cplx lambda;
    Cplx mu;
    std::function<Cplx(double)> f;
    Cplx g0;
    Cplx g0p;
    double delta = 1.0;
    double horizon = 10.0;      // f is sampled/integrated on [0, horizon]
    int panels_per_unit = 20;   // quadrature panels per unit time
    double f_norm_delta = 0.0;  // filled by make_ode_problem
};

OdeProblem make_ode_problem(Cplx lambda, Cplx mu, std::function<Cplx(double)> f, Cplx g0, Cplx g0p,
                            double delta, double horizon = 10.0, int panels_per_unit = 20);

struct OdeBoundsReport {
    double coeff_lhs = 0.0;           // max(|a|, |b|)
    double coeff_data_term = 0.0;     // sqrt(2+|l|^2+|m|^2)/|l-m| * (|g0|+|g0'|)
    double coeff_forcing_term = 0.0;  // 2 max(0, (d+Re l)^-1, (d+Re m)^-1)/|l-m| * ||f||_d
    double observed_c = 0.0;          // smallest c making the first estimate hold
    bool coeff_holds_c10 = false;     // first estimate with c = 10
    double v_norm_delta = 0.0;        // sup_t e^{delta t}|v|
    double v_bound = 0.0;             // (|d+Re l|^-1 + |d+Re m|^-1)/|l-m| * ||f||_d
    bool v_estimate_holds = false;
    double tail_truncation_bound = 0.0; // sup-norm effect of the tail model beyond the horizon
    double f_norm_delta = 0.0;
};

struct OdeDecomposition {
    Cplx a;
    Cplx b;
    std::vector<double> t;  // quadrature panel boundaries on [0, horizon]
    std::vector<Cplx> v;
    OdeBoundsReport bounds;
};

// Errors on |lambda-mu| < 1e-9 or |delta + Re(root)| < 1e-9.
OdeDecomposition decompose(const OdeProblem& problem, double horizon);

inline OdeDecomposition decompose(const OdeProblem& problem) {
    return decompose(problem, problem.horizon);
}

// Randomized cross-check against direct initial-value integration.
struct OdeSuiteCase {
    int index = 0;
    Cplx lambda, mu;
    double delta = 0.0;
    double recon_error = 0.0;  // sup-norm vs oracle, relative to max(1, sup|g|)
    double observed_c = 0.0;
    bool v_estimate_holds = false;
    bool coeff_holds_c10 = false;
};

struct OdeSuiteReport {
    std::uint64_t seed = 0;
    std::vector<OdeSuiteCase> cases;
    double max_recon_error = 0.0;
    double max_observed_c = 0.0;
    bool all_v_estimates_hold = false;
    bool all_coeff_c10_hold = false;
};

OdeSuiteReport run_ode_suite(std::uint64_t seed, int count = 200, double horizon = 10.0);

} // namespace simons
