// Command-line driver: builds the invariant minimal hypersurfaces asymptotic
// to the cones over products of spheres and emits CSV/SVG/OBJ artifacts.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "simons/asymptotics.hpp"
#include "simons/cone_geometry.hpp"
#include "simons/errors.hpp"
#include "simons/io.hpp"
#include "simons/ode_toolkit.hpp"
#include "simons/phase_flow.hpp"
#include "simons/spectral.hpp"

namespace {

using namespace simons;

constexpr double kPi = 3.14159265358979323846;

struct RunConfig {
    int n = 2;
    int p = 1;
    std::string sign = "+";
    double offset = 1e-8;
    double rho_span = 15.0;
    double abs_tol = 1e-11;
    double rel_tol = 1e-11;
    double h_max = 1e-2;
    std::string outdir;
};

void validate_tolerances(const RunConfig& cfg) {
    auto in_range = [](double v) { return v >= 1e-13 && v <= 1e-6; };
    if (!in_range(cfg.abs_tol) || !in_range(cfg.rel_tol))
        throw ValidationError("tolerances must lie in [1e-13, 1e-6]");
    if (!(cfg.rho_span >= 5.0 && cfg.rho_span <= 60.0))
        throw ValidationError("rho-span must lie in [5, 60]");
    if (!(cfg.h_max > 0.0 && cfg.h_max <= 0.1))
        throw ValidationError("h-max must lie in (0, 0.1]");
}

OrbitControls orbit_controls(const RunConfig& cfg) {
    OrbitControls oc;
    oc.offset = cfg.offset;
    oc.rho_span = cfg.rho_span;
    oc.abs_tol = cfg.abs_tol;
    oc.rel_tol = cfg.rel_tol;
    oc.h_max = cfg.h_max;
    return oc;
}

std::string resolve_outdir(const RunConfig& cfg) {
    std::string dir = cfg.outdir;
    if (dir.empty()) {
        const char* env = std::getenv("SIMONS_OUTDIR");
        dir = (env && *env) ? env : ".";
    }
    std::filesystem::create_directories(dir);
    return dir;
}

int sign_value(const RunConfig& cfg) { return cfg.sign == "-" ? -1 : +1; }

std::string sign_word(const RunConfig& cfg) { return cfg.sign == "-" ? "minus" : "plus"; }

std::string tag(const RunConfig& cfg, bool with_sign) {
    std::string s = "n" + std::to_string(cfg.n) + "_p" + std::to_string(cfg.p);
    if (with_sign) s += "_" + sign_word(cfg);
    return s;
}

void write_profile_csv(const std::string& path, const ProfileCurve& curve) {
    CsvWriter csv(path);
    csv.header({"s", "rho", "theta", "phi", "a", "b", "da", "db"});
    for (const auto& smp : curve.samples)
        csv.row({smp.s, smp.rho, smp.theta, smp.phi, smp.a, smp.b, smp.da, smp.db});
}

// ---------------------------------------------------------------------------

int cmd_roots(const RunConfig& cfg, int max_mode) {
    const ConeParams cp(cfg.n, cfg.p);
    const std::string path = resolve_outdir(cfg) + "/roots_" + tag(cfg, false) + ".csv";
    CsvWriter csv(path);
    csv.header({"k", "l", "branch", "re", "im"});
    for (int k = 0; k <= max_mode; ++k)
        for (int l = 0; l <= max_mode; ++l) {
            const IndicialRoots r = indicial_roots(cp, {k, l});
            csv.row({double(k), double(l), +1.0, r.plus.real(), r.plus.imag()});
            csv.row({double(k), double(l), -1.0, r.minus.real(), r.minus.imag()});
        }
    const IndicialRoots r00 = indicial_roots(cp, {0, 0});
    std::cout << "wrote " << path << "\n(0,0) roots: " << format_g17(r00.plus.real()) << " + "
              << format_g17(r00.plus.imag()) << "i and conjugate/partner\n";
    return 0;
}

// Portrait canvas shared with the acceptance checks: world box and pixel size.
constexpr double kPortraitPad = 0.15;
constexpr int kPortraitW = 480;
constexpr int kPortraitH = 880;

int cmd_portrait(const RunConfig& cfg, int grid, bool doubled) {
    const ConeParams cp(cfg.n, cfg.p);
    const std::string dir = resolve_outdir(cfg);
    const std::string base = dir + "/portrait_" + tag(cfg, false);

    // Field samples on the inclusive lattice of the figure rectangle.
    {
        CsvWriter csv(base + ".csv");
        csv.header({"theta", "phi", "Y1", "Y2"});
        for (int i = 0; i <= grid; ++i)
            for (int j = 0; j <= grid; ++j) {
                const double theta = kPi / 2.0 * i / grid;
                const double phi = -kPi / 2.0 + kPi * j / grid;
                const auto y = vector_field(cp, {theta, phi});
                csv.row({theta, phi, y[0], y[1]});
            }
    }

    const auto infos = singular_points(cp);
    OrbitControls oc = orbit_controls(cfg);
    const ProfileCurve plus = generate_sigma(cp, +1, oc);
    const ProfileCurve minus = generate_sigma(cp, -1, oc);
    write_profile_csv(dir + "/portrait_orbit_plus_" + tag(cfg, false) + ".csv", plus);
    write_profile_csv(dir + "/portrait_orbit_minus_" + tag(cfg, false) + ".csv", minus);

    SvgCanvas svg(-kPortraitPad, -kPi / 2.0 - kPortraitPad, kPi / 2.0 + kPortraitPad,
                  kPi / 2.0 + kPortraitPad, kPortraitW, kPortraitH);
    // Frame of the figure rectangle.
    svg.line(0, -kPi / 2, kPi / 2, -kPi / 2, "#000");
    svg.line(0, kPi / 2, kPi / 2, kPi / 2, "#000");
    svg.line(0, -kPi / 2, 0, kPi / 2, "#000");
    svg.line(kPi / 2, -kPi / 2, kPi / 2, kPi / 2, "#000");

    // Arrows, normalized to the cell size.
    const double cell = kPi / 2.0 / grid;
    for (int i = 0; i <= grid; ++i)
        for (int j = 0; j <= 2 * grid; ++j) {
            const double theta = kPi / 2.0 * i / grid;
            const double phi = -kPi / 2.0 + kPi / 2.0 * j / grid;
            const auto y = vector_field(cp, {theta, phi});
            const double norm = std::hypot(y[0], y[1]);
            if (norm < 1e-12) continue;
            svg.arrow(theta, phi, 0.8 * cell * y[0] / norm, 0.8 * cell * y[1] / norm, "#999");
        }

    // Nullclines: theta' = 0 on the diagonal, phi' = 0 on
    // tan(phi) = ((n-p)/p) cot(theta).
    svg.line(0, 0, kPi / 2, kPi / 2, "#7a7");
    {
        std::vector<std::array<double, 2>> pts;
        for (int i = 1; i < 400; ++i) {
            const double theta = kPi / 2.0 * i / 400;
            const double phi =
                std::atan2((cp.n - cp.p) * std::cos(theta), cp.p * std::sin(theta));
            pts.push_back({theta, phi});
        }
        svg.polyline(pts, "#2a7");
    }

    auto orbit_polyline = [&](const ProfileCurve& curve, const std::string& color) {
        std::vector<std::array<double, 2>> pts;
        const std::size_t step = std::max<std::size_t>(1, curve.samples.size() / 1200);
        for (std::size_t i = 0; i < curve.samples.size(); i += step)
            pts.push_back({curve.samples[i].theta, curve.samples[i].phi});
        pts.push_back({curve.samples.back().theta, curve.samples.back().phi});
        svg.polyline(pts, color, 2.0);
    };
    orbit_polyline(plus, "#d33");
    orbit_polyline(minus, "#33d");
    if (doubled) {
        OrbitControls dc = oc;
        dc.rho_span = std::min(oc.rho_span, 8.0);
        const ProfileCurve lower = doubled_cone_orbit(cp, +1, dc);
        const ProfileCurve upper = doubled_cone_orbit(cp, -1, dc);
        write_profile_csv(dir + "/portrait_orbit_doubled_lower_" + tag(cfg, false) + ".csv",
                          lower);
        write_profile_csv(dir + "/portrait_orbit_doubled_upper_" + tag(cfg, false) + ".csv",
                          upper);
        orbit_polyline(lower, "#909");
        orbit_polyline(upper, "#909");
    }

    for (const auto& info : infos) {
        const bool saddle = info.kind == SingularKind::Saddle;
        svg.circle(info.location.theta, info.location.phi, 5.0, saddle ? "#000" : "#d33");
    }
    svg.text(kPi / 2 - 0.35, -0.08, "saddle");
    svg.text(0.04, kPi / 2 - 0.1, "saddle");
    svg.text(cp.theta0 + 0.05, cp.theta0 - 0.05, "sink");

    svg.write(base + ".svg");
    std::cout << "wrote " << base << ".csv and .svg\n";
    return 0;
}

int cmd_profile(const RunConfig& cfg) {
    const ConeParams cp(cfg.n, cfg.p);
    const ProfileCurve curve = generate_sigma(cp, sign_value(cfg), orbit_controls(cfg));
    const std::string path = resolve_outdir(cfg) + "/profile_" + tag(cfg, true) + ".csv";
    write_profile_csv(path, curve);
    std::cout << "wrote " << path << " (" << curve.samples.size() << " samples)\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg, int resolution) {
    const ConeParams cp(cfg.n, cfg.p);
    const std::string dir = resolve_outdir(cfg);
    const std::string t = tag(cfg, true);

    OrbitControls oc = orbit_controls(cfg);
    oc.rho_span = std::max(oc.rho_span, 18.0);  // decay fits need a long tail
    const ProfileCurve curve = generate_sigma(cp, sign_value(cfg), oc);

    std::ofstream report(dir + "/verify_" + t + "_report.txt");
    if (!report) throw ValidationError("cannot open report for writing");
    report << "cone n=" << cfg.n << " p=" << cfg.p << " sign=" << cfg.sign << "\n";
    report << "theta0 = " << format_g17(cp.theta0)
           << "  sin(2 theta0) = " << format_g17(cp.sin_two_theta0) << "\n";
    report << "orbit samples = " << curve.samples.size() << "\n";
    const auto& last = curve.samples.back();
    report << "terminal distance to sink = "
           << format_g17(std::hypot(last.theta - cp.theta0, last.phi - cp.theta0)) << "\n";

    // Reduced-ODE residual, interior samples only.
    const std::vector<double> reduced = scaled_reduced_residuals(curve);
    double reduced_max = 0.0;
    for (std::size_t i = residual_fit_margin; i + residual_fit_margin < reduced.size(); ++i)
        reduced_max = std::max(reduced_max, reduced[i]);
    report << "scaled reduced-ODE residual (interior max) = " << format_g17(reduced_max) << "\n";

    const RadialGraph graph = profile_to_graph(curve);
    const ResidualSeries inv = residual_invariant(cp, graph);
    // The relative residual is pure roundoff once |g| sinks below ~1e-8, so
    // the reported max is taken over samples above that floor.
    double inv_max = 0.0;
    for (std::size_t i = residual_fit_margin; i + residual_fit_margin < inv.scaled.size(); ++i)
        if (std::abs(graph.g[i]) >= 1e-8)
            inv_max = std::max(inv_max, inv.scaled[i]);
    report << "scaled invariant-equation residual (interior max, |g| >= 1e-8) = "
           << format_g17(inv_max) << "\n";
    {
        CsvWriter csv(dir + "/verify_" + t + "_residual.csv");
        csv.header({"t", "raw", "scaled"});
        for (std::size_t i = 0; i < inv.t.size(); ++i)
            csv.row({inv.t[i], inv.raw[i], inv.scaled[i]});
    }

    const IndicialRoots r00 = indicial_roots(cp, {0, 0});
    try {
        const DecayFit fit = fit_decay(graph, r00);
        report << "decay fit: rate = " << format_g17(fit.rate)
               << " frequency = " << format_g17(fit.frequency) << " window = ["
               << format_g17(fit.window_lo) << ", " << format_g17(fit.window_hi) << "]\n";
        report << "expected from indicial roots: rate = " << format_g17(r00.plus.real())
               << " frequency = " << format_g17(std::abs(r00.plus.imag())) << "\n";
    } catch (const ConvergenceError& e) {
        report << "decay fit unavailable: " << e.what() << "\n";
    }
    {
        CsvWriter csv(dir + "/verify_" + t + "_decay.csv");
        csv.header({"t", "g"});
        for (std::size_t i = 0; i < graph.t.size(); ++i) csv.row({graph.t[i], graph.g[i]});
    }

    // Density profile over log-spaced radii inside the covered range.
    const double rho_end = curve.samples.back().rho;
    std::vector<double> radii;
    for (int j = 0; j < 12; ++j)
        radii.push_back(std::exp(1.0 + (rho_end - 2.0) * j / 11.0));
    const DensityProfile dens = density_profile(curve, radii);
    {
        CsvWriter csv(dir + "/verify_" + t + "_density.csv");
        csv.header({"r", "theta"});
        for (std::size_t j = 0; j < radii.size(); ++j) csv.row({dens.radii[j], dens.theta[j]});
    }
    report << "density limit estimate = " << format_g17(dens.limit_estimate) << "\n";
    report << "cone density = " << format_g17(cone_density(cp)) << "\n";
    report << "difference = " << format_g17(dens.limit_estimate - cone_density(cp)) << "\n";
    report << "cap volume bound = " << format_g17(dens.cap_bound) << "\n";

    if (cfg.n == 2 && cfg.p == 1) {
        CsvWriter csv(dir + "/verify_" + t + "_flux.csv");
        csv.header({"t", "F1", "F2", "F3", "F4", "norm"});
        const double dt = 0.01;
        for (double tf = 3.0; tf <= 8.0 + 1e-9; tf += 1.0) {
            const TorusGraph tg =
                extend_radial_to_torus(graph, tf - 2 * dt, dt, 5, resolution, resolution);
            const FluxResult fr = flux(tg, tf, resolution);
            csv.row({tf, fr.flux[0], fr.flux[1], fr.flux[2], fr.flux[3], norm4(fr.flux)});
            if (tf == 8.0) report << "flux norm at t=8 (resolution " << resolution
                                  << ") = " << format_g17(norm4(fr.flux)) << "\n";
        }
    }

    std::cout << "wrote verify report and CSV artifacts under " << dir << "\n";
    return 0;
}

std::vector<std::vector<double>> sphere_grid(int m, int which) {
    std::vector<std::vector<double>> pts;
    if (m == 1) {
        for (int j = 0; j < 48; ++j) {
            const double ang = 2.0 * kPi * j / 48;
            pts.push_back({std::cos(ang), std::sin(ang)});
        }
    } else if (m == 2) {
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 24; ++j) {
                const double u = kPi * (i + 0.5) / 12, v = 2.0 * kPi * j / 24;
                pts.push_back({std::sin(u) * std::cos(v), std::sin(u) * std::sin(v),
                               std::cos(u)});
            }
    } else {
        std::mt19937_64 rng(777 + which);
        std::normal_distribution<double> gauss;
        for (int i = 0; i < 96; ++i) {
            std::vector<double> x(m + 1);
            double norm = 0.0;
            for (double& c : x) {
                c = gauss(rng);
                norm += c * c;
            }
            norm = std::sqrt(norm);
            for (double& c : x) c /= norm;
            pts.push_back(x);
        }
    }
    return pts;
}

int cmd_mesh(const RunConfig& cfg) {
    const ConeParams cp(cfg.n, cfg.p);
    const std::string dir = resolve_outdir(cfg);
    const ProfileCurve curve = generate_sigma(cp, sign_value(cfg), orbit_controls(cfg));

    // Subsample the profile to keep files small.
    std::vector<const ProfileSample*> rows;
    const std::size_t step = std::max<std::size_t>(1, curve.samples.size() / 200);
    for (std::size_t i = 0; i < curve.samples.size(); i += step) rows.push_back(&curve.samples[i]);
    rows.push_back(&curve.samples.back());

    const auto xs = sphere_grid(cfg.p, 0);
    const auto ys = sphere_grid(cfg.n - cfg.p, 1);
    {
        CsvWriter csv(dir + "/mesh_" + tag(cfg, true) + "_points.csv");
        std::vector<std::string> names;
        for (int c = 1; c <= cfg.n + 2; ++c) names.push_back("x" + std::to_string(c));
        csv.header(names);
        std::vector<double> row(cfg.n + 2);
        for (const auto* smp : rows)
            for (const auto& x : xs)
                for (const auto& y : ys) {
                    for (std::size_t c = 0; c < x.size(); ++c) row[c] = smp->a * x[c];
                    for (std::size_t c = 0; c < y.size(); ++c) row[x.size() + c] = smp->b * y[c];
                    csv.row(row);
                }
    }

    if (cfg.n == 2 && cfg.p == 1) {
        const int cols = 48;
        std::vector<std::array<double, 3>> verts;
        for (const auto* smp : rows)
            for (int j = 0; j < cols; ++j) {
                const double ang = 2.0 * kPi * j / cols;
                verts.push_back({smp->a * std::cos(ang), smp->a * std::sin(ang), smp->b});
            }
        write_obj_grid(dir + "/mesh_" + tag(cfg, true) + ".obj", verts, int(rows.size()), cols,
                       true,
                       {"invariant surface slice phi = 0 of the second circle factor",
                        "projection: orthogonal, dropped coordinate x4"});
    }
    std::cout << "wrote mesh artifacts under " << dir << "\n";
    return 0;
}

int cmd_density(const RunConfig& cfg, double r_lo, double r_hi, int r_count,
                std::vector<double> radii, bool cone) {
    const ConeParams cp(cfg.n, cfg.p);
    const std::string dir = resolve_outdir(cfg);
    if (radii.empty()) {
        if (!(r_lo > 0.0 && r_hi > r_lo && r_count >= 2))
            throw ValidationError("need 0 < r-lo < r-hi and r-count >= 2");
        for (int j = 0; j < r_count; ++j)
            radii.push_back(
                std::exp(std::log(r_lo) + (std::log(r_hi) - std::log(r_lo)) * j / (r_count - 1)));
    }

    ProfileCurve curve;
    std::string name;
    if (cone) {
        curve = make_cone_profile(cp, std::log(radii.front()) - 9.0, std::log(radii.back()) + 0.5,
                                  0.01);
        name = dir + "/density_cone_" + tag(cfg, false) + ".csv";
    } else {
        OrbitControls oc = orbit_controls(cfg);
        oc.rho_span = std::max(oc.rho_span, std::log(radii.back()) + 1.0);
        curve = generate_sigma(cp, sign_value(cfg), oc);
        name = dir + "/density_" + tag(cfg, true) + ".csv";
    }
    const DensityProfile dens = density_profile(curve, radii);
    CsvWriter csv(name);
    csv.header({"r", "theta"});
    for (std::size_t j = 0; j < dens.radii.size(); ++j) csv.row({dens.radii[j], dens.theta[j]});
    std::cout << "density limit estimate = " << format_g17(dens.limit_estimate)
              << " (cone density " << format_g17(cone_density(cp)) << ")\n"
              << "cap volume bound = " << format_g17(dens.cap_bound) << "\nwrote " << name
              << "\n";
    return 0;
}

int cmd_odecheck(const RunConfig& cfg, std::uint64_t seed, int count, double horizon) {
    const OdeSuiteReport rep = run_ode_suite(seed, count, horizon);
    const std::string path =
        resolve_outdir(cfg) + "/odecheck_seed" + std::to_string(seed) + ".csv";
    CsvWriter csv(path);
    csv.header({"index", "re_lambda", "im_lambda", "re_mu", "im_mu", "delta", "recon_error",
                "observed_c", "v_holds", "coeff_c10_holds"});
    for (const auto& c : rep.cases)
        csv.row({double(c.index), c.lambda.real(), c.lambda.imag(), c.mu.real(), c.mu.imag(),
                 c.delta, c.recon_error, c.observed_c, c.v_estimate_holds ? 1.0 : 0.0,
                 c.coeff_holds_c10 ? 1.0 : 0.0});
    std::cout << "cases = " << rep.cases.size() << "\n"
              << "max reconstruction error = " << format_g17(rep.max_recon_error) << "\n"
              << "max observed coefficient constant = " << format_g17(rep.max_observed_c) << "\n"
              << "v-estimate holds in all cases: " << (rep.all_v_estimates_hold ? "yes" : "no")
              << "\n"
              << "coefficient estimate with c = 10 holds in all cases: "
              << (rep.all_coeff_c10_hold ? "yes" : "no") << "\nwrote " << path << "\n";
    return 0;
}

// Error text lands in a CSV cell, so it must not introduce separators.
std::string csv_safe(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    return s;
}

int cmd_sweep(const RunConfig& cfg, int n_min, int n_max) {
    if (!(2 <= n_min && n_min <= n_max && n_max <= 8))
        throw ValidationError("sweep needs 2 <= n-min <= n-max <= 8");
    const std::string path = resolve_outdir(cfg) + "/sweep.csv";
    CsvWriter csv(path);
    csv.raw_row({"n", "p", "sign", "status", "terminal_dist", "reduced_residual_max",
                 "density_limit", "cone_density", "decay_rate", "decay_frequency"});
    for (int n = n_min; n <= n_max; ++n)
        for (int p = 1; p < n; ++p)
            for (int sgn : {+1, -1}) {
                std::vector<std::string> row = {std::to_string(n), std::to_string(p),
                                                sgn > 0 ? "+" : "-"};
                try {
                    const ConeParams cp(n, p);
                    OrbitControls oc = orbit_controls(cfg);
                    const ProfileCurve curve = generate_sigma(cp, sgn, oc);
                    const auto& last = curve.samples.back();
                    const double dist = std::hypot(last.theta - cp.theta0, last.phi - cp.theta0);
                    const std::vector<double> reduced = scaled_reduced_residuals(curve);
                    double rmax = 0.0;
                    for (std::size_t i = residual_fit_margin;
                         i + residual_fit_margin < reduced.size(); ++i)
                        rmax = std::max(rmax, reduced[i]);
                    const RadialGraph graph = profile_to_graph(curve);
                    const double rho_end = curve.samples.back().rho;
                    std::vector<double> radii;
                    for (int j = 0; j < 8; ++j)
                        radii.push_back(std::exp(1.0 + (rho_end - 2.0) * j / 7.0));
                    const DensityProfile dens = density_profile(curve, radii);
                    std::string rate = "nan", freq = "nan";
                    try {
                        const DecayFit fit = fit_decay(graph, indicial_roots(cp, {0, 0}));
                        rate = format_g17(fit.rate);
                        freq = format_g17(fit.frequency);
                    } catch (const ConvergenceError&) {
                    }
                    row.insert(row.end(),
                               {"ok", format_g17(dist), format_g17(rmax),
                                format_g17(dens.limit_estimate), format_g17(cone_density(cp)),
                                rate, freq});
                } catch (const ValidationError& e) {
                    row.insert(row.end(), {"validation_error: " + csv_safe(e.what()), "nan",
                                           "nan", "nan", "nan", "nan", "nan"});
                } catch (const ConvergenceError& e) {
                    row.insert(row.end(), {"convergence_error: " + csv_safe(e.what()), "nan",
                                           "nan", "nan", "nan", "nan", "nan"});
                }
                csv.raw_row(row);
            }
    std::cout << "wrote " << path << "\n";
    return 0;
}

// Fill options that were not passed on the command line from a JSON config.
void apply_config_file(const std::string& path, CLI::App& app, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    auto unset = [&](const std::string& flag) {
        for (CLI::App* sub : app.get_subcommands()) {
            const CLI::Option* opt = sub->get_option_no_throw(flag);
            if (opt && opt->count() > 0) return false;
        }
        return true;
    };
    auto load_int = [&](const char* key, int& var, const std::string& flag) {
        if (j.contains(key) && unset(flag)) var = j.at(key).get<int>();
    };
    auto load_double = [&](const char* key, double& var, const std::string& flag) {
        if (j.contains(key) && unset(flag)) var = j.at(key).get<double>();
    };
    auto load_string = [&](const char* key, std::string& var, const std::string& flag) {
        if (j.contains(key) && unset(flag)) var = j.at(key).get<std::string>();
    };
    load_int("n", cfg.n, "--n");
    load_int("p", cfg.p, "--p");
    load_string("sign", cfg.sign, "--sign");
    load_double("offset", cfg.offset, "--offset");
    load_double("rho_span", cfg.rho_span, "--rho-span");
    load_double("abs_tol", cfg.abs_tol, "--abs-tol");
    load_double("rel_tol", cfg.rel_tol, "--rel-tol");
    load_double("h_max", cfg.h_max, "--h-max");
    load_string("outdir", cfg.outdir, "--outdir");
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    std::string config_path;
    int max_mode = 3, grid = 24, resolution = 128, r_count = 10, n_min = 2, n_max = 4;
    int suite_count = 200;
    std::uint64_t seed = 20240817;
    double horizon = 10.0, r_lo = 3.0, r_hi = 2000.0;
    std::vector<double> radii;
    bool doubled = false, cone = false;

    CLI::App app{"invariant minimal hypersurfaces asymptotic to cones over "
                 "products of spheres: phase-plane construction and checks"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub, bool with_sign) {
        sub->add_option("--n", cfg.n, "ambient cone dimension parameter (n >= 2)");
        sub->add_option("--p", cfg.p, "first sphere factor dimension (1 <= p <= n-1)");
        if (with_sign)
            sub->add_option("--sign", cfg.sign, "branch: + leaves (pi/2,0), - leaves (0,pi/2)")
                ->check(CLI::IsMember({"+", "-"}));
        sub->add_option("--offset", cfg.offset, "unstable-manifold seed offset [1e-10, 1e-6]");
        sub->add_option("--rho-span", cfg.rho_span, "required growth of rho before stopping");
        sub->add_option("--abs-tol", cfg.abs_tol, "integrator absolute tolerance");
        sub->add_option("--rel-tol", cfg.rel_tol, "integrator relative tolerance");
        sub->add_option("--h-max", cfg.h_max, "integrator max step");
        sub->add_option("--outdir", cfg.outdir, "output directory (default $SIMONS_OUTDIR or .)");
        sub->add_option("--config", config_path, "JSON config file; flags take precedence");
    };

    CLI::App* sub_roots = app.add_subcommand("roots", "indicial roots per mode (k, l)");
    add_common(sub_roots, false);
    sub_roots->add_option("--max-mode", max_mode, "largest k and l")->check(CLI::Range(0, 64));

    CLI::App* sub_portrait =
        app.add_subcommand("portrait", "vector-field portrait CSV + SVG with orbits");
    add_common(sub_portrait, false);
    sub_portrait->add_option("--grid", grid, "lattice cells per pi/2")->check(CLI::Range(4, 256));
    sub_portrait->add_flag("--doubled", doubled, "also trace the doubled-cone separatrices");

    CLI::App* sub_profile = app.add_subcommand("profile", "profile curve samples as CSV");
    add_common(sub_profile, true);

    CLI::App* sub_verify =
        app.add_subcommand("verify", "residual, decay, density and flux report");
    add_common(sub_verify, true);
    sub_verify->add_option("--resolution", resolution, "flux quadrature points per circle")
        ->check(CLI::Range(64, 1024));

    CLI::App* sub_mesh = app.add_subcommand("mesh", "point cloud CSV (+ OBJ for n=2)");
    add_common(sub_mesh, true);

    CLI::App* sub_density = app.add_subcommand("density", "density ratio profile");
    add_common(sub_density, true);
    sub_density->add_option("--r-lo", r_lo, "smallest radius");
    sub_density->add_option("--r-hi", r_hi, "largest radius");
    sub_density->add_option("--r-count", r_count, "number of log-spaced radii");
    sub_density->add_option("--radii", radii, "explicit radii list")->delimiter(',');
    sub_density->add_flag("--cone", cone, "use the exact cone profile instead of an orbit");

    CLI::App* sub_ode = app.add_subcommand("odecheck", "randomized second-order ODE suite");
    add_common(sub_ode, false);
    sub_ode->add_option("--seed", seed, "random seed");
    sub_ode->add_option("--count", suite_count, "number of cases")->check(CLI::Range(1, 100000));
    sub_ode->add_option("--horizon", horizon, "time horizon")->check(CLI::Range(2.0, 100.0));

    CLI::App* sub_sweep = app.add_subcommand("sweep", "run all (n, p, sign) cells in a range");
    add_common(sub_sweep, false);
    sub_sweep->add_option("--n-min", n_min, "smallest n");
    sub_sweep->add_option("--n-max", n_max, "largest n");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (!config_path.empty()) apply_config_file(config_path, app, cfg);
        validate_tolerances(cfg);
        if (app.got_subcommand(sub_roots)) return cmd_roots(cfg, max_mode);
        if (app.got_subcommand(sub_portrait)) return cmd_portrait(cfg, grid, doubled);
        if (app.got_subcommand(sub_profile)) return cmd_profile(cfg);
        if (app.got_subcommand(sub_verify)) return cmd_verify(cfg, resolution);
        if (app.got_subcommand(sub_mesh)) return cmd_mesh(cfg);
        if (app.got_subcommand(sub_density))
            return cmd_density(cfg, r_lo, r_hi, r_count, radii, cone);
        if (app.got_subcommand(sub_ode)) return cmd_odecheck(cfg, seed, suite_count, horizon);
        if (app.got_subcommand(sub_sweep)) return cmd_sweep(cfg, n_min, n_max);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
