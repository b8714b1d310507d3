// frontlab: command-line front-propagation laboratory.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "frontlab/scenario.hpp"

using namespace frontlab;
using nlohmann::json;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError(path + ": cannot write");
    out << text;
}

struct WallConfig {
    double alpha = 0.25;
    ObstacleSpec obstacle{Empty{}};
    DynParams params;
    json doc;
};

WallConfig load_wall(const std::string& path) {
    WallConfig w;
    w.doc = load_json(path);
    w.alpha = w.doc.value("alpha", 0.25);
    if (!w.doc.contains("obstacle"))
        throw ConfigError(path + ": missing 'obstacle'");
    w.obstacle = parse_obstacle(w.doc["obstacle"], path);
    w.params = parse_dynamics(w.doc.value("dynamics", json()), path);
    return w;
}

int cmd_profile(double alpha, const std::string& out) {
    Nonlinearity nl(alpha);
    auto wp = solve_wave_profile(nl);
    if (!out.empty()) {
        std::ofstream f(out);
        f << "z,phi,dphi\n";
        char buf[96];
        for (std::size_t k = 0; k < wp.phi.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n",
                          -wp.window + double(k) * wp.dz, wp.phi[k],
                          wp.dphi[k]);
            f << buf;
        }
    }
    std::printf("c = %.10f (closed form %.10f)\n", wp.c, nl.cubic_speed());
    return 0;
}

int cmd_constants(double alpha) {
    Nonlinearity nl(alpha);
    auto bc = barrier_constants(nl);
    auto wp = solve_wave_profile(nl);
    auto pair = make_super_sub(nl, wp);
    json j{{"alpha", alpha},      {"c", wp.c},
           {"delta0", nl.delta0()}, {"F1", nl.F1()},
           {"delta", bc.delta},   {"mu", bc.mu},
           {"sigma", bc.sigma},   {"lambda_exp", pair.lambda_exp},
           {"T", pair.T},         {"M1", pair.M1}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_bubble(double alpha, int dim, double radius, const std::string& branch,
               const std::string& out) {
    Nonlinearity nl(alpha);
    if (radius <= 0.0) {
        std::printf("R0 = %.6f\n", find_R0(nl, dim, 1e-3));
        return 0;
    }
    auto b = solve_bubble(nl, radius, dim,
                          branch == "minimizer" ? BubbleBranch::minimizer
                                                : BubbleBranch::lower);
    if (!b) {
        std::fprintf(stderr, "no bubble at R = %g (R < R0?)\n", radius);
        return 1;
    }
    std::printf("Psi(0) = %.8f, energy = %.6f\n", b->center_value,
                radial_energy(nl, *b));
    if (!out.empty()) {
        std::ofstream f(out);
        f << "r,psi\n";
        char buf[64];
        for (std::size_t k = 0; k < b->samples.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", double(k) * b->dr,
                          b->samples[k]);
            f << buf;
        }
    }
    return 0;
}

Extent extent_or_default(const WallConfig& w, const std::string& config,
                         double pad_l, double pad_r) {
    if (w.doc.contains("grid"))
        return parse_extent(w.doc["grid"], config, w.params.height);
    return {-pad_l, w.obstacle.M() + pad_r, w.params.height};
}

int cmd_geom(const std::string& config, const std::string& out) {
    WallConfig w = load_wall(config);
    Extent ext = extent_or_default(w, config, 2.0, 2.0);
    auto g = rasterize(w.obstacle, w.params.h, ext, w.params.lateral_bc);
    if (!out.empty()) write_mask_pgm(out, g);
    json j{{"M", w.obstacle.M()},
           {"nx", g.nx},
           {"ny", g.ny},
           {"hole_measure", hole_measure(w.obstacle, g)},
           {"tunnel_clearance", tunnel_clearance(g)},
           {"convex_line_scan", convex_line_scan(g)}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_classify(const std::string& config, const std::string& out,
                 const RunOverrides& o) {
    Scenario s = load_scenario(config);
    s.checks = json::array();  // diagnostics only
    auto rep = run_scenario(s, o, "");
    std::string text = rep.to_json().dump(2) + "\n";
    if (!out.empty()) write_text(out, text);
    std::cout << text;
    std::fprintf(stderr, "wall clock: %.1f s\n", rep.wall_clock_s);
    return 0;
}

int cmd_slide(const std::string& config, const std::string& mode,
              const std::string& out, const RunOverrides& o) {
    Scenario s = load_scenario(config);
    if (o.h > 0.0) s.params.h = o.h;
    if (o.dt > 0.0) s.params.step.dt = o.dt;
    if (o.t_max > 0.0) s.params.step.t_max = o.t_max;
    Nonlinearity nl(s.alpha);
    json sl = s.extra.value("slide", json::object());
    auto lim = limit_profile(s.obstacle, nl, s.params);
    std::string csv;
    if (mode == "bubble") {
        std::vector<Point> path;
        for (const auto& p : sl.value("path", json::array()))
            path.push_back({p[0].get<double>(), p[1].get<double>()});
        bool ok = slide_bubble(lim, path, nl);
        csv = std::string("mode,ok\nbubble,") + (ok ? "1" : "0") + "\n";
    } else if (mode == "W") {
        std::vector<double> lams = sl.value("lambdas", std::vector<double>{0.0});
        bool ok = slide_W(lim, lams, nl, sl.value("delta_f", 0.01));
        csv = std::string("mode,ok\nW,") + (ok ? "1" : "0") + "\n";
    } else if (mode == "rho") {
        const auto* blades = std::get_if<ParallelBlades>(&s.obstacle.shape);
        if (!blades) throw ConfigError(config + ": rho mode needs blades");
        std::vector<double> lams = sl.value("lambdas", std::vector<double>{0.0});
        auto rep = slide_rho(lim, *blades, sl.value("delta_f", 0.01), lams, nl);
        csv = "lambda,D\n";
        char buf[64];
        for (std::size_t k = 0; k < rep.lambdas.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", rep.lambdas[k],
                          rep.D_measure[k]);
            csv += buf;
        }
    } else {
        throw ConfigError("slide mode must be bubble, W or rho");
    }
    if (!out.empty()) write_text(out, csv);
    std::cout << csv;
    return 0;
}

int cmd_barrier(const std::string& config, const std::string& variant,
                const std::string& out, int pw_trials, unsigned seed) {
    WallConfig w = load_wall(config);
    Nonlinearity nl(w.alpha);
    Extent ext = extent_or_default(w, config, 1.0, 20.0);
    auto g = rasterize(w.obstacle, w.params.h, ext, w.params.lateral_bc);
    auto cfg = build_barrier_config(w.obstacle, g, nl);
    auto res = minimize_barrier(cfg, nl, g,
                                variant == "cylinder"
                                    ? BarrierVariant::cylinder
                                    : BarrierVariant::constrained);
    json j{{"energy", res.energy},
           {"el_residual", res.el_residual},
           {"constraint_slack", res.constraint_slack},
           {"right_tail", res.right_tail},
           {"feasible_ep", res.feasible_ep},
           {"converged", res.converged},
           {"certified", res.certified},
           {"iters", res.iters}};
    if (pw_trials > 0 && !cfg.subdomains.empty()) {
        double q = std::numeric_limits<double>::infinity();
        for (const auto& dj : cfg.subdomains)
            q = std::min(q, rayleigh_min(g, dj, pw_trials, seed));
        j["pw_rayleigh_min"] = q;
        j["pw_bound"] = 2.0 * cfg.mu;
    }
    std::string text = j.dump(2) + "\n";
    if (!out.empty()) {
        write_text(out, text);
        std::string pgm = out;
        auto dot = pgm.rfind('.');
        pgm = (dot == std::string::npos ? pgm : pgm.substr(0, dot)) + ".pgm";
        write_pgm(pgm, g, res.w0.values);
    }
    std::cout << text;
    return 0;
}

void print_report(const ScenarioReport& rep) {
    if (rep.errored) {
        std::printf("%-26s ERROR  %s\n", rep.name.c_str(), rep.error.c_str());
        return;
    }
    std::printf("%-26s %-12s %s  (%.1f s)\n", rep.name.c_str(),
                to_string(rep.cls.verdict), rep.pass ? "pass" : "FAIL",
                rep.wall_clock_s);
    for (const auto& c : rep.checks)
        std::printf("    %-24s %s  %s\n", c.name.c_str(),
                    c.pass ? "pass" : "FAIL", c.detail.c_str());
}

int cmd_scenario_run(const std::string& file, const std::string& out_dir,
                     const RunOverrides& o) {
    auto rep = run_scenario(load_scenario(file), o, out_dir);
    print_report(rep);
    return rep.pass ? 0 : 1;
}

int cmd_scenario_suite(const std::string& dir, const std::string& out_dir,
                       const RunOverrides& o) {
    auto sum = run_suite(dir, o, out_dir);
    for (const auto& rep : sum.reports) print_report(rep);
    std::printf("suite: %d/%d scenarios passed\n", sum.passed, sum.total);
    return sum.passed == sum.total ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"front propagation laboratory"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help and exit");

    RunOverrides ov;
    unsigned seed = 1234;
    app.add_option("--h", ov.h, "grid spacing override");
    app.add_option("--dt", ov.dt, "time step override");
    app.add_option("--t-max", ov.t_max, "time horizon override");
    app.add_option("--seed", seed, "seed for randomized diagnostics");

    double alpha = 0.25, radius = 0.0;
    int dim = 2, pw_trials = 0;
    std::string out, config, mode = "bubble", variant = "constrained";
    std::string branch = "lower", file, dir, out_dir;

    auto* profile = app.add_subcommand("profile", "traveling wave profile");
    profile->add_option("--alpha", alpha);
    profile->add_option("--out", out);

    auto* constants = app.add_subcommand("constants", "derived constants");
    constants->add_option("--alpha", alpha);

    auto* bubble = app.add_subcommand("bubble", "radial Dirichlet bubble");
    bubble->add_option("--alpha", alpha);
    bubble->add_option("--dim", dim);
    bubble->add_option("--radius", radius);
    bubble->add_option("--branch", branch)
        ->check(CLI::IsMember({"lower", "minimizer"}));
    bubble->add_option("--out", out);

    auto* geom = app.add_subcommand("geom", "rasterize an obstacle");
    geom->add_option("--config", config)->required();
    geom->add_option("--out", out);

    auto* classify = app.add_subcommand("classify", "propagation verdict");
    classify->add_option("--config", config)->required();
    classify->add_option("--out", out);

    auto* slide = app.add_subcommand("slide", "sliding comparisons");
    slide->add_option("--config", config)->required();
    slide->add_option("--mode", mode)
        ->check(CLI::IsMember({"bubble", "W", "rho"}));
    slide->add_option("--out", out);

    auto* barrier = app.add_subcommand("barrier", "blocking certificate");
    barrier->add_option("--config", config)->required();
    barrier->add_option("--variant", variant)
        ->check(CLI::IsMember({"constrained", "cylinder"}));
    barrier->add_option("--out", out);
    barrier->add_option("--pw-trials", pw_trials,
                        "verify subdomain Rayleigh quotients");

    auto* scenario = app.add_subcommand("scenario", "experiment runner");
    scenario->require_subcommand(1);
    auto* srun = scenario->add_subcommand("run", "run one scenario");
    srun->add_option("file", file)->required();
    srun->add_option("--out-dir", out_dir);
    auto* ssuite = scenario->add_subcommand("suite", "run a directory");
    ssuite->add_option("dir", dir)->required();
    ssuite->add_option("--out-dir", out_dir);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*profile) return cmd_profile(alpha, out);
        if (*constants) return cmd_constants(alpha);
        if (*bubble) return cmd_bubble(alpha, dim, radius, branch, out);
        if (*geom) return cmd_geom(config, out);
        if (*classify) return cmd_classify(config, out, ov);
        if (*slide) return cmd_slide(config, mode, out, ov);
        if (*barrier) return cmd_barrier(config, variant, out, pw_trials, seed);
        if (*srun) return cmd_scenario_run(file, out_dir, ov);
        if (*ssuite) return cmd_scenario_suite(dir, out_dir, ov);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
