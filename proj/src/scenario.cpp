#include "frontlab/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace frontlab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& file, const std::string& what) {
    throw ConfigError(file + ": " + what);
}

double num(const json& j, const char* key, const std::string& file) {
    if (!j.contains(key)) fail(file, std::string("missing field '") + key + "'");
    if (!j[key].is_number()) fail(file, std::string("field '") + key + "' must be a number");
    return j[key].get<double>();
}

double num_or(const json& j, const char* key, double dflt) {
    return j.contains(key) ? j[key].get<double>() : dflt;
}

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

Rect parse_rect(const json& r, const std::string& file) {
    if (!r.is_array() || r.size() != 4)
        fail(file, "rectangle must be [x0, y0, x1, y1]");
    return {r[0].get<double>(), r[1].get<double>(), r[2].get<double>(),
            r[3].get<double>()};
}

Point parse_point(const json& p, const std::string& file) {
    if (!p.is_array() || p.size() != 2) fail(file, "point must be [x, y]");
    return {p[0].get<double>(), p[1].get<double>()};
}

}  // namespace

ObstacleSpec parse_obstacle(const json& j, const std::string& file) {
    if (!j.is_object() || !j.contains("type"))
        fail(file, "obstacle must be an object with a 'type'");
    std::string type = j["type"].get<std::string>();
    if (type == "empty") return ObstacleSpec{Empty{}};
    if (type == "slab_with_holes") {
        SlabWithHoles s{num(j, "a", file), num(j, "b", file), {}};
        if (j.contains("holes"))
            for (const auto& r : j["holes"])
                s.hole_rects.push_back(parse_rect(r, file));
        return ObstacleSpec{s};
    }
    if (type == "periodic_slits")
        return ObstacleSpec{PeriodicSlits{num(j, "thickness", file),
                                          num(j, "slit_width", file),
                                          num(j, "period", file)}};
    if (type == "parallel_blades")
        return ObstacleSpec{ParallelBlades{
            num(j, "blade_len", file), num(j, "blade_thickness", file),
            num(j, "gap", file), int(num(j, "count", file))}};
    if (type == "debris") {
        Debris d{{}, num(j, "disk_radius", file), {}};
        for (const auto& p : j.value("disk_centers", json::array()))
            d.disk_centers.push_back(parse_point(p, file));
        for (const auto& r : j.value("solid_rects", json::array()))
            d.solid_rects.push_back(parse_rect(r, file));
        return ObstacleSpec{d};
    }
    if (type == "convex_block") {
        ConvexBlock c;
        for (const auto& s : j.value("profile", json::array())) {
            if (!s.is_array() || s.size() != 3)
                fail(file, "profile section must be [y, x_lo, x_hi]");
            c.profile.push_back({s[0].get<double>(), s[1].get<double>(),
                                 s[2].get<double>()});
        }
        return ObstacleSpec{c};
    }
    if (type == "reservoir") {
        Reservoir r{num(j, "mouth_width", file), num(j, "cavity_size", file),
                    num(j, "entrance_len", file)};
        r.wall_margin = num_or(j, "wall_margin", r.wall_margin);
        return ObstacleSpec{r};
    }
    fail(file, "unknown obstacle type '" + type + "'");
}

DynParams parse_dynamics(const json& j, const std::string& file) {
    DynParams p;
    if (j.is_null()) return p;
    if (!j.is_object()) fail(file, "'dynamics' must be an object");
    p.h = num_or(j, "h", p.h);
    p.height = num_or(j, "height", p.height);
    p.pad_left = num_or(j, "pad_left", p.pad_left);
    p.pad_right = num_or(j, "pad_right", p.pad_right);
    p.front_offset = num_or(j, "front_offset", p.front_offset);
    p.probe_offset = num_or(j, "probe_offset", p.probe_offset);
    p.eps_cls = num_or(j, "eps_cls", p.eps_cls);
    p.step.dt = num_or(j, "dt", p.step.dt);
    p.step.t_max = num_or(j, "t_max", p.step.t_max);
    p.step.history_dt = num_or(j, "history_dt", p.step.history_dt);
    p.step.steady_tol = num_or(j, "steady_tol", p.step.steady_tol);
    if (j.contains("lateral_bc")) {
        std::string bc = j["lateral_bc"].get<std::string>();
        if (bc == "periodic") p.lateral_bc = LateralBC::periodic;
        else if (bc == "reflecting") p.lateral_bc = LateralBC::reflecting;
        else fail(file, "lateral_bc must be 'periodic' or 'reflecting'");
    }
    return p;
}

Extent parse_extent(const json& j, const std::string& file,
                    double fallback_height) {
    if (!j.is_object()) fail(file, "grid extent must be an object");
    return {num(j, "x_min", file), num(j, "x_max", file),
            num_or(j, "height", fallback_height)};
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    Scenario s;
    s.source = path;
    if (!doc.contains("name")) fail(path, "missing 'name'");
    s.name = doc["name"].get<std::string>();
    s.alpha = num_or(doc, "alpha", 0.25);
    if (!doc.contains("obstacle")) fail(path, "missing 'obstacle'");
    s.obstacle = parse_obstacle(doc["obstacle"], path);
    s.params = parse_dynamics(doc.value("dynamics", json()), path);
    s.checks = doc.value("checks", json::array());
    s.extra = doc;
    return s;
}

void write_pgm(const std::string& path, const GridDomain& g,
               const std::vector<double>& values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError(path + ": cannot write");
    out << "P5\n" << g.nx << " " << g.ny << "\n255\n";
    for (int iy = g.ny - 1; iy >= 0; --iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            double v = std::clamp(values[g.idx(ix, iy)], 0.0, 1.0);
            out.put(char(std::lround(v * 255.0)));
        }
}

void write_mask_pgm(const std::string& path, const GridDomain& g) {
    std::vector<double> v(g.cells(), 1.0);
    for (std::size_t i = 0; i < g.cells(); ++i)
        if (g.solid[i]) v[i] = 0.0;
    write_pgm(path, g, v);
}

void write_history_csv(const std::string& path, const RunHistory& h) {
    std::ofstream out(path);
    if (!out) throw ConfigError(path + ": cannot write");
    out << "t,front_x\n";
    char buf[80];
    for (std::size_t k = 0; k < h.t.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", h.t[k], h.front_x[k]);
        out << buf;
    }
}

namespace {

// mean of v_bar over the open cavity of a reservoir scenario
double cavity_mean(const LimitRun& lim, const Reservoir& rs) {
    const GridDomain& g = *lim.grid;
    double x0 = rs.entrance_len, y0 = rs.wall_margin;
    double sum = 0.0;
    long n = 0;
    for (int ix = 0; ix < g.nx; ++ix) {
        double x = g.xc(ix);
        if (x <= x0 || x >= x0 + rs.cavity_size) continue;
        for (int iy = 0; iy < g.ny; ++iy) {
            if (g.is_solid(ix, iy)) continue;
            double y = g.yc(iy);
            if (y <= y0 || y >= y0 + rs.cavity_size) continue;
            sum += lim.v_bar.at(ix, iy);
            ++n;
        }
    }
    if (n == 0) throw BadGeometry("cavity holds no fluid cells");
    return sum / double(n);
}

CheckOutcome run_check(const json& c, const Scenario& s, const LimitRun& lim,
                       const Nonlinearity& nl) {
    const std::string kind = c.value("check", std::string());
    const GridDomain& g = *lim.grid;
    CheckOutcome out{kind, false, ""};
    if (kind == "verdict") {
        std::string expect = c.value("expect", std::string("Propagation"));
        out.pass = expect == to_string(lim.cls.verdict);
        out.detail = to_string(lim.cls.verdict);
    } else if (kind == "probe_band") {
        double eps = c.value("eps", 0.05);
        long bad = 0;
        for (int ix = 0; ix < g.nx; ++ix) {
            if (g.xc(ix) < g.M + s.params.probe_offset) continue;
            for (int iy = 0; iy < g.ny; ++iy) {
                if (g.is_solid(ix, iy)) continue;
                double v = lim.v_bar.at(ix, iy);
                if (v > eps && v < 1.0 - eps) ++bad;
            }
        }
        out.pass = bad == 0 && !lim.cls.horizon_reached;
        out.detail = fmt("probe in [%.4g, %.4g]", lim.cls.probe_min,
                         lim.cls.probe_max);
    } else if (kind == "monotone") {
        double floor = c.value("floor", -1e-12);
        out.pass = lim.cls.min_increment >= floor;
        out.detail = fmt("min increment %.3e", lim.cls.min_increment);
    } else if (kind == "min_vbar") {
        double want = c.value("min", 0.95);
        double vmin = 2.0;
        for (std::size_t i = 0; i < g.cells(); ++i)
            if (!g.solid[i]) vmin = std::min(vmin, lim.v_bar.values[i]);
        out.pass = vmin >= want;
        out.detail = fmt("min v_bar %.6f", vmin);
    } else if (kind == "cavity_mean") {
        const auto* rs = std::get_if<Reservoir>(&s.obstacle.shape);
        if (!rs) fail(s.source, "cavity_mean needs a reservoir obstacle");
        double m = cavity_mean(lim, *rs);
        out.pass = m <= c.value("max", 0.25);
        out.detail = fmt("cavity mean %.4e", m);
    } else if (kind == "slide_bubble") {
        std::vector<Point> path;
        for (const auto& p : c.value("path", json::array()))
            path.push_back(parse_point(p, s.source));
        bool ok = slide_bubble(lim, path, nl);
        out.pass = ok == c.value("expect", true);
        out.detail = ok ? "bubble stays below v_bar" : "bubble exceeds v_bar";
    } else if (kind == "slide_W") {
        std::vector<double> lams =
            c.value("lambdas", std::vector<double>{0.0});
        bool ok = slide_W(lim, lams, nl, c.value("delta_f", 0.01));
        out.pass = ok == c.value("expect", true);
        out.detail = ok ? "W below v_bar at all lambda" : "W exceeds v_bar";
    } else if (kind == "slide_rho") {
        const auto* blades = std::get_if<ParallelBlades>(&s.obstacle.shape);
        if (!blades) fail(s.source, "slide_rho needs a blade obstacle");
        std::vector<double> lams =
            c.value("lambdas", std::vector<double>{0.0});
        auto rep = slide_rho(lim, *blades, c.value("delta_f", 0.01), lams, nl);
        double nu = c.value("nu", 0.05);
        double h2 = g.h * g.h;
        bool mono = true;
        for (std::size_t k = 0; k + 1 < rep.D_measure.size(); ++k)
            if (rep.D_measure[k] > rep.D_measure[k + 1] + h2) mono = false;
        out.pass = rep.max_violation <= nu && mono;
        out.detail = fmt("sup |D^lambda| = %.4e", rep.max_violation);
    } else if (kind == "certificate") {
        Extent ext = parse_extent(c.value("grid", json()), s.source,
                                  s.params.height);
        auto bg = rasterize(s.obstacle, s.params.h, ext, s.params.lateral_bc);
        auto cfg = build_barrier_config(s.obstacle, bg, nl);
        auto cert = minimize_barrier(cfg, nl, bg);
        double gap = certificate_confinement(cert, s.obstacle, nl, s.params);
        double tol = c.value("tol", 1e-3);
        out.pass = cert.converged && cert.constraint_slack < 0.0 &&
                   cert.el_residual <= 1e-5 && gap <= tol;
        out.detail = fmt("slack %.4g, confinement gap %.3e",
                         cert.constraint_slack, gap);
    } else if (kind == "reservoir_certificate") {
        const auto* rs = std::get_if<Reservoir>(&s.obstacle.shape);
        if (!rs) fail(s.source, "reservoir_certificate needs a reservoir");
        auto cert = reservoir_barrier(*rs, nl, g);
        double L = rs->entrance_len + rs->cavity_size + rs->wall_margin;
        double H = rs->cavity_size + 2.0 * rs->wall_margin;
        double dom = -1.0;
        for (int ix = 0; ix < g.nx; ++ix) {
            double x = g.xc(ix);
            if (x <= 0.0 || x >= L) continue;
            for (int iy = 0; iy < g.ny; ++iy) {
                if (g.is_solid(ix, iy) || g.yc(iy) >= H) continue;
                dom = std::max(dom,
                               lim.v_bar.at(ix, iy) - cert.w0.at(ix, iy));
            }
        }
        double tol = c.value("tol", 1e-3);
        out.pass = cert.converged && cert.constraint_slack < 0.0 && dom <= tol;
        out.detail = fmt("slack %.4g, max(v_bar - V) = %.3e",
                         cert.constraint_slack, dom);
    } else if (kind == "universality") {
        Point P = parse_point(c.value("point", json::array({-13.0, 1.0})),
                              s.source);
        double spread = universality_check(lim, P, nl, s.params.step);
        out.pass = spread <= c.value("tol", 5e-2);
        out.detail = fmt("terminal spread %.3e", spread);
    } else {
        fail(s.source, "unknown check '" + kind + "'");
    }
    return out;
}

}  // namespace

nlohmann::json ScenarioReport::to_json() const {
    json j;
    j["name"] = name;
    if (errored) {
        j["error"] = error;
        j["pass"] = false;
        return j;
    }
    j["verdict"] = to_string(cls.verdict);
    j["probe_min"] = cls.probe_min;
    j["probe_max"] = cls.probe_max;
    j["residual"] = cls.residual;
    j["min_increment"] = cls.min_increment;
    j["horizon_reached"] = cls.horizon_reached;
    j["t_end"] = cls.t_end;
    j["steps"] = cls.steps;
    j["checks"] = json::array();
    for (const auto& c : checks)
        j["checks"].push_back(
            {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["pass"] = pass;
    return j;
}

ScenarioReport run_scenario(const Scenario& s, const RunOverrides& o,
                            const std::string& out_dir) {
    auto t0 = std::chrono::steady_clock::now();
    Scenario sc = s;
    if (o.h > 0.0) sc.params.h = o.h;
    if (o.dt > 0.0) sc.params.step.dt = o.dt;
    if (o.t_max > 0.0) sc.params.step.t_max = o.t_max;

    ScenarioReport rep;
    rep.name = sc.name;
    Nonlinearity nl(sc.alpha);
    auto lim = limit_profile(sc.obstacle, nl, sc.params);
    rep.cls = lim.cls;
    rep.pass = true;
    for (const auto& c : sc.checks) {
        rep.checks.push_back(run_check(c, sc, lim, nl));
        rep.pass = rep.pass && rep.checks.back().pass;
    }
    rep.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream out(out_dir + "/report.json");
        out << rep.to_json().dump(2) << "\n";
        write_history_csv(out_dir + "/history.csv", rep.cls.front_history);
        write_pgm(out_dir + "/vbar.pgm", *lim.grid, lim.v_bar.values);
    }
    return rep;
}

SuiteSummary run_suite(const std::string& dir, const RunOverrides& o,
                       const std::string& out_dir) {
    std::vector<std::string> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());

    SuiteSummary sum;
    for (const auto& f : files) {
        ++sum.total;
        ScenarioReport rep;
        try {
            Scenario s = load_scenario(f);
            std::string sub =
                out_dir.empty() ? std::string() : out_dir + "/" + s.name;
            rep = run_scenario(s, o, sub);
        } catch (const std::exception& e) {
            rep.name = std::filesystem::path(f).stem();
            rep.errored = true;
            rep.error = e.what();
            rep.pass = false;
        }
        if (rep.pass) ++sum.passed;
        sum.reports.push_back(std::move(rep));
    }
    return sum;
}

}  // namespace frontlab
