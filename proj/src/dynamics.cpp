#include "frontlab/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace frontlab {

namespace {

// Decay rate of 1 - phi on the left tail; sets how much clearance the
// initializer needs left of the front so the outer mirror face sees a flat
// profile (slope below round-off, keeping the evolution nondecreasing).
double left_tail_rate(const Nonlinearity& nl, double c) {
    return 0.5 * (-c + std::sqrt(c * c + 4.0 * (1.0 - nl.alpha)));
}

GridDomain make_grid(const ObstacleSpec& spec, const Nonlinearity& nl,
                     double c, const DynParams& p) {
    double pad_l = p.pad_left > 0.0
                       ? p.pad_left
                       : p.front_offset + 26.0 / left_tail_rate(nl, c) + 2.0;
    double pad_r = p.pad_right > 0.0 ? p.pad_right : p.probe_offset + 10.0;
    return rasterize(spec, p.h, {-pad_l, spec.M() + pad_r, p.height},
                     p.lateral_bc);
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Propagation: return "Propagation";
        case Verdict::Blocking: return "Blocking";
        default: return "Undecided";
    }
}

ScalarField build_entire_initial(const WaveProfile& wp,
                                 const SuperSubPair& pair,
                                 const GridDomain& grid, double t_start) {
    if (t_start > pair.T)
        throw TimeOutOfRange("build_entire_initial: t_start > T");
    if (pair.c * t_start > -10.0)
        throw FrontTooClose(
            "initial front starts less than 10 units left of the wall");
    constexpr int kShifts = 400;
    constexpr double kSpan = 150.0;  // w- is below round-off further back
    ScalarField u(grid);
    std::vector<double> col(grid.nx, 0.0);
    for (int ix = 0; ix < grid.nx; ++ix) {
        double x = grid.xc(ix);
        if (x >= 0.0) continue;  // w- vanishes on the wall side
        double best = 0.0;
        for (int k = 0; k < kShifts; ++k) {
            double s =
                t_start - kSpan * (1.0 - double(k) / (kShifts - 1));
            best = std::max(best, eval_super_sub(pair, wp, s, x).w_minus);
        }
        col[ix] = best;
    }
    for (int ix = 0; ix < grid.nx; ++ix)
        for (int iy = 0; iy < grid.ny; ++iy)
            if (!grid.is_solid(ix, iy)) u.at(ix, iy) = col[ix];
    return u;
}

LimitRun limit_profile(const ObstacleSpec& spec, const Nonlinearity& nl,
                       const DynParams& params) {
    auto wp = solve_wave_profile(nl);
    auto pair = make_super_sub(nl, wp);
    auto grid = std::make_shared<GridDomain>(make_grid(spec, nl, wp.c, params));
    double t_start = std::min(pair.T, -params.front_offset / wp.c);
    auto u0 = build_entire_initial(wp, pair, *grid, t_start);
    auto run = run_to_steady(u0, nl, params.step);

    LimitRun out{grid, std::move(run.u), {}};
    auto& cls = out.cls;
    cls.front_history = std::move(run.history);
    cls.residual = run.residual;
    cls.min_increment = run.min_increment;
    cls.horizon_reached = run.horizon_reached;
    cls.t_end = run.t_end;
    cls.steps = run.steps;

    double lo = 2.0, hi = -1.0;
    for (int ix = 0; ix < grid->nx; ++ix) {
        if (grid->xc(ix) < grid->M + params.probe_offset) continue;
        for (int iy = 0; iy < grid->ny; ++iy) {
            if (grid->is_solid(ix, iy)) continue;
            double v = out.v_bar.at(ix, iy);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi < lo)
        throw BadGeometry("probe window holds no fluid cells");
    cls.probe_min = lo;
    cls.probe_max = hi;
    if (run.horizon_reached)
        cls.verdict = Verdict::Undecided;
    else if (lo >= 1.0 - params.eps_cls)
        cls.verdict = Verdict::Propagation;
    else if (hi <= params.eps_cls)
        cls.verdict = Verdict::Blocking;
    else
        cls.verdict = Verdict::Undecided;
    return out;
}

double monotonicity_check(const RunResult& run) { return run.min_increment; }

double universality_check(const LimitRun& lim, Point P,
                          const Nonlinearity& nl, const StepConfig& step) {
    if (P.x >= 0.0)
        throw TooCloseToObstacle("universality probe point must have x1 < 0");
    const GridDomain& g = *lim.grid;

    double R0 = find_R0(nl, 2, 1e-3);
    auto bubble = solve_bubble(nl, 1.5 * R0, 2, BubbleBranch::minimizer);
    if (!bubble) throw SearchFailed("no bubble at 1.5 R0");
    auto u0 = embed_bubble(*bubble, P, g);

    auto H = solve_H(nl);
    ScalarField v0(g);
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy)
            if (!g.is_solid(ix, iy)) v0.at(ix, iy) = H.value(g.xc(ix));

    auto ra = run_to_steady(u0, nl, step);
    auto rb = run_to_steady(v0, nl, step);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.cells(); ++i) {
        if (g.solid[i]) continue;
        double a = ra.u.values[i], b = rb.u.values[i], v = lim.v_bar.values[i];
        worst = std::max({worst, std::abs(a - b), std::abs(a - v),
                          std::abs(b - v)});
    }
    return worst;
}

double universality_check(const ObstacleSpec& spec, Point P,
                          const Nonlinearity& nl, const DynParams& params) {
    if (P.x >= 0.0)
        throw TooCloseToObstacle("universality probe point must have x1 < 0");
    return universality_check(limit_profile(spec, nl, params), P, nl,
                              params.step);
}

bool slide_bubble(const LimitRun& lim, const std::vector<Point>& path,
                  const Nonlinearity& nl) {
    const GridDomain& g = *lim.grid;
    double R0 = find_R0(nl, 2, 1e-3);
    auto bubble = solve_bubble(nl, R0, 2);
    if (!bubble) throw SearchFailed("no bubble at the critical radius");
    bool ok = true;
    auto check = [&](Point P) {
        ScalarField psi(g);
        try {
            psi = embed_bubble(*bubble, P, g);
        } catch (const TooCloseToObstacle&) {
            throw PathTooClose("path sample closer than R0 to the wall");
        }
        for (std::size_t i = 0; i < g.cells(); ++i)
            if (psi.values[i] > lim.v_bar.values[i] + 1e-3) ok = false;
    };
    if (path.size() == 1) check(path.front());
    for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
        Point a = path[seg], b = path[seg + 1];
        double len = std::hypot(b.x - a.x, b.y - a.y);
        int n = std::max(1, int(std::ceil(len / (4.0 * g.h))));
        for (int k = 0; k <= n; ++k) {
            double t = double(k) / n;
            check({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
    return ok;
}

bool slide_bubble(const ObstacleSpec& spec, const std::vector<Point>& path,
                  const Nonlinearity& nl, const DynParams& params) {
    return slide_bubble(limit_profile(spec, nl, params), path, nl);
}

bool slide_W(const LimitRun& lim, const std::vector<double>& lambdas,
             const Nonlinearity& nl, double delta_f) {
    const GridDomain& g = *lim.grid;
    auto rho = solve_rho(nl, delta_f);
    for (double lam : lambdas)
        for (int ix = 0; ix < g.nx; ++ix) {
            double x = g.xc(ix);
            double W = std::max(rho.value(x - lam), rho.value(g.M - x - lam));
            for (int iy = 0; iy < g.ny; ++iy) {
                if (g.is_solid(ix, iy)) continue;
                if (W > lim.v_bar.at(ix, iy) + 1e-3) return false;
            }
        }
    return true;
}

bool slide_W(const ObstacleSpec& spec, const std::vector<double>& lambdas,
             const Nonlinearity& nl, const DynParams& params, double delta_f) {
    return slide_W(limit_profile(spec, nl, params), lambdas, nl, delta_f);
}

SlideReport slide_rho(const LimitRun& lim, const ParallelBlades& blades,
                      double delta_f, const std::vector<double>& lambdas,
                      const Nonlinearity& nl) {
    const GridDomain& g = *lim.grid;
    auto rho = solve_rho(nl, delta_f);
    double period = blades.gap + blades.blade_thickness;
    SlideReport rep;
    rep.lambdas = lambdas;
    rep.verdict = lim.cls.verdict;
    for (double lam : lambdas) {
        long cells = 0;
        for (int ix = 0; ix < g.nx; ++ix) {
            double r = rho.value(g.xc(ix) - lam);
            if (r == 0.0) continue;
            for (int iy = 0; iy < g.ny; ++iy) {
                if (g.yc(iy) >= period) break;  // one periodicity cell
                if (g.is_solid(ix, iy)) continue;
                if (r > lim.v_bar.at(ix, iy)) ++cells;
            }
        }
        double area = double(cells) * g.h * g.h;
        rep.D_measure.push_back(area);
        rep.max_violation = std::max(rep.max_violation, area);
    }
    return rep;
}

SlideReport slide_rho(const ObstacleSpec& spec, double delta_f,
                      const std::vector<double>& lambdas,
                      const Nonlinearity& nl, const DynParams& params) {
    const auto* blades = std::get_if<ParallelBlades>(&spec.shape);
    if (!blades) throw BadGeometry("slide_rho expects a blade family");
    return slide_rho(limit_profile(spec, nl, params), *blades, delta_f,
                     lambdas, nl);
}

}  // namespace frontlab
