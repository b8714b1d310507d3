#include "frontlab/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace frontlab {

namespace {

// Neighbor table over a cell mask; absent neighbors mirror (zero-flux).
struct Region {
    const GridDomain* g = nullptr;
    std::vector<std::uint8_t> in;
    std::vector<int> nb;  // 4 slots per cell, -1 = mirrored face

    void build(const GridDomain& gd, const std::vector<std::uint8_t>& mask) {
        g = &gd;
        in = mask;
        nb.assign(gd.cells() * 4, -1);
        const bool per = gd.lateral_bc == LateralBC::periodic;
        for (int ix = 0; ix < gd.nx; ++ix)
            for (int iy = 0; iy < gd.ny; ++iy) {
                auto i = gd.idx(ix, iy);
                if (!in[i]) continue;
                auto put = [&](int slot, int jx, int jy) {
                    if (jx < 0 || jx >= gd.nx) return;
                    if (jy < 0 || jy >= gd.ny) {
                        if (!per) return;
                        jy = (jy + gd.ny) % gd.ny;
                    }
                    auto j = gd.idx(jx, jy);
                    if (in[j]) nb[i * 4 + slot] = int(j);
                };
                put(0, ix - 1, iy);
                put(1, ix + 1, iy);
                put(2, ix, iy - 1);
                put(3, ix, iy + 1);
            }
    }

    double lap(const std::vector<double>& w, std::size_t i, double h2) const {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) {
            int j = nb[i * 4 + k];
            s += j >= 0 ? w[j] : w[i];
        }
        return (s - 4.0 * w[i]) / h2;
    }

    // sum over interior faces of (dw)^2  ==  int |grad w|^2
    double grad_sq(const std::vector<double>& w) const {
        double s = 0.0;
        for (std::size_t i = 0; i < in.size(); ++i) {
            if (!in[i]) continue;
            for (int k : {1, 3}) {  // right and up faces, each counted once
                int j = nb[i * 4 + k];
                if (j >= 0) {
                    double d = w[j] - w[i];
                    s += d * d;
                }
            }
        }
        return s;
    }
};

struct DescentOut {
    bool converged = false;
    long iters = 0;
    double el_residual = 0.0;
    std::vector<double> J_trace;
};

// Projected gradient descent on J: explicit relaxation of lap w + f(w),
// Dirichlet cells pinned, optional per-subdomain mean caps, values clipped
// to [0, 1].
DescentOut descend(const Region& reg, const std::vector<std::uint8_t>& fixed,
                   const std::vector<std::vector<std::size_t>>* mean_caps,
                   double delta, const Nonlinearity& nl,
                   std::vector<double>& w,
                   const std::function<double()>& energy) {
    const double h2 = reg.g->h * reg.g->h;
    const double tau = 0.9 * h2 / 4.0;
    constexpr long kCap = 200000;
    constexpr long kWindow = 200;  // energy-acceptance checkpoint spacing
    constexpr double kBeta = 0.99;
    DescentOut out;
    std::vector<double> r(w.size(), 0.0), v(w.size(), 0.0);
    // heavy-ball momentum cuts through the near-marginal low modes (narrow
    // apertures); a step window is accepted only if J did not increase, else
    // it is rolled back and redone as plain gradient steps
    std::vector<double> w_ck = w;
    double J_ck = energy();
    bool momentum = true;
    for (long it = 1; it <= kCap; ++it) {
        double gmax = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!reg.in[i] || fixed[i]) {
                r[i] = 0.0;
                continue;
            }
            r[i] = reg.lap(w, i, h2) + nl.f(w[i]);
            gmax = std::max(gmax, std::abs(r[i]));
        }
        double beta = momentum ? kBeta : 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            v[i] = beta * v[i] + tau * r[i];
            w[i] += v[i];
        }
        if (mean_caps)
            for (const auto& dj : *mean_caps) {
                double m = 0.0;
                for (auto i : dj) m += w[i];
                m /= double(dj.size());
                if (m > delta)
                    for (auto i : dj) w[i] -= m - delta;
            }
        for (std::size_t i = 0; i < w.size(); ++i)
            if (reg.in[i] && !fixed[i]) w[i] = std::clamp(w[i], 0.0, 1.0);
        out.iters = it;
        if (gmax < 1e-7) {
            out.J_trace.push_back(energy());
            out.converged = true;
            break;
        }
        if (it % kWindow == 0) {
            double J = energy();
            if (J <= J_ck + 1e-12) {
                out.J_trace.push_back(J);
                w_ck = w;
                J_ck = J;
                momentum = true;
            } else {  // reject the window; retry without momentum
                w = w_ck;
                std::fill(v.begin(), v.end(), 0.0);
                momentum = false;
            }
        }
    }
    if (!out.converged)
        throw NotConverged("barrier descent hit the iteration cap");
    double el = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (reg.in[i] && !fixed[i])
            el = std::max(el, std::abs(reg.lap(w, i, h2) + nl.f(w[i])));
    out.el_residual = el;
    return out;
}

// Band index for unit tiling of [0, total]; a trailing strip shorter than
// half a unit merges into the last full band.
int band(double t, double total) {
    int nfull = int(std::floor(total + 1e-9));
    double rem = total - nfull;
    int nbands = std::max(1, nfull + (rem >= 0.5 ? 1 : 0));
    int k = int(std::floor(t));
    return std::clamp(k, 0, nbands - 1);
}

int band_count(double total) {
    int nfull = int(std::floor(total + 1e-9));
    double rem = total - nfull;
    return std::max(1, nfull + (rem >= 0.5 ? 1 : 0));
}

double mean_slack(const std::vector<double>& w,
                  const std::vector<std::vector<std::size_t>>& subs,
                  double delta) {
    double worst = -delta;  // empty decomposition: vacuous constraint
    for (const auto& dj : subs) {
        double m = 0.0;
        for (auto i : dj) m += w[i];
        worst = std::max(worst, m / double(dj.size()) - delta);
    }
    return worst;
}

}  // namespace

BarrierConfig build_barrier_config(const ObstacleSpec& spec,
                                   const GridDomain& grid,
                                   const Nonlinearity& nl) {
    BarrierConfig cfg;
    cfg.a = 0.0;
    cfg.b = spec.M();
    if (const auto* s = std::get_if<SlabWithHoles>(&spec.shape)) {
        cfg.a = s->a;
        cfg.b = s->b;
    }
    cfg.R_trunc = grid.x1_offset + grid.nx * grid.h;
    auto bc = barrier_constants(nl);
    cfg.delta = bc.delta;
    cfg.mu = bc.mu;
    cfg.sigma = bc.sigma;

    double span_x = cfg.R_trunc - cfg.b;
    double span_y = grid.height();
    int nby = band_count(span_y);
    std::vector<std::vector<std::size_t>> subs(
        std::size_t(band_count(span_x)) * nby);
    for (int ix = 0; ix < grid.nx; ++ix) {
        double x = grid.xc(ix);
        if (x <= cfg.b) continue;
        int bx = band(x - cfg.b, span_x);
        for (int iy = 0; iy < grid.ny; ++iy) {
            if (grid.is_solid(ix, iy)) continue;
            subs[std::size_t(bx) * nby + band(grid.yc(iy), span_y)].push_back(
                grid.idx(ix, iy));
        }
    }
    std::erase_if(subs, [](const auto& v) { return v.empty(); });
    cfg.subdomains = std::move(subs);

    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& dj : cfg.subdomains)
        dmin = std::min(dmin, double(dj.size()) * grid.h * grid.h);
    cfg.D_min = cfg.subdomains.empty() ? 0.0 : dmin;

    cfg.hole = hole_measure(spec, grid);
    double ba = cfg.b - cfg.a;
    double ramp_density =
        1.0 / (2.0 * ba * ba) - nl.F(nl.alpha) + nl.F1();
    cfg.feasible_ep = cfg.hole < cfg.sigma * cfg.D_min / ramp_density;
    return cfg;
}

ScalarField zeta_field(const BarrierConfig& cfg, const GridDomain& grid) {
    ScalarField z(grid);
    for (int ix = 0; ix < grid.nx; ++ix) {
        double x = grid.xc(ix);
        double v = x <= cfg.a ? 1.0
                   : x >= cfg.b ? 0.0
                                : (cfg.b - x) / (cfg.b - cfg.a);
        for (int iy = 0; iy < grid.ny; ++iy)
            if (!grid.is_solid(ix, iy)) z.at(ix, iy) = v;
    }
    return z;
}

double energy_J(const ScalarField& w, const BarrierConfig& cfg,
                const Nonlinearity& nl) {
    const GridDomain& g = *w.grid;
    const double h2 = g.h * g.h;
    const bool per = g.lateral_bc == LateralBC::periodic;
    double E = 0.0;
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy) {
            if (g.is_solid(ix, iy)) continue;
            double u = w.at(ix, iy);
            if (ix + 1 < g.nx && !g.is_solid(ix + 1, iy)) {
                double d = w.at(ix + 1, iy) - u;
                E += 0.5 * d * d;
            }
            int ja = iy + 1 < g.ny ? iy + 1 : (per ? 0 : -1);
            if (ja >= 0 && (iy + 1 < g.ny || per) && !g.is_solid(ix, ja)) {
                double d = w.at(ix, ja) - u;
                E += 0.5 * d * d;
            }
            E += h2 * (-nl.F(u) + (g.xc(ix) < cfg.b ? nl.F1() : 0.0));
        }
    return E;
}

BarrierResult minimize_barrier(const BarrierConfig& cfg,
                               const Nonlinearity& nl, const GridDomain& grid,
                               BarrierVariant variant) {
    BarrierResult res{zeta_field(cfg, grid)};
    res.feasible_ep = cfg.feasible_ep;

    std::vector<std::uint8_t> mask(grid.cells());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = !grid.solid[i];
    Region reg;
    reg.build(grid, mask);

    std::vector<std::uint8_t> fixed(grid.cells(), 0);
    for (int iy = 0; iy < grid.ny; ++iy) {
        if (!grid.is_solid(0, iy)) {
            fixed[grid.idx(0, iy)] = 1;
            res.w0.at(0, iy) = 1.0;
        }
        if (variant == BarrierVariant::cylinder &&
            !grid.is_solid(grid.nx - 1, iy)) {
            fixed[grid.idx(grid.nx - 1, iy)] = 1;
            res.w0.at(grid.nx - 1, iy) = 0.0;
        }
    }

    auto& w = res.w0.values;
    auto energy = [&] { return energy_J(res.w0, cfg, nl); };
    auto out = descend(reg, fixed,
                       variant == BarrierVariant::constrained
                           ? &cfg.subdomains
                           : nullptr,
                       cfg.delta, nl, w, energy);
    res.converged = out.converged;
    res.iters = out.iters;
    res.el_residual = out.el_residual;
    res.J_trace = std::move(out.J_trace);
    res.energy = energy();
    res.constraint_slack = mean_slack(w, cfg.subdomains, cfg.delta);
    res.right_tail = 0.0;
    for (int ix = 0; ix < grid.nx; ++ix) {
        if (grid.xc(ix) < cfg.b + 5.0) continue;
        for (int iy = 0; iy < grid.ny; ++iy)
            if (!grid.is_solid(ix, iy))
                res.right_tail = std::max(res.right_tail, res.w0.at(ix, iy));
    }
    res.certified = res.feasible_ep && res.converged &&
                    res.constraint_slack < 0.0 && res.el_residual <= 1e-5;
    return res;
}

double verify_supersolution(const ScalarField& w0, const Nonlinearity& nl) {
    const GridDomain& g = *w0.grid;
    std::vector<std::uint8_t> mask(g.cells());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = !g.solid[i];
    Region reg;
    reg.build(g, mask);
    const double h2 = g.h * g.h;
    double worst = std::numeric_limits<double>::infinity();
    for (int ix = 1; ix + 1 < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy) {
            if (g.is_solid(ix, iy)) continue;
            auto i = g.idx(ix, iy);
            worst = std::min(
                worst, -(reg.lap(w0.values, i, h2) + nl.f(w0.values[i])));
        }
    return worst;
}

double certificate_confinement(const BarrierResult& cert,
                               const ObstacleSpec& spec,
                               const Nonlinearity& nl,
                               const DynParams& params) {
    const GridDomain& bg = *cert.w0.grid;
    if (std::abs(bg.h - params.h) > 1e-12)
        throw BadGeometry("certificate grid resolution mismatch");
    auto wp = solve_wave_profile(nl);
    auto pair = make_super_sub(nl, wp);
    double nu = 0.5 * (-wp.c + std::sqrt(wp.c * wp.c +
                                         4.0 * (1.0 - nl.alpha)));
    double pad_raw = params.pad_left > 0.0
                         ? params.pad_left
                         : params.front_offset + 26.0 / nu + 2.0;
    // snap the left pad so both grids share cell centers
    double off = -bg.x1_offset;
    double pad_l =
        off + params.h * std::ceil((pad_raw - off) / params.h - 1e-9);
    double pad_r = params.pad_right > 0.0 ? params.pad_right
                                          : params.probe_offset + 10.0;
    auto g = rasterize(spec, params.h, {-pad_l, spec.M() + pad_r, bg.height()},
                       bg.lateral_bc);
    if (g.ny != bg.ny) throw BadGeometry("certificate grid height mismatch");

    ScalarField ceiling(g);
    int shift = int(std::lround((bg.x1_offset - g.x1_offset) / g.h));
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy) {
            if (g.is_solid(ix, iy)) continue;
            int bx = ix - shift;
            double v = bx < 0 ? 1.0
                       : bx >= bg.nx ? cert.w0.at(bg.nx - 1, iy)
                                     : cert.w0.at(bx, iy);
            ceiling.at(ix, iy) = v;
        }

    double t_start = std::min(pair.T, -params.front_offset / wp.c);
    auto u0 = build_entire_initial(wp, pair, g, t_start);
    auto run = run_to_steady(u0, nl, params.step, &ceiling);
    return run.max_over_ceiling;
}

BarrierResult reservoir_barrier(const Reservoir& spec, const Nonlinearity& nl,
                                const GridDomain& grid) {
    double L = spec.entrance_len + spec.cavity_size + spec.wall_margin;
    double H = spec.cavity_size + 2.0 * spec.wall_margin;
    auto bc = barrier_constants(nl);

    std::vector<std::uint8_t> mask(grid.cells(), 0);
    for (int ix = 0; ix < grid.nx; ++ix) {
        double x = grid.xc(ix);
        if (x < 0.0 || x > L) continue;
        for (int iy = 0; iy < grid.ny; ++iy)
            if (!grid.is_solid(ix, iy) && grid.yc(iy) < H)
                mask[grid.idx(ix, iy)] = 1;
    }
    Region reg;
    reg.build(grid, mask);

    // V = 1 on the mouth face (first interior column)
    int face_ix = -1;
    for (int ix = 0; ix < grid.nx && face_ix < 0; ++ix)
        for (int iy = 0; iy < grid.ny; ++iy)
            if (mask[grid.idx(ix, iy)]) {
                face_ix = ix;
                break;
            }
    if (face_ix < 0) throw BadGeometry("reservoir has no interior cells");

    BarrierResult res{ScalarField(grid)};
    std::vector<std::uint8_t> fixed(grid.cells(), 0);
    for (int iy = 0; iy < grid.ny; ++iy)
        if (mask[grid.idx(face_ix, iy)]) {
            fixed[grid.idx(face_ix, iy)] = 1;
            res.w0.at(face_ix, iy) = 1.0;
        }
    // seed the mouth channel at 1 so the descent starts next to the small
    // equilibrium instead of creeping down the channel
    for (int ix = 0; ix < grid.nx; ++ix) {
        if (grid.xc(ix) >= spec.entrance_len) continue;
        for (int iy = 0; iy < grid.ny; ++iy)
            if (mask[grid.idx(ix, iy)]) res.w0.at(ix, iy) = 1.0;
    }

    // unit tiling of the cavity
    std::vector<std::vector<std::size_t>> subs(
        std::size_t(band_count(spec.cavity_size)) *
        band_count(spec.cavity_size));
    double cav_x0 = spec.entrance_len, cav_y0 = spec.wall_margin;
    int nby = band_count(spec.cavity_size);
    double dmin = std::numeric_limits<double>::infinity();
    for (int ix = 0; ix < grid.nx; ++ix) {
        double x = grid.xc(ix);
        if (x <= cav_x0) continue;
        for (int iy = 0; iy < grid.ny; ++iy) {
            auto i = grid.idx(ix, iy);
            if (!mask[i] || grid.yc(iy) <= cav_y0) continue;
            subs[std::size_t(band(x - cav_x0, spec.cavity_size)) * nby +
                 band(grid.yc(iy) - cav_y0, spec.cavity_size)]
                .push_back(i);
        }
    }
    std::erase_if(subs, [](const auto& v) { return v.empty(); });
    for (const auto& dj : subs)
        dmin = std::min(dmin, double(dj.size()) * grid.h * grid.h);

    double mouth_area = spec.mouth_width * spec.entrance_len;
    res.feasible_ep = !subs.empty() && mouth_area < bc.sigma * dmin;

    const double h2 = grid.h * grid.h;
    auto& w = res.w0.values;
    auto energy = [&] {
        double E = 0.5 * reg.grad_sq(w);
        for (int ix = 0; ix < grid.nx; ++ix)
            for (int iy = 0; iy < grid.ny; ++iy) {
                auto i = grid.idx(ix, iy);
                if (!mask[i]) continue;
                E += h2 * (-nl.F(w[i]) +
                           (grid.xc(ix) < spec.entrance_len ? nl.F1() : 0.0));
            }
        return E;
    };
    auto out = descend(reg, fixed, &subs, bc.delta, nl, w, energy);
    res.converged = out.converged;
    res.iters = out.iters;
    res.el_residual = out.el_residual;
    res.J_trace = std::move(out.J_trace);
    res.energy = energy();
    res.constraint_slack = mean_slack(w, subs, bc.delta);
    res.right_tail = 0.0;
    for (int ix = 0; ix < grid.nx; ++ix) {
        if (grid.xc(ix) <= cav_x0) continue;
        for (int iy = 0; iy < grid.ny; ++iy)
            if (mask[grid.idx(ix, iy)])
                res.right_tail = std::max(res.right_tail, res.w0.at(ix, iy));
    }
    res.certified = res.feasible_ep && res.converged &&
                    res.constraint_slack < 0.0 && res.el_residual <= 1e-5;
    return res;
}

double poincare_ratio(const ScalarField& w) {
    const GridDomain& g = *w.grid;
    std::vector<std::uint8_t> mask(g.cells());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = !g.solid[i];
    Region reg;
    reg.build(g, mask);
    const double h2 = g.h * g.h;
    long supp = 0;
    double wsq = 0.0;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i] && w.values[i] > 0.0) {
            ++supp;
            wsq += w.values[i] * w.values[i];
        }
    if (supp == 0) throw EmptySupport("poincare_ratio: field vanishes");
    double supp_area = double(supp) * h2;
    return reg.grad_sq(w.values) / ((1.0 / supp_area) * wsq * h2);
}

double rayleigh_min(const GridDomain& grid,
                    const std::vector<std::size_t>& cells, int trials,
                    unsigned seed) {
    std::vector<std::uint8_t> mask(grid.cells(), 0);
    for (auto i : cells) mask[i] = 1;
    Region reg;
    reg.build(grid, mask);
    const double h2 = grid.h * grid.h;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> w(grid.cells(), 0.0), nw(grid.cells(), 0.0);
    auto project = [&] {
        double m = 0.0;
        for (auto i : cells) m += w[i];
        m /= double(cells.size());
        double nrm = 0.0;
        for (auto i : cells) {
            w[i] -= m;
            nrm += w[i] * w[i];
        }
        nrm = std::sqrt(nrm);
        if (nrm > 0.0)
            for (auto i : cells) w[i] /= nrm;
    };
    for (int t = 0; t < trials; ++t) {
        for (auto i : cells) w[i] = U(rng);
        project();
        // heat-flow smoothing isolates the slowest zero-mean mode
        const double tau = 0.24 * h2;
        for (int it = 0; it < 300; ++it) {
            for (auto i : cells) nw[i] = w[i] + tau * reg.lap(w, i, h2);
            for (auto i : cells) w[i] = nw[i];
            project();
        }
        double num = reg.grad_sq(w);
        double den = 0.0;
        for (auto i : cells) den += w[i] * w[i];
        if (den > 0.0) best = std::min(best, num / (den * h2));
    }
    return best;
}

}  // namespace frontlab
