#include "frontlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#if defined(__AVX512F__)
#include <immintrin.h>
#endif

namespace frontlab {

namespace {

constexpr std::uint8_t kSolidCell = 255;

// Precomputed stencil metadata: per-cell count of mirrored faces (solid
// neighbors plus out-of-domain faces under reflecting closure), and a
// clean-column classification. A column is clean when neither it nor its
// x-neighbors contain solid cells, so its interior rows run the branchless
// fast path.
struct Stencil {
    const GridDomain* g;
    double gamma, dt, alpha, c0;
    std::vector<std::uint8_t> cs;
    std::vector<std::uint8_t> clean;
    std::vector<double> zeros;
};

Stencil make_stencil(const GridDomain& g, double dt, const Nonlinearity& nl) {
    Stencil st;
    st.g = &g;
    st.gamma = dt / (g.h * g.h);
    st.dt = dt;
    st.alpha = nl.alpha;
    st.c0 = 1.0 - 4.0 * st.gamma;
    st.cs.assign(g.cells(), 0);
    st.zeros.assign(g.ny, 0.0);
    const bool per = g.lateral_bc == LateralBC::periodic;
    for (int ix = 0; ix < g.nx; ++ix) {
        for (int iy = 0; iy < g.ny; ++iy) {
            auto i = g.idx(ix, iy);
            if (g.solid[i]) {
                st.cs[i] = kSolidCell;
                continue;
            }
            int c = 0;
            auto nb = [&](int jx, int jy) {
                if (jx < 0 || jx >= g.nx) {
                    ++c;  // outer x faces always reflect
                    return;
                }
                if (jy < 0 || jy >= g.ny) {
                    if (!per) {
                        ++c;
                        return;
                    }
                    jy = (jy + g.ny) % g.ny;
                }
                if (g.is_solid(jx, jy)) ++c;
            };
            nb(ix - 1, iy);
            nb(ix + 1, iy);
            nb(ix, iy - 1);
            nb(ix, iy + 1);
            st.cs[i] = std::uint8_t(c);
        }
    }
    std::vector<std::uint8_t> has_solid(g.nx, 0);
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy)
            if (g.is_solid(ix, iy)) {
                has_solid[ix] = 1;
                break;
            }
    st.clean.assign(g.nx, 0);
    for (int ix = 1; ix + 1 < g.nx; ++ix)
        st.clean[ix] =
            !has_solid[ix - 1] && !has_solid[ix] && !has_solid[ix + 1];
    return st;
}

// One Euler step in -> out; returns reductions over all cells.
struct StepStats {
    double min_diff;
    double max_abs_diff;
};

StepStats kernel(const Stencil& st, const std::vector<double>& in,
                 std::vector<double>& out) {
    const GridDomain& g = *st.g;
    const int ny = g.ny, nx = g.nx;
    const double gam = st.gamma, dt = st.dt, a = st.alpha, c0 = st.c0;
    const bool per = g.lateral_bc == LateralBC::periodic;
    double mind = 0.0, maxa = 0.0;
    for (int ix = 0; ix < nx; ++ix) {
        const double* C = in.data() + std::size_t(ix) * ny;
        const double* L =
            ix > 0 ? in.data() + std::size_t(ix - 1) * ny : st.zeros.data();
        const double* R = ix + 1 < nx ? in.data() + std::size_t(ix + 1) * ny
                                      : st.zeros.data();
        double* O = out.data() + std::size_t(ix) * ny;
        const std::uint8_t* cs = st.cs.data() + std::size_t(ix) * ny;

        if (st.clean[ix]) {
            int iy = 1;
#if defined(__AVX512F__)
            const __m512d vc0 = _mm512_set1_pd(c0);
            const __m512d vg = _mm512_set1_pd(gam);
            const __m512d vdt = _mm512_set1_pd(dt);
            const __m512d va = _mm512_set1_pd(a);
            const __m512d v1 = _mm512_set1_pd(1.0);
            __m512d vmin = _mm512_setzero_pd();
            __m512d vmax = _mm512_setzero_pd();
            for (; iy + 8 < ny; iy += 8) {
                __m512d u = _mm512_loadu_pd(C + iy);
                __m512d nb = _mm512_add_pd(
                    _mm512_add_pd(_mm512_loadu_pd(L + iy),
                                  _mm512_loadu_pd(R + iy)),
                    _mm512_add_pd(_mm512_loadu_pd(C + iy - 1),
                                  _mm512_loadu_pd(C + iy + 1)));
                __m512d fu = _mm512_mul_pd(
                    _mm512_mul_pd(u, _mm512_sub_pd(v1, u)),
                    _mm512_sub_pd(u, va));
                __m512d un = _mm512_fmadd_pd(
                    u, vc0,
                    _mm512_fmadd_pd(vg, nb, _mm512_mul_pd(vdt, fu)));
                _mm512_storeu_pd(O + iy, un);
                __m512d d = _mm512_sub_pd(un, u);
                vmin = _mm512_min_pd(vmin, d);
                vmax = _mm512_max_pd(vmax, _mm512_abs_pd(d));
            }
            mind = std::min(mind, _mm512_reduce_min_pd(vmin));
            maxa = std::max(maxa, _mm512_reduce_max_pd(vmax));
#endif
            double m0 = 0.0, a0 = 0.0;
            for (; iy + 1 < ny; ++iy) {
                double u = C[iy];
                double nb = L[iy] + R[iy] + C[iy - 1] + C[iy + 1];
                double un = u * c0 + gam * nb + dt * (u * (1.0 - u) * (u - a));
                O[iy] = un;
                double d = un - u;
                m0 = std::min(m0, d);
                a0 = std::max(a0, std::abs(d));
            }
            mind = std::min(mind, m0);
            maxa = std::max(maxa, a0);
        } else {
            for (int iy = 1; iy + 1 < ny; ++iy) {
                if (cs[iy] == kSolidCell) {
                    O[iy] = 0.0;
                    continue;
                }
                double u = C[iy];
                double nb = L[iy] + R[iy] + C[iy - 1] + C[iy + 1];
                double un = u * (c0 + gam * cs[iy]) + gam * nb +
                            dt * (u * (1.0 - u) * (u - a));
                O[iy] = un;
                double d = un - u;
                mind = std::min(mind, d);
                maxa = std::max(maxa, std::abs(d));
            }
        }
        // edge rows: wrap under periodic closure, mirror otherwise (the
        // mirrored face is already counted in cs)
        for (int iy : {0, ny - 1}) {
            if (ny == 1 && iy == ny - 1) break;
            if (cs[iy] == kSolidCell) {
                O[iy] = 0.0;
                continue;
            }
            double u = C[iy];
            double below = iy > 0 ? C[iy - 1] : (per ? C[ny - 1] : 0.0);
            double above = iy + 1 < ny ? C[iy + 1] : (per ? C[0] : 0.0);
            double nb = L[iy] + R[iy] + below + above;
            double un = u * (c0 + gam * cs[iy]) + gam * nb +
                        dt * (u * (1.0 - u) * (u - a));
            O[iy] = un;
            double d = un - u;
            mind = std::min(mind, d);
            maxa = std::max(maxa, std::abs(d));
        }
    }
    return {mind, maxa};
}

double checked_dt(const GridDomain& g, const StepConfig& cfg) {
    double dt = cfg.resolve_dt(g.h);
    if (cfg.cfl_factor > 0.8 + 1e-12 ||
        dt * 4.0 / (g.h * g.h) > 0.8 + 1e-12)
        throw CFLViolation("dt exceeds 0.8 h^2 / 4");
    return dt;
}

}  // namespace

ScalarField step(const ScalarField& u, const Nonlinearity& nl,
                 const StepConfig& cfg) {
    const GridDomain& g = *u.grid;
    double dt = checked_dt(g, cfg);
    auto st = make_stencil(g, dt, nl);
    ScalarField out(g);
    kernel(st, u.values, out.values);
    return out;
}

double front_position(const ScalarField& u) {
    const GridDomain& g = *u.grid;
    int iy = g.ny / 2;
    for (int ix = g.nx - 1; ix >= 0; --ix) {
        double v1 = u.at(ix, iy);
        if (ix == g.nx - 1 && v1 >= 0.5) return g.xc(ix);
        if (ix + 1 < g.nx) {
            double v2 = u.at(ix + 1, iy);
            if ((v1 - 0.5) * (v2 - 0.5) <= 0.0 && v1 != v2 && v1 >= 0.5)
                return g.xc(ix) + g.h * (0.5 - v1) / (v2 - v1);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

RunResult run_to_steady(const ScalarField& u0, const Nonlinearity& nl,
                        const StepConfig& cfg, const ScalarField* ceiling) {
    const GridDomain& g = *u0.grid;
    double dt = checked_dt(g, cfg);
    auto st = make_stencil(g, dt, nl);

    RunResult res{ScalarField(g), {}, false, 0.0, 0, 0.0, 0.0,
                  -std::numeric_limits<double>::infinity()};
    std::vector<double> a = u0.values, b(a.size());
    double t = 0.0;
    double next_record = 0.0;
    auto record = [&](const std::vector<double>& v) {
        res.history.t.push_back(t);
        ScalarField tmp(g);
        tmp.values = v;  // cheap relative to recording cadence
        res.history.front_x.push_back(front_position(tmp));
        if (ceiling) {
            double worst = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < v.size(); ++i)
                if (st.cs[i] != kSolidCell)
                    worst = std::max(worst, v[i] - ceiling->values[i]);
            res.max_over_ceiling = std::max(res.max_over_ceiling, worst);
        }
        next_record = t + cfg.history_dt;
    };
    record(a);

    while (t < cfg.t_max) {
        auto s = kernel(st, a, b);
        std::swap(a, b);
        t += dt;
        ++res.steps;
        res.min_increment = std::min(res.min_increment, s.min_diff);
        res.residual = s.max_abs_diff / dt;
        if (t >= next_record) record(a);
        if (s.max_abs_diff < cfg.steady_tol * dt) break;
    }
    if (t >= cfg.t_max) res.horizon_reached = true;
    if (res.history.t.empty() || res.history.t.back() != t) record(a);
    res.t_end = t;
    res.u.values = std::move(a);
    return res;
}

bool compare_evolutions(const ScalarField& u0, const ScalarField& v0,
                        const Nonlinearity& nl, const StepConfig& cfg) {
    const GridDomain& g = *u0.grid;
    double dt = checked_dt(g, cfg);
    auto st = make_stencil(g, dt, nl);
    std::vector<double> ua = u0.values, ub(ua.size());
    std::vector<double> va = v0.values, vb(va.size());
    for (std::size_t i = 0; i < ua.size(); ++i)
        if (ua[i] > va[i] + 1e-13) return false;
    double t = 0.0;
    while (t < cfg.t_max) {
        kernel(st, ua, ub);
        kernel(st, va, vb);
        std::swap(ua, ub);
        std::swap(va, vb);
        t += dt;
        for (std::size_t i = 0; i < ua.size(); ++i)
            if (ua[i] > va[i] + 1e-13) return false;
    }
    return true;
}

}  // namespace frontlab
