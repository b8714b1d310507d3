#include "frontlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace frontlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap(double y, double period) {
    double r = std::fmod(y, period);
    return r < 0.0 ? r + period : r;
}

struct MBounds {
    double M = 0.0;
    void add(double x) { M = std::max(M, x); }
};

}  // namespace

double ObstacleSpec::M() const {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            MBounds b;
            if constexpr (std::is_same_v<T, Empty>) {
            } else if constexpr (std::is_same_v<T, SlabWithHoles>) {
                b.add(s.b);
            } else if constexpr (std::is_same_v<T, PeriodicSlits>) {
                b.add(s.thickness);
            } else if constexpr (std::is_same_v<T, ParallelBlades>) {
                b.add(s.blade_len);
            } else if constexpr (std::is_same_v<T, Debris>) {
                for (const auto& r : s.solid_rects) b.add(r.x1);
                for (const auto& p : s.disk_centers)
                    b.add(p.x + s.disk_radius);
            } else if constexpr (std::is_same_v<T, ConvexBlock>) {
                for (const auto& sec : s.profile) b.add(sec.x_hi);
            } else if constexpr (std::is_same_v<T, Reservoir>) {
                b.add(s.entrance_len + s.cavity_size + s.wall_margin);
            }
            return b.M;
        },
        shape);
}

bool ObstacleSpec::contains(double x, double y) const {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Empty>) {
                return false;
            } else if constexpr (std::is_same_v<T, SlabWithHoles>) {
                if (x < s.a || x > s.b) return false;
                for (const auto& r : s.hole_rects)
                    if (r.contains(x, y)) return false;
                return true;
            } else if constexpr (std::is_same_v<T, PeriodicSlits>) {
                if (x < 0.0 || x > s.thickness) return false;
                double ym = wrap(y, s.period);
                return std::abs(ym - s.period / 2.0) > s.slit_width / 2.0;
            } else if constexpr (std::is_same_v<T, ParallelBlades>) {
                if (x < 0.0 || x > s.blade_len) return false;
                double cell = s.gap + s.blade_thickness;
                double ym = wrap(y, cell);
                return ym >= s.gap / 2.0 &&
                       ym < s.gap / 2.0 + s.blade_thickness;
            } else if constexpr (std::is_same_v<T, Debris>) {
                for (const auto& r : s.solid_rects)
                    if (r.contains(x, y)) return true;
                for (const auto& p : s.disk_centers) {
                    double dx = x - p.x, dy = y - p.y;
                    if (dx * dx + dy * dy <= s.disk_radius * s.disk_radius)
                        return true;
                }
                return false;
            } else if constexpr (std::is_same_v<T, ConvexBlock>) {
                const auto& pf = s.profile;
                if (pf.size() < 2 || y < pf.front().y || y > pf.back().y)
                    return false;
                for (size_t k = 0; k + 1 < pf.size(); ++k) {
                    if (y > pf[k + 1].y) continue;
                    double t = (y - pf[k].y) / (pf[k + 1].y - pf[k].y);
                    double lo = pf[k].x_lo + t * (pf[k + 1].x_lo - pf[k].x_lo);
                    double hi = pf[k].x_hi + t * (pf[k + 1].x_hi - pf[k].x_hi);
                    return x >= lo && x <= hi;
                }
                return false;
            } else if constexpr (std::is_same_v<T, Reservoir>) {
                double L = s.entrance_len + s.cavity_size + s.wall_margin;
                double H = s.cavity_size + 2.0 * s.wall_margin;
                if (x < 0.0 || x > L || y < 0.0 || y > H) return false;
                Rect cavity{s.entrance_len, s.wall_margin,
                            s.entrance_len + s.cavity_size,
                            s.wall_margin + s.cavity_size};
                double yc = s.wall_margin + s.cavity_size / 2.0;
                Rect mouth{0.0, yc - s.mouth_width / 2.0, s.entrance_len,
                           yc + s.mouth_width / 2.0};
                return !cavity.contains(x, y) && !mouth.contains(x, y);
            }
        },
        shape);
}

GridDomain rasterize(const ObstacleSpec& spec, double h, const Extent& extent,
                     LateralBC bc) {
    if (!(h > 0.0) || !(extent.x_max > extent.x_min) || !(extent.height > 0.0))
        throw BadGeometry("rasterize: bad h or extent");
    GridDomain g;
    g.h = h;
    g.nx = int(std::lround((extent.x_max - extent.x_min) / h));
    g.ny = int(std::lround(extent.height / h));
    g.lateral_bc = bc;
    g.x1_offset = extent.x_min;
    g.M = spec.M();
    g.solid.assign(g.cells(), 0);
    for (int ix = 0; ix < g.nx; ++ix) {
        for (int iy = 0; iy < g.ny; ++iy) {
            if (spec.contains(g.xc(ix), g.yc(iy))) {
                if (g.xc(ix) < 0.0 || g.xc(ix) > g.M + 1e-12)
                    throw ObstacleOutsideSlab(
                        "solid cell outside 0 <= x1 <= M");
                g.solid[g.idx(ix, iy)] = 1;
            }
        }
    }

    // fluid connectivity (flood fill, honoring the lateral BC)
    std::vector<std::uint8_t> seen(g.cells(), 0);
    std::queue<std::pair<int, int>> q;
    std::size_t fluid_total = 0;
    for (std::size_t i = 0; i < g.cells(); ++i)
        if (!g.solid[i]) ++fluid_total;
    if (fluid_total == 0) throw DisconnectedComplement("no fluid cells");
    for (int ix = 0; ix < g.nx && q.empty(); ++ix)
        for (int iy = 0; iy < g.ny && q.empty(); ++iy)
            if (!g.is_solid(ix, iy)) {
                q.push({ix, iy});
                seen[g.idx(ix, iy)] = 1;
            }
    std::size_t visited = 0;
    while (!q.empty()) {
        auto [ix, iy] = q.front();
        q.pop();
        ++visited;
        const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            int jx = ix + dx[d], jy = iy + dy[d];
            if (jx < 0 || jx >= g.nx) continue;
            if (jy < 0 || jy >= g.ny) {
                if (bc != LateralBC::periodic) continue;
                jy = (jy + g.ny) % g.ny;
            }
            if (g.is_solid(jx, jy) || seen[g.idx(jx, jy)]) continue;
            seen[g.idx(jx, jy)] = 1;
            q.push({jx, jy});
        }
    }
    if (visited != fluid_total)
        throw DisconnectedComplement("fluid region is not connected");
    return g;
}

double hole_measure(const ObstacleSpec& spec, const GridDomain& grid) {
    double a, b, period = -1.0;
    if (const auto* s = std::get_if<SlabWithHoles>(&spec.shape)) {
        a = s->a;
        b = s->b;
    } else if (const auto* s = std::get_if<PeriodicSlits>(&spec.shape)) {
        a = 0.0;
        b = s->thickness;
        period = s->period;
    } else {
        throw BadGeometry("hole_measure: spec has no slab interval");
    }
    std::size_t n = 0;
    for (int ix = 0; ix < grid.nx; ++ix) {
        double x = grid.xc(ix);
        if (x <= a || x >= b) continue;
        for (int iy = 0; iy < grid.ny; ++iy) {
            if (period > 0.0 && grid.yc(iy) >= period) break;
            if (!grid.is_solid(ix, iy)) ++n;
        }
    }
    return double(n) * grid.h * grid.h;
}

double blade_flux(const ParallelBlades& spec) {
    return 2.0 * spec.blade_thickness * spec.count;
}

namespace {

// 1D squared distance transform (Felzenszwalb–Huttenlocher lower envelope).
void edt_1d(const std::vector<double>& f, std::vector<double>& d) {
    int n = int(f.size());
    d.assign(n, 0.0);
    std::vector<int> v(n);
    std::vector<double> z(n + 1);
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
        if (f[q] == kInf) continue;
        if (f[v[0]] == kInf && k == 0) {
            v[0] = q;
            continue;
        }
        double s;
        while (true) {
            int p = v[k];
            s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * q - 2.0 * p);
            if (s <= z[k] && k > 0)
                --k;
            else
                break;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    if (f[v[0]] == kInf) {  // no sites at all
        d.assign(n, kInf);
        return;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace

std::vector<double> distance_to_solid(const GridDomain& g) {
    bool per = g.lateral_bc == LateralBC::periodic;
    int reps = per ? 3 : 1;
    int my = g.ny * reps;
    // pass 1: squared distance along y per column
    std::vector<double> col(my), dcol(my);
    std::vector<double> sq(std::size_t(g.nx) * my);
    bool any_solid = false;
    for (int ix = 0; ix < g.nx; ++ix) {
        for (int r = 0; r < reps; ++r)
            for (int iy = 0; iy < g.ny; ++iy) {
                bool s = g.is_solid(ix, iy);
                any_solid |= s;
                col[r * g.ny + iy] = s ? 0.0 : kInf;
            }
        edt_1d(col, dcol);
        for (int jy = 0; jy < my; ++jy) sq[std::size_t(ix) * my + jy] = dcol[jy];
    }
    std::vector<double> out(g.cells(), kInf);
    if (!any_solid) return out;
    // pass 2: along x per row
    std::vector<double> row(g.nx), drow(g.nx);
    int base = per ? g.ny : 0;
    for (int jy = base; jy < base + g.ny; ++jy) {
        for (int ix = 0; ix < g.nx; ++ix)
            row[ix] = sq[std::size_t(ix) * my + jy];
        edt_1d(row, drow);
        for (int ix = 0; ix < g.nx; ++ix)
            out[g.idx(ix, jy - base)] = std::sqrt(drow[ix]) * g.h;
    }
    return out;
}

double tunnel_clearance(const GridDomain& g) {
    auto dist = distance_to_solid(g);
    if (std::isinf(dist[0])) return g.height() / 2.0;

    // feasibility of clearance rho: fluid path {dist >= rho} from x1 < 0 to
    // x1 > M
    auto connects = [&](double rho) {
        std::vector<std::uint8_t> seen(g.cells(), 0);
        std::queue<std::pair<int, int>> q;
        for (int ix = 0; ix < g.nx; ++ix) {
            if (g.xc(ix) >= 0.0) break;
            for (int iy = 0; iy < g.ny; ++iy)
                if (!g.is_solid(ix, iy) && dist[g.idx(ix, iy)] >= rho) {
                    q.push({ix, iy});
                    seen[g.idx(ix, iy)] = 1;
                }
        }
        while (!q.empty()) {
            auto [ix, iy] = q.front();
            q.pop();
            if (g.xc(ix) > g.M) return true;
            const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
            for (int d = 0; d < 4; ++d) {
                int jx = ix + dx[d], jy = iy + dy[d];
                if (jx < 0 || jx >= g.nx) continue;
                if (jy < 0 || jy >= g.ny) {
                    if (g.lateral_bc != LateralBC::periodic) continue;
                    jy = (jy + g.ny) % g.ny;
                }
                auto j = g.idx(jx, jy);
                if (g.solid[j] || seen[j] || dist[j] < rho) continue;
                seen[j] = 1;
                q.push({jx, jy});
            }
        }
        return false;
    };

    std::vector<double> levels(dist);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (!levels.empty() && std::isinf(levels.back())) levels.pop_back();
    // binary search the largest feasible level
    int lo = 0, hi = int(levels.size()) - 1, best = -1;
    if (!connects(levels[0])) return 0.0;
    while (lo <= hi) {
        int mid = (lo + hi) / 2;
        if (connects(levels[mid])) {
            best = mid;
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    return levels[best];
}

bool convex_line_scan(const GridDomain& g) {
    auto run_ok = [](const std::vector<int>& hits) {
        if (hits.empty()) return true;
        return hits.back() - hits.front() + 1 == int(hits.size());
    };
    int ix_left = -1;
    for (int ix = 0; ix < g.nx && ix_left < 0; ++ix)
        for (int iy = 0; iy < g.ny; ++iy)
            if (g.is_solid(ix, iy)) {
                ix_left = ix;
                break;
            }
    if (ix_left < 0) return true;  // no solid: vacuously convex
    for (int iy = 0; iy < g.ny; ++iy) {
        std::vector<int> hits;
        for (int ix = 0; ix < g.nx; ++ix)
            if (g.is_solid(ix, iy)) hits.push_back(ix);
        if (!run_ok(hits)) return false;
        if (!hits.empty() && !g.is_solid(ix_left, iy))
            return false;  // cross-section at the left face misses the shadow
    }
    for (int ix = 0; ix < g.nx; ++ix) {
        std::vector<int> hits;
        for (int iy = 0; iy < g.ny; ++iy)
            if (g.is_solid(ix, iy)) hits.push_back(iy);
        if (!run_ok(hits)) return false;
    }
    return true;
}

}  // namespace frontlab
