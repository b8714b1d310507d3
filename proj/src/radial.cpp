#include "frontlab/radial.hpp"

#include <algorithm>
#include <cmath>

namespace frontlab {

namespace {

// One outward shot of Psi'' + (N-1)/r Psi' + f(Psi) = 0, Psi(0)=s, Psi'(0)=0.
// The singular origin is handled by the series Psi ~ s - f(s) r^2/(2N) up to
// r_series. Integration stops at the first zero crossing of Psi, at a
// turnback (Psi' >= 0 while Psi still positive: the shot misses 0), or at
// r = R_cap. Returns the interpolated crossing radius, or +inf if none.
struct ShotResult {
    double r_cross;                 // +inf when no crossing by R_cap
    std::vector<double> samples;    // filled only when `record` is set
};

ShotResult shoot(const Nonlinearity& nl, double s, int N_dim, double R_cap,
                 double dr, bool record = false) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    double r = dr;  // dr <= ~1e-3, within the series' validity
    double psi = s - nl.f(s) * r * r / (2.0 * N_dim);
    double v = -nl.f(s) * r / N_dim;
    ShotResult res{kInf, {}};
    if (record) {
        res.samples.push_back(s);   // r = 0
        res.samples.push_back(psi); // r = dr, so samples align at k*dr
    }
    auto acc = [&](double rr, double p, double w) {
        return -(N_dim - 1) / rr * w - nl.f(p);
    };
    long n = std::lround((R_cap - r) / dr);
    for (long i = 0; i < n; ++i) {
        double k1p = v, k1v = acc(r, psi, v);
        double k2p = v + 0.5 * dr * k1v;
        double k2v = acc(r + 0.5 * dr, psi + 0.5 * dr * k1p, k2p);
        double k3p = v + 0.5 * dr * k2v;
        double k3v = acc(r + 0.5 * dr, psi + 0.5 * dr * k2p, k3p);
        double k4p = v + dr * k3v;
        double k4v = acc(r + dr, psi + dr * k3p, k4p);
        double psi_next =
            psi + dr * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0;
        double v_next = v + dr * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0;
        r += dr;
        if (psi_next <= 0.0) {
            res.r_cross = r - dr * psi_next / (psi_next - psi);
            if (record) res.samples.push_back(psi_next);
            return res;
        }
        psi = psi_next;
        v = v_next;
        if (record) res.samples.push_back(psi);
        if (v >= 0.0) return res;  // turned back above 0: no crossing
    }
    return res;
}

// Shooting-value grid over (alpha, 1). The crossed-by-R set is an interval
// in s; the grid locates it and bisection sharpens its endpoints.
constexpr int kGridN = 1000;

double grid_s(const Nonlinearity& nl, int k) {
    return nl.alpha + (1.0 - nl.alpha) * (k + 0.5) / kGridN;
}

bool crosses(const Nonlinearity& nl, double s, int N_dim, double R,
             double dr) {
    return std::isfinite(shoot(nl, s, N_dim, R, dr).r_cross);
}

double pick_dr(double R) {
    long n = std::max<long>(std::lround(R / 1e-3), 8);
    return R / double(n);
}

}  // namespace

std::optional<RadialBubble> solve_bubble(const Nonlinearity& nl, double R,
                                         int N_dim, BubbleBranch branch) {
    if (!(R > 0.0) || N_dim < 1)
        throw std::invalid_argument("solve_bubble: need R > 0, N_dim >= 1");
    double dr = pick_dr(R);
    int hit = -1;
    for (int k = 0; k < kGridN; ++k) {
        if (crosses(nl, grid_s(nl, k), N_dim, R, dr)) {
            hit = k;
            break;
        }
    }
    if (hit < 0) return std::nullopt;

    // Sharpen the chosen endpoint of the crossed-by-R interval in s.
    double lo, hi;  // predicate false at lo, true at hi
    if (branch == BubbleBranch::lower) {
        lo = hit == 0 ? nl.alpha + 1e-9 : grid_s(nl, hit - 1);
        hi = grid_s(nl, hit);
    } else {
        int last = hit;
        while (last + 1 < kGridN &&
               crosses(nl, grid_s(nl, last + 1), N_dim, R, dr))
            ++last;
        hi = grid_s(nl, last);
        lo = last + 1 < kGridN ? grid_s(nl, last + 1) : 1.0 - 1e-13;
        if (std::isfinite(shoot(nl, lo, N_dim, R, dr).r_cross))
            throw SearchFailed("solve_bubble: upper shooting bracket lost");
    }
    for (int it = 0; it < 100 && std::abs(hi - lo) > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        (crosses(nl, mid, N_dim, R, dr) ? hi : lo) = mid;
    }

    auto shot = shoot(nl, hi, N_dim, R, dr, /*record=*/true);
    RadialBubble b;
    b.R = R;
    b.N_dim = N_dim;
    b.center_value = hi;
    b.dr = dr;
    b.samples = std::move(shot.samples);
    b.samples.resize(size_t(std::lround(R / dr)) + 1, 0.0);
    for (double& v : b.samples) v = std::max(v, 0.0);
    b.samples.back() = 0.0;
    return b;
}

double find_R0(const Nonlinearity& nl, int N_dim, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("find_R0: tol must be > 0");
    auto exists = [&](double R) {
        double dr = pick_dr(R);
        for (int k = 0; k < kGridN; ++k)
            if (crosses(nl, grid_s(nl, k), N_dim, R, dr)) return true;
        return false;
    };
    double hi = 1.0;
    while (!exists(hi)) {
        hi *= 2.0;
        if (hi > 100.0)
            throw BracketFailed("find_R0: no bubble up to R = 100");
    }
    double lo = hi * 0.5;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (exists(mid) ? hi : lo) = mid;
    }
    return hi;
}

ScalarField embed_bubble(const RadialBubble& bubble, Point P,
                         const GridDomain& grid) {
    for (int ix = 0; ix < grid.nx; ++ix)
        for (int iy = 0; iy < grid.ny; ++iy)
            if (grid.is_solid(ix, iy)) {
                double dx = grid.xc(ix) - P.x, dy = grid.yc(iy) - P.y;
                if (std::hypot(dx, dy) < bubble.R)
                    throw TooCloseToObstacle(
                        "embed_bubble: ball overlaps the obstacle");
            }
    ScalarField u(grid);
    for (int ix = 0; ix < grid.nx; ++ix)
        for (int iy = 0; iy < grid.ny; ++iy) {
            double dx = grid.xc(ix) - P.x, dy = grid.yc(iy) - P.y;
            u.at(ix, iy) = bubble.value(std::hypot(dx, dy));
        }
    return u;
}

double radial_energy(const Nonlinearity& nl, const RadialBubble& bubble) {
    // H[Psi] = omega_N int_0^R (Psi'^2/2 - F(Psi)) r^{N-1} dr, with
    // omega_N the surface measure of the unit sphere (2 when N = 1).
    const auto& y = bubble.samples;
    size_t n = y.size();
    double dr = bubble.dr;
    int N = bubble.N_dim;
    double omega = N == 1 ? 2.0
                          : 2.0 * std::pow(M_PI, N / 2.0) /
                                std::tgamma(N / 2.0);
    double sum = 0.0;
    for (size_t k = 0; k < n; ++k) {
        double dpsi = k == 0       ? 0.0
                      : k == n - 1 ? (y[k] - y[k - 1]) / dr
                                   : (y[k + 1] - y[k - 1]) / (2.0 * dr);
        double integrand = dpsi * dpsi / 2.0 - nl.F(y[k]);
        double rfac = N == 1 ? 1.0 : std::pow(k * dr, N - 1);
        double wgt = (k == 0 || k == n - 1) ? 0.5 : 1.0;
        sum += wgt * integrand * rfac;
    }
    return omega * sum * dr;
}

}  // namespace frontlab
