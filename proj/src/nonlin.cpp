#include "frontlab/nonlin.hpp"

#include <algorithm>
#include <cmath>

namespace frontlab {

double eval_f(const Nonlinearity& nl, double s) { return nl.f(s); }

double Nonlinearity::delta0() const {
    // f' has two roots in (0,1); f' < 0 on [0, r_lo] and [r_hi, 1].
    // delta0 = min(r_lo, 1 - r_hi), capped just below 1/2.
    double disc = (1.0 + alpha) * (1.0 + alpha) - 3.0 * alpha;
    double r_lo = ((1.0 + alpha) - std::sqrt(disc)) / 3.0;
    double r_hi = ((1.0 + alpha) + std::sqrt(disc)) / 3.0;
    return std::min({r_lo, 1.0 - r_hi, 0.499});
}

double w2_scan_min(const Nonlinearity& nl, double delta, double mu) {
    double best = std::numeric_limits<double>::infinity();
    for (double s = -3.0; s <= 4.0 + 1e-12; s += 1e-4) {
        double v = -nl.F(s) + mu * (s - delta) * (s - delta);
        best = std::min(best, v);
    }
    return best;
}

BarrierConstants barrier_constants(const Nonlinearity& nl) {
    if (nl.F1() <= 0.0)
        throw SearchFailed("barrier_constants: balanced f (F(1) <= 0)");
    BarrierConstants best{0, 0, -1};
    for (int k = 1; k <= 10; ++k) {
        double delta = nl.alpha * k / 10.0;
        for (int j = 0; j <= 6; ++j) {
            double mu = 0.05 * std::pow(2.0, j);
            double sigma = w2_scan_min(nl, delta, mu);
            if (sigma > best.sigma + 1e-15) best = {delta, mu, sigma};
        }
    }
    if (best.sigma <= 0.0)
        throw SearchFailed("barrier_constants: no positive sigma found");
    return best;
}

namespace {

// Phase-plane shooting: with p(phi) = -phi' > 0, the wave ODE becomes
// p' = c - f(phi)/p on (0,1), with linear behavior p ~ m(c) phi near 0 and
// p ~ nu(c) (1-phi) near 1 (m, nu the positive roots of the saddle
// quadratics). We integrate outward from both saddles to phi = 1/2 — both
// directions are well-conditioned — and bisect c on the midpoint mismatch
// p_left(1/2) - p_right(1/2), which is increasing in c.
constexpr double kEdge = 1e-8;
constexpr double kMid = 0.5;

double slope_at_zero(const Nonlinearity& nl, double c) {
    return (c + std::sqrt(c * c - 4.0 * nl.fprime(0.0))) / 2.0;
}
double slope_at_one(const Nonlinearity& nl, double c) {
    return (-c + std::sqrt(c * c - 4.0 * nl.fprime(1.0))) / 2.0;
}

// March p along phi with signed step dphi; returns p at the end or -1 if p
// hit zero. If out != nullptr, appends p after every step.
double march_p(const Nonlinearity& nl, double c, double phi0, double p0,
               double dphi, long n, std::vector<double>* out = nullptr) {
    double p = p0, phi = phi0;
    auto rhs = [&](double ph, double pp) { return c - nl.f(ph) / pp; };
    if (out) out->push_back(p);
    for (long i = 0; i < n; ++i) {
        double k1 = rhs(phi, p);
        double p2 = p + 0.5 * dphi * k1;
        if (p2 <= 0.0) return -1.0;
        double k2 = rhs(phi + 0.5 * dphi, p2);
        double p3 = p + 0.5 * dphi * k2;
        if (p3 <= 0.0) return -1.0;
        double k3 = rhs(phi + 0.5 * dphi, p3);
        double p4 = p + dphi * k3;
        if (p4 <= 0.0) return -1.0;
        double k4 = rhs(phi + dphi, p4);
        p += dphi * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        phi += dphi;
        if (p <= 0.0) return -1.0;
        if (out) out->push_back(p);
    }
    return p;
}

// Midpoint mismatch p_left(1/2) - p_right(1/2); -inf stand-in when the left
// trajectory dies early (c too small).
double mid_mismatch(const Nonlinearity& nl, double c, double dphi,
                    std::vector<double>* left = nullptr,
                    std::vector<double>* right = nullptr) {
    long n = std::lround((kMid - kEdge) / dphi);
    double pl = march_p(nl, c, kEdge, slope_at_zero(nl, c) * kEdge, dphi, n,
                        left);
    if (pl < 0.0) return -1e30;
    double pr = march_p(nl, c, 1.0 - kEdge, slope_at_one(nl, c) * kEdge,
                        -dphi, n, right);
    if (pr < 0.0) return 1e30;  // right leg dying means c is (way) too big
    return pl - pr;
}

}  // namespace

WaveProfile solve_wave_profile(const Nonlinearity& nl, double window,
                               double step) {
    // Bisect on c with the midpoint-mismatch classifier.
    const double dphi = 1e-5;
    double lo = 0.0, hi = 1.0;
    while (mid_mismatch(nl, hi, dphi) < 0.0) {
        hi *= 2.0;
        if (hi > 64.0) throw NoConvergence("wave speed bracket failed");
    }
    for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
        double mid = 0.5 * (lo + hi);
        (mid_mismatch(nl, mid, dphi) < 0.0 ? lo : hi) = mid;
    }
    double c = 0.5 * (lo + hi);
    std::vector<double> pleft, pright;  // phi_k = kEdge + k*dphi / mirrored
    if (mid_mismatch(nl, c, dphi, &pleft, &pright) <= -1e30)
        throw NoConvergence("wave profile reconstruction failed");
    auto p_of = [&](double phi) -> double {
        if (phi <= kEdge) return slope_at_zero(nl, c) * phi;
        if (phi >= 1.0 - kEdge) return slope_at_one(nl, c) * (1.0 - phi);
        const bool leftside = phi < kMid;
        const auto& tab = leftside ? pleft : pright;
        double s = (leftside ? phi - kEdge : (1.0 - kEdge) - phi) / dphi;
        auto k = static_cast<size_t>(s);
        if (k + 1 >= tab.size()) return tab.back();
        double t = s - double(k);
        return tab[k] * (1.0 - t) + tab[k + 1] * t;
    };

    // Reconstruct phi(z) by integrating dphi/dz = -p(phi) from phi(0)=alpha.
    // Both endpoints are attracting for this first-order flow, so forward and
    // backward integration are stable.
    long nside = std::lround(window / step);
    std::vector<double> zs(2 * nside + 1);
    auto rk4 = [&](double phi, double dz) {
        double k1 = -p_of(phi);
        double k2 = -p_of(phi + 0.5 * dz * k1);
        double k3 = -p_of(phi + 0.5 * dz * k2);
        double k4 = -p_of(phi + dz * k3);
        return phi + dz * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    };
    zs[nside] = nl.alpha;
    double v = nl.alpha;
    for (long k = 1; k <= nside; ++k) {  // rightward, phi -> 0
        v = std::clamp(rk4(v, step), 0.0, 1.0);
        zs[nside + k] = v;
    }
    v = nl.alpha;
    for (long k = 1; k <= nside; ++k) {  // leftward, phi -> 1
        v = std::clamp(rk4(v, -step), 0.0, 1.0);
        zs[nside - k] = v;
    }
    if (zs.front() < 1.0 - 1e-8 || zs.back() > 1e-8)
        throw NoConvergence("wave profile tails not resolved in window");

    WaveProfile wp;
    wp.c = c;
    wp.window = window;
    wp.dz = step;
    wp.phi = std::move(zs);
    wp.dphi.resize(wp.phi.size());
    for (size_t k = 0; k < wp.phi.size(); ++k) wp.dphi[k] = -p_of(wp.phi[k]);
    return wp;
}

namespace {

// First-integral half-line solve shared by H and rho: with g = f - delta_f
// and G its primitive, (y')^2 / 2 = G(b) - G(y); integrate
// dy/dz = -sqrt(2 (G(b) - G(y))) backward from y(0)=0 to z=-window.
HalfLineProfile solve_half_line(const Nonlinearity& nl, double delta_f,
                                double b, double window, double step,
                                HalfLineProfile::Kind kind) {
    auto G = [&](double s) { return nl.F(s) - delta_f * s; };
    double Gb = G(b);
    if (Gb <= 0.0)
        throw DeltaTooLarge("half-line profile: int_0^b (f - delta) <= 0");
    auto rhs = [&](double y) {
        double d = Gb - G(y);
        return -std::sqrt(2.0 * std::max(d, 0.0));
    };
    long n = std::lround(window / step);
    std::vector<double> rev(n + 1);  // rev[k] = y(-k*step)
    double y = 0.0;
    rev[0] = 0.0;
    for (long k = 1; k <= n; ++k) {
        double dz = -step;  // marching toward -inf
        double k1 = rhs(y);
        double k2 = rhs(y + 0.5 * dz * k1);
        double k3 = rhs(y + 0.5 * dz * k2);
        double k4 = rhs(y + dz * k3);
        y = std::min(y + dz * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0, b);
        rev[k] = y;
    }
    if (b - rev[n] > 1e-6)
        throw NoConvergence("half-line profile tail not resolved in window");

    HalfLineProfile hp;
    hp.kind = kind;
    hp.delta_f = delta_f;
    hp.b_root = b;
    hp.window = window;
    hp.dz = step;
    hp.samples.assign(rev.rbegin(), rev.rend());
    return hp;
}

}  // namespace

HalfLineProfile solve_H(const Nonlinearity& nl, double window, double step) {
    if (nl.F1() <= 0.0) throw DeltaTooLarge("solve_H requires F(1) > 0");
    return solve_half_line(nl, 0.0, 1.0, window, step,
                           HalfLineProfile::Kind::H);
}

HalfLineProfile solve_rho(const Nonlinearity& nl, double delta_f,
                          double window, double step) {
    if (delta_f < 0.0) throw DeltaTooLarge("delta_f must be >= 0");
    if (delta_f == 0.0) {
        auto hp = solve_H(nl, window, step);
        hp.kind = HalfLineProfile::Kind::rho;
        return hp;
    }
    // b = largest root of f(u) = delta_f: bisect on [argmax f, 1.5].
    double peak = 0.5, fpeak = 0.0;
    for (double u = nl.alpha; u <= 1.0; u += 1e-4)
        if (nl.f(u) > fpeak) fpeak = nl.f(u), peak = u;
    if (delta_f >= fpeak)
        throw DeltaTooLarge("delta_f exceeds max of f on (alpha,1)");
    double lo = peak, hi = 1.5;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (nl.f(mid) > delta_f ? lo : hi) = mid;
    }
    double b = 0.5 * (lo + hi);
    return solve_half_line(nl, delta_f, b, window, step,
                           HalfLineProfile::Kind::rho);
}

namespace {

// Residuals of the sub/supersolution inequalities at (t, x1), x1 < 0:
//   sub:   w-_t - w-_xx - f(w-) <= 0
//   super: w+_t - w+_xx - f(w+) >= 0
// Using phi'' = -c phi' - f(phi), the c-terms cancel and only the xi-drift
// and the nonlinear mixing terms remain.
double sub_residual(const SuperSubPair& sp, const WaveProfile& wp,
                    const Nonlinearity& nl, double t, double x1) {
    double A = x1 - sp.c * t + sp.xi(t);
    double B = -x1 - sp.c * t + sp.xi(t);
    double xp = sp.xi_prime(t);
    return xp * (wp.slope(A) - wp.slope(B)) + nl.f(wp.value(A)) -
           nl.f(wp.value(B)) - nl.f(wp.value(A) - wp.value(B));
}

double super_residual(const SuperSubPair& sp, const WaveProfile& wp,
                      const Nonlinearity& nl, double t, double x1) {
    if (x1 <= 0.0) {
        double A = x1 - sp.c * t - sp.xi(t);
        double B = -x1 - sp.c * t - sp.xi(t);
        double xp = sp.xi_prime(t);
        return -xp * (wp.slope(A) + wp.slope(B)) + nl.f(wp.value(A)) +
               nl.f(wp.value(B)) - nl.f(wp.value(A) + wp.value(B));
    }
    double B0 = -sp.c * t - sp.xi(t);
    return 2.0 * wp.slope(B0) * (-sp.c - sp.xi_prime(t)) -
           nl.f(2.0 * wp.value(B0));
}

}  // namespace

SuperSubPair make_super_sub(const Nonlinearity& nl, const WaveProfile& wp) {
    double c = wp.c;
    double lambda = (c + std::sqrt(c * c - 4.0 * nl.fprime(0.0))) / 2.0;
    // Smallest M1 in {1,2,4,...} whose inequalities hold on a (t,x1) lattice.
    for (double M1 = 1.0; M1 <= 256.0; M1 *= 2.0) {
        SuperSubPair sp;
        sp.M1 = M1;
        sp.lambda_exp = lambda;
        sp.c = c;
        sp.T = std::log(c / (c + M1)) / (lambda * c);
        bool ok = true;
        for (double t = sp.T - 30.0; t <= sp.T + 1e-9 && ok; t += 0.25) {
            for (double x1 = -60.0; x1 <= 2.0 && ok; x1 += 0.2) {
                if (x1 < 0.0 && sub_residual(sp, wp, nl, t, x1) > 1e-10)
                    ok = false;
                if (super_residual(sp, wp, nl, t, x1 == 0.0 ? -1e-6 : x1) <
                    -1e-10)
                    ok = false;
            }
        }
        if (ok) return sp;
    }
    throw NoConvergence("no admissible M1 found up to 256");
}

WMinusPlus eval_super_sub(const SuperSubPair& pair, const WaveProfile& wp,
                          double t, double x1) {
    if (t > pair.T) throw TimeOutOfRange("eval_super_sub: t > T");
    double xi = pair.xi(t);
    WMinusPlus w{};
    if (x1 <= 0.0) {
        w.w_minus = std::max(
            wp.value(x1 - pair.c * t + xi) - wp.value(-x1 - pair.c * t + xi),
            0.0);
        w.w_plus =
            wp.value(x1 - pair.c * t - xi) + wp.value(-x1 - pair.c * t - xi);
    } else {
        w.w_minus = 0.0;
        w.w_plus = 2.0 * wp.value(-pair.c * t - xi);
    }
    return w;
}

}  // namespace frontlab
