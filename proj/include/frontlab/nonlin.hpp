// Bistable nonlinearity f, its primitive F, derived constants, and the 1D
// special profiles: the traveling wave (phi, c), the half-line profiles H and
// rho, and the sub/supersolution pair (w-, w+) used to seed monotone runs.
#ifndef FRONTLAB_NONLIN_HPP
#define FRONTLAB_NONLIN_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace frontlab {

struct SearchFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DeltaTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TimeOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cubic bistable f(u) = u(1-u)(u-alpha) on [0,1], continued linearly outside:
// f(s) = f'(0) s for s < 0 and f(s) = f'(1)(s-1) for s > 1.
struct Nonlinearity {
    double alpha = 0.25;

    explicit Nonlinearity(double a = 0.25) : alpha(a) {
        if (!(a > 0.0 && a < 0.5))
            throw std::invalid_argument("alpha must lie in (0, 1/2)");
    }

    double f(double s) const {
        if (s < 0.0) return -alpha * s;             // f'(0) = -alpha
        if (s > 1.0) return -(1.0 - alpha) * (s - 1.0);  // f'(1) = -(1-alpha)
        return s * (1.0 - s) * (s - alpha);
    }
    double fprime(double s) const {
        if (s < 0.0) return -alpha;
        if (s > 1.0) return -(1.0 - alpha);
        return -3.0 * s * s + 2.0 * (1.0 + alpha) * s - alpha;
    }
    // Primitive F(s) = int_0^s f, matching the linear continuation.
    double F(double s) const {
        if (s < 0.0) return -alpha * s * s / 2.0;
        if (s > 1.0) return F1() - (1.0 - alpha) * (s - 1.0) * (s - 1.0) / 2.0;
        return -s * s * s * s / 4.0 + (1.0 + alpha) * s * s * s / 3.0 -
               alpha * s * s / 2.0;
    }
    double F1() const { return (1.0 - 2.0 * alpha) / 12.0; }
    // Largest delta0 < 1/2 with f' < 0 on [0,delta0] and [1-delta0,1].
    double delta0() const;
    // Exact speed of the cubic traveling wave (oracle for tests/CLI).
    double cubic_speed() const { return (1.0 - 2.0 * alpha) / std::sqrt(2.0); }
};

double eval_f(const Nonlinearity& nl, double s);

// Constants (delta, mu, sigma) of the barrier inequality (W2):
//   -F(s) + mu (s - delta)^2 >= sigma  for all s,  delta in (0, alpha].
struct BarrierConstants {
    double delta, mu, sigma;
};
BarrierConstants barrier_constants(const Nonlinearity& nl);
// Scan minimum of -F(s) + mu (s-delta)^2 over s in [-3,4], step 1e-4.
double w2_scan_min(const Nonlinearity& nl, double delta, double mu);

// Traveling wave phi'' + c phi' + f(phi) = 0, phi(-inf)=1, phi(+inf)=0,
// normalized so phi(0)=alpha. Sampled on z in [-window, window].
struct WaveProfile {
    double c = 0.0;
    double window = 40.0;
    double dz = 1e-3;
    std::vector<double> phi;   // samples at z = -window + k*dz
    std::vector<double> dphi;  // phi'

    double z_min() const { return -window; }
    double value(double z) const { return interp(phi, z); }
    double slope(double z) const { return interp(dphi, z); }

  private:
    double interp(const std::vector<double>& tab, double z) const {
        if (z <= -window) return tab.front();
        if (z >= window) return tab.back();
        double s = (z + window) / dz;
        auto k = static_cast<size_t>(s);
        if (k + 1 >= tab.size()) return tab.back();
        double t = s - double(k);
        return tab[k] * (1.0 - t) + tab[k + 1] * t;
    }
};

WaveProfile solve_wave_profile(const Nonlinearity& nl, double window = 40.0,
                               double step = 1e-3);

// Half-line profiles on z <= 0, extended by 0 on z > 0:
//   H:   H'' + f(H) = 0,          H(0)=0, H(-inf)=1
//   rho: rho'' + f(rho) = delta_f, rho(0)=0, rho(-inf)=b (stable zero of
//        f - delta_f in (alpha,1))
struct HalfLineProfile {
    enum class Kind { H, rho } kind = Kind::H;
    double delta_f = 0.0;
    double b_root = 1.0;
    double window = 40.0;
    double dz = 1e-3;
    std::vector<double> samples;  // values at z = -window + k*dz, ..., 0

    double value(double z) const {
        if (z >= 0.0) return 0.0;
        if (z <= -window) return b_root;
        double s = (z + window) / dz;
        auto k = static_cast<size_t>(s);
        if (k + 1 >= samples.size()) return samples.back();
        double t = s - double(k);
        return samples[k] * (1.0 - t) + samples[k + 1] * t;
    }
};

HalfLineProfile solve_H(const Nonlinearity& nl, double window = 40.0,
                        double step = 1e-3);
HalfLineProfile solve_rho(const Nonlinearity& nl, double delta_f,
                          double window = 40.0, double step = 1e-3);

// Sub/supersolution pair of §5: w-(t,x) and w+(t,x) built from phi and the
// drift xi(t) = (1/lambda) log(c / (c - M1 e^{lambda c t})), t <= T.
struct SuperSubPair {
    double M1 = 1.0;
    double lambda_exp = 0.0;  // positive root of l^2 - c l + f'(0) = 0
    double T = 0.0;           // horizon, <= 0
    double c = 0.0;

    double xi(double t) const {
        return std::log(c / (c - M1 * std::exp(lambda_exp * c * t))) /
               lambda_exp;
    }
    double xi_prime(double t) const {
        return M1 * std::exp(lambda_exp * (c * t + xi(t)));
    }
};

SuperSubPair make_super_sub(const Nonlinearity& nl, const WaveProfile& wp);

struct WMinusPlus {
    double w_minus, w_plus;
};
WMinusPlus eval_super_sub(const SuperSubPair& pair, const WaveProfile& wp,
                          double t, double x1);

}  // namespace frontlab

#endif
