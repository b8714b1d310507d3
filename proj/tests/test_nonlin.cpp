#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frontlab/nonlin.hpp"

using namespace frontlab;

TEST_CASE("cubic f: roots, extension, primitive") {
    Nonlinearity nl(0.25);
    CHECK(eval_f(nl, 0.0) == 0.0);
    CHECK(eval_f(nl, 0.25) == 0.0);
    CHECK(eval_f(nl, 1.0) == 0.0);
    CHECK(eval_f(nl, -0.5) == doctest::Approx(0.125));  // f'(0) s = -0.25*(-0.5)
    CHECK(nl.fprime(0.0) < 0.0);
    CHECK(nl.fprime(0.25) > 0.0);
    CHECK(nl.fprime(1.0) < 0.0);
    // C^1 matching of the linear continuation at 0 and 1
    CHECK(eval_f(nl, -1e-9) == doctest::Approx(eval_f(nl, 1e-9)).epsilon(1e-3));
    CHECK(nl.fprime(-1e-12) == doctest::Approx(nl.fprime(1e-12)).epsilon(1e-6));
    CHECK(nl.F(1.0) == doctest::Approx(1.0 / 24.0));  // F(1)=1/12-alpha/6
    CHECK(nl.F1() > 0.0);
    CHECK(nl.delta0() > 0.0);
    CHECK(nl.delta0() < 0.5);
    CHECK(nl.fprime(nl.delta0()) <= 0.0);
    CHECK(nl.fprime(1.0 - nl.delta0()) <= 0.0);
    CHECK_THROWS_AS(Nonlinearity(0.5), std::invalid_argument);  // balanced f rejected
    CHECK_THROWS_AS(Nonlinearity(0.0), std::invalid_argument);
}

TEST_CASE("barrier constants satisfy the quadratic lower bound") {
    Nonlinearity nl(0.25);
    // spec's worked candidate: scan minimum ~1.95e-3 near s=0.17
    double m = w2_scan_min(nl, 0.2, 0.2);
    CHECK(m == doctest::Approx(1.9534e-3).epsilon(1e-3));
    CHECK(m >= 0.0015);

    auto bc = barrier_constants(nl);
    CHECK(bc.sigma > 0.0);
    CHECK(bc.delta > 0.0);
    CHECK(bc.delta <= nl.alpha);
    CHECK(bc.sigma <= -nl.F(bc.delta) + 1e-12);  // W2 at s=delta
    CHECK(w2_scan_min(nl, bc.delta, bc.mu) >= bc.sigma - 1e-12);
    // frozen winner of the (delta, mu) grid search
    CHECK(bc.delta == doctest::Approx(0.25));
    CHECK(bc.mu == doctest::Approx(0.2));
    CHECK(bc.sigma == doctest::Approx(2.2786e-3).epsilon(1e-3));
}

TEST_CASE("traveling wave: speed oracle across the cubic family") {
    for (double a : {0.1, 0.2, 0.25, 0.3, 0.4}) {
        Nonlinearity nl(a);
        auto wp = solve_wave_profile(nl);
        double c_exact = nl.cubic_speed();
        CHECK(std::abs(wp.c - c_exact) / c_exact <= 0.02);
    }
}

TEST_CASE("traveling wave: profile shape, residual, closed form") {
    Nonlinearity nl(0.25);
    auto wp = solve_wave_profile(nl);
    CHECK(wp.value(0.0) == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(wp.phi.front() >= 1.0 - 1e-8);
    CHECK(wp.phi.back() <= 1e-8);
    for (size_t k = 1; k < wp.phi.size(); ++k)
        CHECK(wp.phi[k] < wp.phi[k - 1] + 1e-15);

    // ODE residual phi'' + c phi' + f(phi) by central differences
    double worst = 0.0;
    for (size_t k = 1; k + 1 < wp.phi.size(); ++k) {
        double d2 = (wp.phi[k + 1] - 2.0 * wp.phi[k] + wp.phi[k - 1]) /
                    (wp.dz * wp.dz);
        double d1 = (wp.phi[k + 1] - wp.phi[k - 1]) / (2.0 * wp.dz);
        worst = std::max(worst,
                         std::abs(d2 + wp.c * d1 + nl.f(wp.phi[k])));
    }
    CHECK(worst <= 1e-6);

    // closed form phi(z) = (1+e^{(z+z0)/sqrt2})^-1 with z0 = sqrt2 ln 3
    double z0 = std::sqrt(2.0) * std::log(3.0);
    for (double z : {-10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0}) {
        double exact = 1.0 / (1.0 + std::exp((z + z0) / std::sqrt(2.0)));
        CHECK(wp.value(z) == doctest::Approx(exact).epsilon(5e-3));
    }
    CHECK(wp.slope(0.0) < 0.0);
}

TEST_CASE("half-line profile H") {
    Nonlinearity nl(0.25);
    auto H = solve_H(nl);
    CHECK(H.value(0.0) == 0.0);
    CHECK(H.value(1.0) == 0.0);
    CHECK(H.value(-H.window) == doctest::Approx(1.0).epsilon(1e-5));
    // H'(0) = -sqrt(2 F(1)) by the first integral; 2nd-order one-sided FD
    size_t n = H.samples.size() - 1;
    double slope0 = (3.0 * H.samples[n] - 4.0 * H.samples[n - 1] +
                     H.samples[n - 2]) / (2.0 * H.dz);
    CHECK(slope0 == doctest::Approx(-0.2886751).epsilon(1e-4));
    // first integral (H')^2/2 = F(1) - F(H) on interior samples
    double worst = 0.0;
    for (size_t k = 1; k + 1 < H.samples.size(); ++k) {
        double d1 = (H.samples[k + 1] - H.samples[k - 1]) / (2.0 * H.dz);
        worst = std::max(worst, std::abs(d1 * d1 / 2.0 -
                                         (nl.F1() - nl.F(H.samples[k]))));
        CHECK(d1 < 1e-12);  // monotone decreasing toward z=0
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("half-line profile rho") {
    Nonlinearity nl(0.25);
    auto r0 = solve_rho(nl, 0.0);
    auto H = solve_H(nl);
    for (size_t k = 0; k < H.samples.size(); k += 1000)
        CHECK(r0.samples[k] == doctest::Approx(H.samples[k]).epsilon(1e-12));

    auto r = solve_rho(nl, 0.01);
    CHECK(nl.f(r.b_root) == doctest::Approx(0.01).epsilon(1e-8));
    CHECK(r.b_root > 0.9);
    CHECK(r.b_root < 1.0);
    CHECK(r.value(1.0) == 0.0);
    CHECK(r.value(-r.window) == doctest::Approx(r.b_root).epsilon(1e-4));
    for (size_t k = 1; k + 1 < r.samples.size(); ++k)
        CHECK(r.samples[k + 1] - r.samples[k - 1] < 1e-12);

    CHECK_THROWS_AS(solve_rho(nl, 0.2), DeltaTooLarge);  // above max f
    CHECK_THROWS_AS(solve_rho(nl, -0.1), DeltaTooLarge);
}

TEST_CASE("super/subsolution pair") {
    Nonlinearity nl(0.25);
    auto wp = solve_wave_profile(nl);
    auto sp = make_super_sub(nl, wp);
    // lambda solves l^2 - c l + f'(0) = 0, positive root
    CHECK(sp.lambda_exp == doctest::Approx(0.7071068).epsilon(1e-4));
    double q = sp.lambda_exp * sp.lambda_exp - sp.c * sp.lambda_exp +
               nl.fprime(0.0);
    CHECK(std::abs(q) <= 1e-12);
    CHECK(sp.T <= 0.0);
    CHECK(std::abs(sp.c * sp.T + sp.xi(sp.T)) <= 1e-9);  // cT + xi(T) = 0

    // xi increasing, ct + xi increasing, xi -> 0 backward in time
    double prev = -1.0, prev_arg = -1e9;
    for (double t = sp.T - 40.0; t <= sp.T; t += 0.5) {
        CHECK(sp.xi(t) > prev);
        CHECK(sp.c * t + sp.xi(t) > prev_arg);
        prev = sp.xi(t);
        prev_arg = sp.c * t + sp.xi(t);
        double fd = (sp.xi(t + 1e-6) - sp.xi(t - 1e-6)) / 2e-6;
        CHECK(sp.xi_prime(t) == doctest::Approx(fd).epsilon(1e-5));
    }
    CHECK(std::abs(sp.xi(sp.T - 60.0)) <= 1e-6);

    // ordering 0 <= w- < w+ and the x1 > 0 case split
    for (double t = sp.T - 20.0; t <= sp.T; t += 1.0) {
        for (double x1 = -30.0; x1 <= 5.0; x1 += 0.5) {
            auto w = eval_super_sub(sp, wp, t, x1);
            CHECK(w.w_minus >= 0.0);
            CHECK(w.w_minus < w.w_plus);
            if (x1 > 0.0) {
                CHECK(w.w_minus == 0.0);
                double expect =
                    2.0 * wp.value(-sp.c * t - sp.xi(t));
                CHECK(w.w_plus == doctest::Approx(expect));
            }
        }
    }
    CHECK_THROWS_AS(eval_super_sub(sp, wp, sp.T + 1.0, -1.0), TimeOutOfRange);
}
