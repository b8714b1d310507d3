#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frontlab/radial.hpp"

using namespace frontlab;

namespace {

// Independent 1D oracle: on an interval of half-length L the first integral
// gives L(s) = int_0^s dpsi / sqrt(2 (F(s) - F(psi))); the minimal half-length
// is min_s L(s). Substituting psi = s - u^2 removes the endpoint singularity.
double half_length_1d(const Nonlinearity& nl, double s) {
    auto g = [&](double u) {
        double d = nl.F(s) - nl.F(s - u * u);
        if (d <= 0.0) return std::sqrt(2.0 / nl.f(s));  // u -> 0 limit
        return 2.0 * u / std::sqrt(2.0 * d);
    };
    // Simpson's rule on u in [0, sqrt(s)]; u=0 has the finite limit
    // sqrt(2/f(s)).
    double a = 0.0, b = std::sqrt(s);
    int n = 4000;
    double h = (b - a) / n;
    double sum = std::sqrt(2.0 / nl.f(s)) + g(b);
    for (int i = 1; i < n; ++i) sum += g(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

double min_half_length_1d(const Nonlinearity& nl) {
    double best = 1e300;
    for (double s = 0.40; s <= 0.995; s += 0.0025)
        best = std::min(best, half_length_1d(nl, s));
    return best;
}

}  // namespace

TEST_CASE("no bubble below the critical radius") {
    Nonlinearity nl(0.25);
    CHECK(!solve_bubble(nl, 0.5, 2).has_value());
}

TEST_CASE("critical radius bracket and frozen regression values") {
    Nonlinearity nl(0.25);
    double R0 = find_R0(nl, 2, 1e-3);
    CHECK(R0 == doctest::Approx(7.395).epsilon(2e-3));  // frozen oracle
    CHECK(solve_bubble(nl, R0 * 1.05, 2).has_value());
    CHECK(!solve_bubble(nl, R0 * 0.95, 2).has_value());

    Nonlinearity nl01(0.1);
    CHECK(find_R0(nl01, 2, 1e-3) == doctest::Approx(5.704).epsilon(2e-3));
}

TEST_CASE("bubble at 2 R0: shape and ODE residual") {
    Nonlinearity nl(0.25);
    double R0 = find_R0(nl, 2, 1e-3);
    auto b = solve_bubble(nl, 2.0 * R0, 2);
    REQUIRE(b.has_value());
    CHECK(b->center_value > nl.alpha);
    CHECK(b->center_value < 1.0);
    CHECK(b->samples.back() == 0.0);
    // Psi'(0) = 0: first step moves only O(dr^2)
    CHECK(std::abs(b->samples[1] - b->samples[0]) <= 1e-5);
    for (size_t k = 1; k < b->samples.size(); ++k)
        CHECK(b->samples[k] < b->samples[k - 1] + 1e-15);

    double worst = 0.0;
    for (size_t k = 1; k + 3 < b->samples.size(); ++k) {
        double d2 = (b->samples[k + 1] - 2.0 * b->samples[k] +
                     b->samples[k - 1]) / (b->dr * b->dr);
        double d1 = (b->samples[k + 1] - b->samples[k - 1]) / (2.0 * b->dr);
        double r = k * b->dr;
        worst = std::max(worst, std::abs(d2 + d1 / r + nl.f(b->samples[k])));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("monotone existence above R0") {
    Nonlinearity nl(0.25);
    double R0 = find_R0(nl, 2, 1e-3);
    for (double fac : {1.05, 1.3, 1.8, 2.5, 4.0})
        CHECK(solve_bubble(nl, fac * R0, 2).has_value());
}

TEST_CASE("1D: first-integral oracles") {
    Nonlinearity nl(0.25);
    // large interval: Psi(0) approaches the sign-change root of F
    auto b = solve_bubble(nl, 30.0, 1);
    REQUIRE(b.has_value());
    double theta = 0.392375;  // root of F in (alpha, 1), from quadrature
    CHECK(std::abs(b->center_value - theta) / theta <= 0.02);

    // minimal half-length against the quadrature oracle
    double R0 = find_R0(nl, 1, 1e-3);
    double oracle = min_half_length_1d(nl);
    CHECK(std::abs(R0 - oracle) / oracle <= 0.02);
}

TEST_CASE("energy of the minimizing branch is negative at 2 R0") {
    Nonlinearity nl(0.25);
    double R0 = find_R0(nl, 2, 1e-3);
    auto lower = solve_bubble(nl, 2.0 * R0, 2, BubbleBranch::lower);
    auto minim = solve_bubble(nl, 2.0 * R0, 2, BubbleBranch::minimizer);
    REQUIRE(lower.has_value());
    REQUIRE(minim.has_value());
    CHECK(minim->center_value > lower->center_value);
    CHECK(radial_energy(nl, *minim) < 0.0);
    CHECK(radial_energy(nl, *minim) < radial_energy(nl, *lower));
    // frozen oracle values
    CHECK(radial_energy(nl, *lower) == doctest::Approx(0.61).epsilon(0.05));
    CHECK(radial_energy(nl, *minim) == doctest::Approx(-9.87).epsilon(0.05));
}
