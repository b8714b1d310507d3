// Discrete blocking barriers by constrained energy minimization, the
// reservoir barrier, supersolution verification, and the relative Poincare
// ratio used in the small-support estimates.
#ifndef FRONTLAB_BARRIER_HPP
#define FRONTLAB_BARRIER_HPP

#include "frontlab/dynamics.hpp"
#include "frontlab/geometry.hpp"
#include "frontlab/nonlin.hpp"

namespace frontlab {

struct NotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptySupport : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// constrained: Neumann right closure plus per-subdomain mean caps;
// cylinder: hard zero at the right edge, no mean caps.
enum class BarrierVariant { constrained, cylinder };

struct BarrierConfig {
    double a = 0.0, b = 1.0;  // wall slab interval
    double R_trunc = 21.0;    // right truncation (b + 20 by default)
    std::vector<std::vector<std::size_t>> subdomains;  // cell indices, D_j
    double delta = 0.0, mu = 0.0, sigma = 0.0;
    double D_min = 0.0;  // smallest subdomain area
    double hole = 0.0;   // measured hole area per periodicity cell
    bool feasible_ep = false;  // hole < sigma * D_min / ramp-energy density
};

// Unit-square tiling of {x1 > b} clipped to the grid; small clipped strips
// are merged into their neighbors. Also records the feasibility gate.
BarrierConfig build_barrier_config(const ObstacleSpec& spec,
                                   const GridDomain& grid,
                                   const Nonlinearity& nl);

struct BarrierResult {
    ScalarField w0;
    double energy = 0.0;
    double el_residual = 0.0;      // max |lap w0 + f(w0)| on free cells
    double constraint_slack = 0.0; // max_j mean(w0 on D_j) - delta
    double right_tail = 0.0;       // max w0 on {x1 >= b + 5}
    bool feasible_ep = false;
    bool converged = false;
    bool certified = false;
    long iters = 0;
    std::vector<double> J_trace;   // energy samples along the descent
};

// 1 left of a, linear ramp on [a, b], 0 right of b (on fluid cells).
ScalarField zeta_field(const BarrierConfig& cfg, const GridDomain& grid);

// Two-zone quadrature of |grad w|^2/2 - F(w) (+ F(1) on {x1 < b}), forward
// differences on fluid faces.
double energy_J(const ScalarField& w, const BarrierConfig& cfg,
                const Nonlinearity& nl);

// Projected-gradient descent from zeta; left edge held at 1 and, for the
// cylinder variant, right edge held at 0. Throws NotConverged past 2e5
// iterations.
BarrierResult minimize_barrier(const BarrierConfig& cfg,
                               const Nonlinearity& nl, const GridDomain& grid,
                               BarrierVariant variant =
                                   BarrierVariant::constrained);

// min over interior fluid cells of -(lap w0 + f(w0)); >= -1e-5 for a
// discrete stationary supersolution.
double verify_supersolution(const ScalarField& w0, const Nonlinearity& nl);

// Reruns the classification with w0 as a ceiling; max over recorded times
// of u - w0 (<= 1e-3 certifies confinement below the barrier).
double certificate_confinement(const BarrierResult& cert,
                               const ObstacleSpec& spec,
                               const Nonlinearity& nl,
                               const DynParams& params);

// Reservoir barrier: V = 1 on the mouth face, Neumann on the walls, mean
// caps over the cavity tiling; grown from a seed at the mouth.
BarrierResult reservoir_barrier(const Reservoir& spec, const Nonlinearity& nl,
                                const GridDomain& grid);

// (int |grad w|^2) / (|supp w|^{-1} int w^2), N = 2.
double poincare_ratio(const ScalarField& w);

// Empirical second-Neumann-eigenvalue proxy on a subdomain: smallest
// Rayleigh quotient reached from `trials` random zero-mean starts.
double rayleigh_min(const GridDomain& grid,
                    const std::vector<std::size_t>& cells, int trials,
                    unsigned seed);

}  // namespace frontlab

#endif
