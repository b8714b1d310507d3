// Monotone explicit finite-difference stepper for u_t = Laplacian(u) + f(u)
// with zero-flux (mirror) closure on obstacle faces and outer boundaries,
// and either periodic or reflecting lateral boundaries.
#ifndef FRONTLAB_SOLVER_HPP
#define FRONTLAB_SOLVER_HPP

#include "frontlab/geometry.hpp"
#include "frontlab/nonlin.hpp"

namespace frontlab {

struct CFLViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepConfig {
    double dt = 0.0;          // 0: derived from the grid at cfl_factor
    double cfl_factor = 0.8;  // dt * 4 / h^2, must stay <= 0.8
    double steady_tol = 1e-7; // max |du|/dt threshold for steady detection
    double t_max = 1e9;
    double history_dt = 1.0;  // front-position sampling interval

    double resolve_dt(double h) const {
        return dt > 0.0 ? dt : cfl_factor * h * h / 4.0;
    }
};

struct RunHistory {
    std::vector<double> t;
    std::vector<double> front_x;  // NaN when no 0.5-crossing exists
};

struct RunResult {
    ScalarField u;
    RunHistory history;
    bool horizon_reached = false;
    double t_end = 0.0;
    long steps = 0;
    double min_increment = 0.0;   // most negative pointwise per-step increment
    double residual = 0.0;        // last max |du|/dt
    double max_over_ceiling = 0.0;  // max (u - ceiling) at recorded times
};

// One forward-Euler step (allocating); the workhorse loop is shared with
// run_to_steady.
ScalarField step(const ScalarField& u, const Nonlinearity& nl,
                 const StepConfig& cfg);

// Iterate until max|du| < steady_tol * dt or t_max; optionally tracks the
// excess over a ceiling field at recorded times.
RunResult run_to_steady(const ScalarField& u0, const Nonlinearity& nl,
                        const StepConfig& cfg,
                        const ScalarField* ceiling = nullptr);

// Evolves the ordered pair to cfg.t_max and reports whether u <= v was
// preserved (up to accumulated roundoff) at every step.
bool compare_evolutions(const ScalarField& u0, const ScalarField& v0,
                        const Nonlinearity& nl, const StepConfig& cfg);

// Rightmost linearly-interpolated 0.5-crossing on the horizontal centerline;
// NaN if the centerline never crosses 0.5.
double front_position(const ScalarField& u);

}  // namespace frontlab

#endif
