// Entire-solution initializer, limit-profile extraction and the
// propagation/blocking classifier, plus the sliding comparison experiments
// (bubble, W^lambda, rho^lambda).
#ifndef FRONTLAB_DYNAMICS_HPP
#define FRONTLAB_DYNAMICS_HPP

#include <memory>

#include "frontlab/geometry.hpp"
#include "frontlab/nonlin.hpp"
#include "frontlab/radial.hpp"
#include "frontlab/solver.hpp"

namespace frontlab {

struct FrontTooClose : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PathTooClose : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Verdict { Propagation, Blocking, Undecided };
const char* to_string(Verdict v);

struct ClassificationResult {
    Verdict verdict = Verdict::Undecided;
    double probe_min = 0.0;   // min of v_bar on {x1 >= M + probe_offset}
    double probe_max = 0.0;
    RunHistory front_history;
    double residual = 0.0;       // terminal max|du|/dt
    double min_increment = 0.0;  // most negative pointwise per-step increment
    bool horizon_reached = false;
    double t_end = 0.0;
    long steps = 0;
};

struct SlideReport {
    std::vector<double> lambdas;
    std::vector<double> D_measure;  // |{rho^lambda > v_bar}| per lambda,
                                    // within one periodicity cell
    double max_violation = 0.0;     // sup over lambda
    Verdict verdict = Verdict::Undecided;
};

struct DynParams {
    double h = 0.05;
    double height = 2.0;
    LateralBC lateral_bc = LateralBC::periodic;
    double pad_left = 0.0;   // 0: auto (front_offset + tail clearance)
    double pad_right = 0.0;  // 0: auto (probe_offset + 10)
    double front_offset = 20.0;  // initial front distance left of the wall
    double probe_offset = 10.0;
    double eps_cls = 0.05;
    StepConfig step;

    DynParams() { step.t_max = 400.0; }
};

// Limit profile plus the domain that owns it (ScalarField borrows its grid).
struct LimitRun {
    std::shared_ptr<GridDomain> grid;
    ScalarField v_bar;
    ClassificationResult cls;
};

// sup over s <= t_start of w-(s, x), evaluated per cell over a 400-point
// s-grid; the discrete analogue of the entire-solution initial data.
ScalarField build_entire_initial(const WaveProfile& wp,
                                 const SuperSubPair& pair,
                                 const GridDomain& grid, double t_start);

// Evolve the entire-solution initializer to steady state and classify by the
// probe window {x1 >= M + probe_offset} with threshold eps_cls.
LimitRun limit_profile(const ObstacleSpec& spec, const Nonlinearity& nl,
                       const DynParams& params);

// Most negative per-step pointwise increment of a run; >= -1e-12 is the
// contract for runs started from build_entire_initial.
double monotonicity_check(const RunResult& run);

// Evolve Psi^P and clipped H(x1) to steady state; max-norm spread between
// the two terminal fields and v_bar.
double universality_check(const LimitRun& lim, Point P,
                          const Nonlinearity& nl, const StepConfig& step);
double universality_check(const ObstacleSpec& spec, Point P,
                          const Nonlinearity& nl, const DynParams& params);

// Check Psi^{P(s)} <= v_bar + 1e-3 at samples along the polyline.
bool slide_bubble(const LimitRun& lim, const std::vector<Point>& path,
                  const Nonlinearity& nl);
bool slide_bubble(const ObstacleSpec& spec, const std::vector<Point>& path,
                  const Nonlinearity& nl, const DynParams& params);

// Check W^lambda = max(rho(x1-lambda), rho(M-x1-lambda)) <= v_bar + 1e-3
// for every sampled lambda.
bool slide_W(const LimitRun& lim, const std::vector<double>& lambdas,
             const Nonlinearity& nl, double delta_f = 0.01);
bool slide_W(const ObstacleSpec& spec, const std::vector<double>& lambdas,
             const Nonlinearity& nl, const DynParams& params,
             double delta_f = 0.01);

// Per lambda, the area of {rho(x1-lambda) > v_bar} within one periodicity
// cell of a blade family.
SlideReport slide_rho(const LimitRun& lim, const ParallelBlades& blades,
                      double delta_f, const std::vector<double>& lambdas,
                      const Nonlinearity& nl);
SlideReport slide_rho(const ObstacleSpec& spec, double delta_f,
                      const std::vector<double>& lambdas,
                      const Nonlinearity& nl, const DynParams& params);

}  // namespace frontlab

#endif
