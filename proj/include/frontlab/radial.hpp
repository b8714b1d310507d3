// Radial Dirichlet bubble: Psi'' + (N-1)/r Psi' + f(Psi) = 0 on (0,R),
// Psi'(0)=0, Psi(R)=0, 0 < Psi < 1, found by shooting on Psi(0) in (alpha,1);
// the critical radius R0 is the smallest R admitting such a solution.
#ifndef FRONTLAB_RADIAL_HPP
#define FRONTLAB_RADIAL_HPP

#include <optional>
#include <vector>

#include "frontlab/geometry.hpp"
#include "frontlab/nonlin.hpp"

namespace frontlab {

struct BracketFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RadialBubble {
    double R = 0.0;
    int N_dim = 2;
    double center_value = 0.0;        // Psi(0)
    std::vector<double> samples;      // Psi at r = k*dr
    double dr = 0.0;

    double value(double r) const {
        if (r <= 0.0) return center_value;
        if (r >= R) return 0.0;
        double s = r / dr;
        auto k = static_cast<size_t>(s);
        if (k + 1 >= samples.size()) return samples.back();
        double t = s - double(k);
        return samples[k] * (1.0 - t) + samples[k + 1] * t;
    }
};

// Shooting branch: for R > R0 two shooting values hit Psi(R)=0. `lower` is
// the smallest Psi(0) (the one with F(Psi(0)) -> 0 as R -> inf in 1D);
// `minimizer` is the largest (the energy-negative solution of §4.1).
enum class BubbleBranch { lower, minimizer };

std::optional<RadialBubble> solve_bubble(const Nonlinearity& nl, double R,
                                         int N_dim,
                                         BubbleBranch branch =
                                             BubbleBranch::lower);

// Smallest R with a bubble, bracketed by bisection to width <= tol.
double find_R0(const Nonlinearity& nl, int N_dim, double tol);

// Discrete energy H[Psi] = int (|grad Psi|^2/2 - F(Psi)) over the R-ball.
double radial_energy(const Nonlinearity& nl, const RadialBubble& bubble);

// Compact subsolution Psi^P: Psi(|x-P|) inside the ball, 0 outside. P must
// keep the whole ball clear of the obstacle.
ScalarField embed_bubble(const RadialBubble& bubble, Point P,
                         const GridDomain& grid);

}  // namespace frontlab

#endif
