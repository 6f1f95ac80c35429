#pragma once

#include <vector>

#include "levyaction/model.hpp"
#include "levyaction/path.hpp"

namespace levyaction {

// All evaluators return extended reals: +inf is the "otherwise" branch of the
// rate functions, distinguished from thrown numerical failures.

// (1/2) int |phi'|^2 for the scaled Brownian motion.
double action_brownian(const Path& phi);

// (1/2) int |(phi' - b(phi)) / sigma(phi)|^2, midpoint rule.
double action_sde_brownian(const Path& phi, const CoefficientSet& coeffs);

// int Psi*(phi'), one Legendre transform per distinct slope (memoized).
double action_levy(const Path& phi, const LevyTriplet& triplet);

// int L(phi, phi') with L from the Hamiltonian of the full model.
double action_general(const Path& phi, const ModelSpec& model);

// Joint form: per cell minimize u^2/2 + Psi*(v) subject to
// zeta = b(x) + sigma(x) u + eta(x) v.
struct JointActionResult {
    double value = 0.0;                 // +inf when any cell is infeasible
    std::vector<int> infeasible_cells;  // cells where the constraint has no solution
};
JointActionResult action_joint(const Path& phi, const ModelSpec& model);

// int phi dalpha - int_0^1 Psi(alpha(1) - alpha(s)) ds; exact for step alpha
// and piecewise-linear phi. A lower bound for action_levy by convex duality.
struct DualBound {
    double value = 0.0;
    bool psi_infinite = false;  // some plateau left the domain of Psi: bound is vacuous
};
DualBound dual_lower_bound(const Path& phi, const LevyTriplet& triplet,
                           const StepFunction& alpha);

// Entropy form of the pure-jump gradient-system action (discrete nu only):
// evaluates sum (g ln g - g + 1) nu({z}) per cell plus the residual of the
// controlled equation phi' = -grad U(phi) + int z (g - 1) nu(dz).
struct EntropyFormResult {
    double entropy = 0.0;
    double max_constraint_residual = 0.0;
    std::vector<double> cell_residuals;
};
EntropyFormResult action_entropy_form(const Path& phi,
                                      const std::function<double(double)>& grad_U,
                                      const LevyMeasure& nu,
                                      const std::vector<std::vector<double>>& g);

// Companion infimum over g: per cell the optimal tilt g(z) = e^{theta z} with
// theta solved from the flux constraint by monotone root-finding.
struct EntropyOptimalResult {
    double value = 0.0;
    std::vector<double> theta;  // per-cell tilt exponent
};
EntropyOptimalResult action_entropy_optimal(const Path& phi,
                                            const std::function<double(double)>& grad_U,
                                            const LevyMeasure& nu);

// Solves sum_z z e^{theta z} w_z = flux for theta; throws TiltError when flux
// is outside the attainable range.
double solve_exponential_tilt(const LevyMeasure& nu, double flux);

}  // namespace levyaction
