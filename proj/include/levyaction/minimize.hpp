#pragma once

#include <optional>
#include <vector>

#include "levyaction/action.hpp"

namespace levyaction {

enum class Functional { brownian, sde_brownian, levy, general, joint };

// Fixed-endpoint minimum-action problem on the uniform grid. x0 must match
// the functional's required start (0 for all the rate functions here).
struct BoundaryProblem {
    Functional functional = Functional::general;
    ModelSpec model;
    double x0 = 0.0;
    double x1 = 0.0;
    int n = 200;
};

struct MinimizeOptions {
    double gtol_rel = 1e-8;          // gtol = gtol_rel * (1 + |action|)
    int max_iterations = 0;          // 0 means 10*n
    int lbfgs_memory = 8;
    bool free_right_endpoint = false;
    std::optional<std::vector<double>> initial;       // size n+1 when given
    std::optional<std::vector<bool>> extra_pins;      // per-node pins beyond the endpoints
};

struct MinimizationResult {
    Path path;
    double action = 0.0;
    double grad_norm = 0.0;
    double el_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

MinimizationResult minimize_action(const BoundaryProblem& problem,
                                   const MinimizeOptions& opts = {});

// Max-norm discrete residual of d/dt[dL/dzeta] - dL/dx over interior nodes.
double euler_lagrange_residual(const Path& path, const ModelSpec& model,
                               Functional functional = Functional::general);

// Evaluates the chosen functional on a path (dispatch helper shared with the CLI).
double evaluate_functional(Functional f, const Path& phi, const ModelSpec& model);

// Integrates the zero-cost flow phi' = H_xi(phi, 0) from x0 (RK4).
Path drift_path(const ModelSpec& model, double x0, int n);

}  // namespace levyaction
