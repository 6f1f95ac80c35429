#pragma once

#include <functional>

#include "levyaction/legendre.hpp"
#include "levyaction/levy.hpp"

namespace levyaction {

// State-dependent coefficients of the SDE together with the bounds their
// contracts assume. The bounds are declared (or estimated by sampling in the
// model loader), not enforced pointwise.
struct CoefficientSet {
    std::function<double(double)> b;
    std::function<double(double)> sigma;
    std::function<double(double)> eta;
    double lipschitz_bound = kInf;
    double b_sup = kInf;
    double sigma_sup = kInf;
    double eta_sup = kInf;
    double sigma_min = 1e-10;  // required positive when the Brownian-action branch is used

    static CoefficientSet constant(double b, double sigma, double eta);
};

// Everything needed to evaluate both the SDE and its action functional.
struct ModelSpec {
    CoefficientSet coeffs;
    LevyTriplet triplet;
    double epsilon = 1.0;

    void validate() const;
};

// H(x, xi) = b(x) xi + sigma(x)^2 xi^2 / 2 + Psi(eta(x) xi), the symbol of the
// generator evaluated at -i xi. The triplet's own drift and Gaussian part
// enter through Psi.
double hamiltonian(const ModelSpec& model, double x, double xi);

// xi -> H(x, xi) packaged for the Legendre engine, with derivatives and the
// domain inherited from Psi.
ConvexFn hamiltonian_fn(const ModelSpec& model, double x);

// L(x, zeta) = sup_xi { zeta xi - H(x, xi) }.
LegendreResult lagrangian(const ModelSpec& model, double x, double zeta, double tol = 1e-10);

// dH/dx at fixed xi by central differences on the coefficient handles;
// the envelope term of dL/dx.
double hamiltonian_x_derivative(const ModelSpec& model, double x, double xi);

}  // namespace levyaction
