#include "levyaction/model.hpp"

#include <cmath>

#include "levyaction/errors.hpp"

namespace levyaction {

CoefficientSet CoefficientSet::constant(double b, double sigma, double eta) {
    CoefficientSet c;
    c.b = [b](double) { return b; };
    c.sigma = [sigma](double) { return sigma; };
    c.eta = [eta](double) { return eta; };
    c.lipschitz_bound = 0.0;
    c.b_sup = std::abs(b);
    c.sigma_sup = std::abs(sigma);
    c.eta_sup = std::abs(eta);
    return c;
}

void ModelSpec::validate() const {
    if (!(epsilon > 0.0)) throw ValidationError("model: epsilon must be positive");
    if (!coeffs.b || !coeffs.sigma || !coeffs.eta)
        throw ValidationError("model: all three coefficient handles are required");
    triplet.validate();
}

double hamiltonian(const ModelSpec& model, double x, double xi) {
    const double b = model.coeffs.b(x);
    const double s = model.coeffs.sigma(x);
    const double e = model.coeffs.eta(x);
    double value = b * xi + 0.5 * s * s * xi * xi;
    if (e != 0.0 || model.triplet.a != 0.0 || model.triplet.sigma2 != 0.0 ||
        !model.triplet.nu.is_zero())
        value += log_mgf(model.triplet, e * xi).value;
    return value;
}

ConvexFn hamiltonian_fn(const ModelSpec& model, double x) {
    const double b = model.coeffs.b(x);
    const double s2 = std::pow(model.coeffs.sigma(x), 2);
    const double e = model.coeffs.eta(x);
    ConvexFn psi = make_mgf_fn(model.triplet);

    ConvexFn fn;
    fn.eval = [b, s2, e, psi](double xi) {
        return b * xi + 0.5 * s2 * xi * xi + psi.eval(e * xi);
    };
    fn.deriv = [b, s2, e, psi](double xi) {
        return b + s2 * xi + e * psi.deriv(e * xi);
    };
    fn.deriv2 = [s2, e, psi](double xi) {
        return s2 + e * e * psi.deriv2(e * xi);
    };
    // domain: eta(x) * xi must stay inside dom(Psi)
    if (e > 0.0) {
        fn.domain_lo = psi.domain_lo / e;
        fn.domain_hi = psi.domain_hi / e;
    } else if (e < 0.0) {
        fn.domain_lo = psi.domain_hi / e;
        fn.domain_hi = psi.domain_lo / e;
    }
    return fn;
}

LegendreResult lagrangian(const ModelSpec& model, double x, double zeta, double tol) {
    LegendreOptions opt;
    opt.stat_tol = tol;
    return legendre_transform(hamiltonian_fn(model, x), zeta, opt);
}

double hamiltonian_x_derivative(const ModelSpec& model, double x, double xi) {
    const double h = 1e-6 * (1.0 + std::abs(x));
    return (hamiltonian(model, x + h, xi) - hamiltonian(model, x - h, xi)) / (2.0 * h);
}

}  // namespace levyaction
