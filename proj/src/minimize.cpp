#include "levyaction/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "levyaction/errors.hpp"

namespace levyaction {

namespace {

// Per-cell integrand F(x, zeta) with partial derivatives, per functional.
struct CellIntegrand {
    const ModelSpec& model;
    Functional functional;
    ConvexFn psi;  // shared memoized Psi for the levy branch

    explicit CellIntegrand(const ModelSpec& m, Functional f)
        : model(m), functional(f), psi(make_mgf_fn(m.triplet)) {}

    double value(double x, double zeta) const {
        switch (functional) {
            case Functional::brownian:
                return 0.5 * zeta * zeta;
            case Functional::sde_brownian: {
                const double s = model.coeffs.sigma(x);
                if (!(s >= model.coeffs.sigma_min) || !(s > 0.0))
                    throw DegenerateDiffusionError("minimize: sigma not positive");
                const double u = (zeta - model.coeffs.b(x)) / s;
                return 0.5 * u * u;
            }
            case Functional::levy:
                return legendre_transform(psi, zeta).value;
            case Functional::general:
                return lagrangian(model, x, zeta).value;
            case Functional::joint: {
                Path cell;
                cell.n = 1;
                cell.values = {0.0, zeta};
                return action_joint(cell, shifted_model(x)).value;
            }
        }
        return 0.0;
    }

    // dF/dx and dF/dzeta; envelope theorem supplies the conjugate derivatives.
    void derivs(double x, double zeta, double& fx, double& fz) const {
        switch (functional) {
            case Functional::brownian:
                fx = 0.0;
                fz = zeta;
                return;
            case Functional::sde_brownian: {
                const double s = model.coeffs.sigma(x);
                const double u = (zeta - model.coeffs.b(x)) / s;
                const double h = 1e-6 * (1.0 + std::abs(x));
                const double bp = (model.coeffs.b(x + h) - model.coeffs.b(x - h)) / (2.0 * h);
                const double sp =
                    (model.coeffs.sigma(x + h) - model.coeffs.sigma(x - h)) / (2.0 * h);
                fz = u / s;
                fx = -u * (bp + u * sp) / s;
                return;
            }
            case Functional::levy: {
                const LegendreResult lr = legendre_transform(psi, zeta);
                fz = lr.argmax;
                fx = 0.0;
                return;
            }
            case Functional::general: {
                const LegendreResult lr = lagrangian(model, x, zeta);
                fz = lr.argmax;
                fx = -hamiltonian_x_derivative(model, x, lr.argmax);
                return;
            }
            case Functional::joint: {
                const double hx = 1e-6 * (1.0 + std::abs(x));
                const double hz = 1e-6 * (1.0 + std::abs(zeta));
                fx = (value(x + hx, zeta) - value(x - hx, zeta)) / (2.0 * hx);
                fz = (value(x, zeta + hz) - value(x, zeta - hz)) / (2.0 * hz);
                return;
            }
        }
    }

private:
    // action_joint consumes a path from 0; freeze the coefficients at the true
    // midpoint x so the single synthetic cell evaluates there.
    ModelSpec shifted_model(double x) const {
        ModelSpec m = model;
        auto b0 = model.coeffs.b;
        auto s0 = model.coeffs.sigma;
        auto e0 = model.coeffs.eta;
        m.coeffs.b = [b0, x](double) { return b0(x); };
        m.coeffs.sigma = [s0, x](double) { return s0(x); };
        m.coeffs.eta = [e0, x](double) { return e0(x); };
        return m;
    }
};

struct Objective {
    const BoundaryProblem& problem;
    CellIntegrand cell;
    std::vector<int> free_nodes;

    Objective(const BoundaryProblem& p, const MinimizeOptions& opts)
        : problem(p), cell(p.model, p.functional) {
        std::vector<bool> pinned(p.n + 1, false);
        pinned[0] = true;
        if (!opts.free_right_endpoint) pinned[p.n] = true;
        if (opts.extra_pins) {
            if (opts.extra_pins->size() != pinned.size())
                throw ValidationError("minimize: pin mask size mismatch");
            for (std::size_t i = 0; i < pinned.size(); ++i)
                if ((*opts.extra_pins)[i]) pinned[i] = true;
        }
        for (int i = 0; i <= p.n; ++i)
            if (!pinned[i]) free_nodes.push_back(i);
    }

    double eval(const Path& phi) const {
        const int n = phi.n;
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            const double v = cell.value(phi.midpoint_value(k), phi.slope(k));
            if (v >= kInf) return kInf;
            acc += v;
        }
        return acc / n;
    }

    // gradient w.r.t. the free nodes
    void gradient(const Path& phi, std::vector<double>& grad) const {
        const int n = phi.n;
        std::vector<double> fx(n), fz(n);
        for (int k = 0; k < n; ++k)
            cell.derivs(phi.midpoint_value(k), phi.slope(k), fx[k], fz[k]);
        grad.assign(free_nodes.size(), 0.0);
        for (std::size_t j = 0; j < free_nodes.size(); ++j) {
            const int i = free_nodes[j];
            double g = 0.0;
            if (i > 0) g += 0.5 * fx[i - 1] / n + fz[i - 1];
            if (i < n) g += 0.5 * fx[i] / n - fz[i];
            grad[j] = g;
        }
    }
};

}  // namespace

Path drift_path(const ModelSpec& model, double x0, int n) {
    auto zeta0 = [&](double x) {
        // H_xi(x, 0) = b(x) + eta(x) Psi'(0)
        const double psi1 = log_mgf(model.triplet, 0.0, 1).d1;
        return model.coeffs.b(x) + model.coeffs.eta(x) * psi1;
    };
    Path p;
    p.n = n;
    p.values.resize(n + 1);
    p.values[0] = x0;
    const double h = 1.0 / n;
    double x = x0;
    for (int k = 0; k < n; ++k) {
        const double k1 = zeta0(x);
        const double k2 = zeta0(x + 0.5 * h * k1);
        const double k3 = zeta0(x + 0.5 * h * k2);
        const double k4 = zeta0(x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        p.values[k + 1] = x;
    }
    return p;
}

double evaluate_functional(Functional f, const Path& phi, const ModelSpec& model) {
    switch (f) {
        case Functional::brownian: return action_brownian(phi);
        case Functional::sde_brownian: return action_sde_brownian(phi, model.coeffs);
        case Functional::levy: return action_levy(phi, model.triplet);
        case Functional::general: return action_general(phi, model);
        case Functional::joint: return action_joint(phi, model).value;
    }
    return 0.0;
}

double euler_lagrange_residual(const Path& path, const ModelSpec& model,
                               Functional functional) {
    const int n = path.n;
    CellIntegrand cell(model, functional);
    std::vector<double> fx(n), fz(n);
    for (int k = 0; k < n; ++k)
        cell.derivs(path.midpoint_value(k), path.slope(k), fx[k], fz[k]);
    double worst = 0.0;
    for (int i = 1; i < n; ++i) {
        const double r = n * (fz[i] - fz[i - 1]) - 0.5 * (fx[i - 1] + fx[i]);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

MinimizationResult minimize_action(const BoundaryProblem& problem,
                                   const MinimizeOptions& opts) {
    problem.model.validate();
    const int n = problem.n;
    if (n < 1) throw ValidationError("minimize: n must be >= 1");

    Objective obj(problem, opts);

    Path phi = Path::line(problem.x0, problem.x1, n);
    if (opts.initial) {
        if (opts.initial->size() != static_cast<std::size_t>(n) + 1)
            throw ValidationError("minimize: initial path size mismatch");
        phi.values = *opts.initial;
    }
    double f0 = obj.eval(phi);
    if (f0 >= kInf) {
        // straight line has a slope outside dom(Psi*): warp the drift path
        Path d = drift_path(problem.model, problem.x0, n);
        const double gapv = problem.x1 - d.values[n];
        for (int k = 0; k <= n; ++k)
            d.values[k] += gapv * static_cast<double>(k) / n;
        phi = d;
        f0 = obj.eval(phi);
        if (f0 >= kInf)
            throw ValidationError(
                "minimize: no finite-action initializer found; shrink the endpoint gap");
    }

    const int max_iter = opts.max_iterations > 0 ? opts.max_iterations : 10 * n;
    const std::size_t dim = obj.free_nodes.size();

    MinimizationResult res;
    res.path = phi;
    res.action = f0;

    if (dim == 0) {
        res.grad_norm = 0.0;
        res.converged = true;
        res.el_residual = euler_lagrange_residual(phi, problem.model, problem.functional);
        return res;
    }

    std::vector<double> x(dim), g(dim);
    for (std::size_t j = 0; j < dim; ++j) x[j] = phi.values[obj.free_nodes[j]];

    auto apply = [&](const std::vector<double>& xv, Path& target) {
        for (std::size_t j = 0; j < dim; ++j) target.values[obj.free_nodes[j]] = xv[j];
    };

    double f = f0;
    obj.gradient(phi, g);

    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    std::vector<double> prev_x = x, prev_g = g;

    auto norm_inf = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double a : v) m = std::max(m, std::abs(a));
        return m;
    };

    int it = 0;
    bool converged = false;
    for (; it < max_iter; ++it) {
        const double gtol = opts.gtol_rel * (1.0 + std::abs(f));
        if (norm_inf(g) <= gtol) {
            converged = true;
            break;
        }

        // two-loop recursion
        std::vector<double> q = g;
        std::vector<double> alpha(s_hist.size());
        for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
            double dot = 0.0;
            for (std::size_t j = 0; j < dim; ++j) dot += s_hist[i][j] * q[j];
            alpha[i] = rho_hist[i] * dot;
            for (std::size_t j = 0; j < dim; ++j) q[j] -= alpha[i] * y_hist[i][j];
        }
        double gamma = 1.0;
        if (!s_hist.empty()) {
            double sy = 0.0, yy = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                sy += s_hist.back()[j] * y_hist.back()[j];
                yy += y_hist.back()[j] * y_hist.back()[j];
            }
            if (yy > 0.0) gamma = sy / yy;
        }
        for (double& qj : q) qj *= gamma;
        for (int i = 0; i < static_cast<int>(s_hist.size()); ++i) {
            double dot = 0.0;
            for (std::size_t j = 0; j < dim; ++j) dot += y_hist[i][j] * q[j];
            const double beta = rho_hist[i] * dot;
            for (std::size_t j = 0; j < dim; ++j) q[j] += (alpha[i] - beta) * s_hist[i][j];
        }
        // q is the ascent-modelled step; descend along -q
        double dir_dot_g = 0.0;
        for (std::size_t j = 0; j < dim; ++j) dir_dot_g += q[j] * g[j];
        if (!(dir_dot_g > 0.0)) {
            q = g;  // fall back to steepest descent
            dir_dot_g = 0.0;
            for (std::size_t j = 0; j < dim; ++j) dir_dot_g += g[j] * g[j];
        }

        // backtracking Armijo line search
        double t = 1.0;
        Path trial = phi;
        std::vector<double> xt(dim);
        double ft = kInf;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t j = 0; j < dim; ++j) xt[j] = x[j] - t * q[j];
            apply(xt, trial);
            ft = obj.eval(trial);
            if (ft < f - 1e-4 * t * dir_dot_g) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // line search stalled: return best so far

        prev_x.swap(x);
        prev_g.swap(g);
        x = xt;
        phi = trial;
        f = ft;
        obj.gradient(phi, g);

        std::vector<double> s(dim), y(dim);
        double sy = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            s[j] = x[j] - prev_x[j];
            y[j] = g[j] - prev_g[j];
            sy += s[j] * y[j];
        }
        if (sy > 1e-14) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opts.lbfgs_memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
    }

    // Gauss-Seidel polish: the backtracking search stalls once improvements
    // reach machine granularity, leaving high-frequency gradient noise that
    // dominates the Euler-Lagrange max-norm. Per-node Newton sweeps remove it.
    if (!converged) {
        auto node_grad = [&](const Path& p, int i) {
            double fx, fz, acc = 0.0;
            if (i > 0) {
                obj.cell.derivs(p.midpoint_value(i - 1), p.slope(i - 1), fx, fz);
                acc += 0.5 * fx / n + fz;
            }
            if (i < n) {
                obj.cell.derivs(p.midpoint_value(i), p.slope(i), fx, fz);
                acc += 0.5 * fx / n - fz;
            }
            return acc;
        };
        const Path before = phi;
        const double f_before = f;
        for (int sweep = 0; sweep < 30; ++sweep) {
            double worst = 0.0;
            for (int i : obj.free_nodes) {
                const double gi = node_grad(phi, i);
                worst = std::max(worst, std::abs(gi));
                const double h = 1e-7 * (1.0 + std::abs(phi.values[i]));
                phi.values[i] += h;
                const double gp = node_grad(phi, i);
                phi.values[i] -= h;
                const double curv = (gp - gi) / h;
                if (curv > 0.0 && std::isfinite(curv)) {
                    double step = -gi / curv;
                    const double cap = 0.5 * (1.0 + std::abs(phi.values[i]));
                    step = std::clamp(step, -cap, cap);
                    phi.values[i] += step;
                }
            }
            if (worst <= opts.gtol_rel * (1.0 + std::abs(f))) break;
        }
        f = obj.eval(phi);
        obj.gradient(phi, g);
        if (!(f <= f_before + 1e-12 * (1.0 + std::abs(f_before)))) {
            phi = before;
            f = f_before;
            obj.gradient(phi, g);
        }
    }

    res.path = phi;
    res.action = f;
    res.grad_norm = norm_inf(g);
    res.iterations = it;
    res.converged = converged || res.grad_norm <= opts.gtol_rel * (1.0 + std::abs(f));
    res.el_residual = euler_lagrange_residual(phi, problem.model, problem.functional);
    return res;
}

}  // namespace levyaction
