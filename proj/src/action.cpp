#include "levyaction/action.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "levyaction/errors.hpp"

namespace levyaction {

namespace {

bool starts_at_zero(const Path& phi) { return phi.values.front() == 0.0; }

}  // namespace

double action_brownian(const Path& phi) {
    phi.validate();
    if (!starts_at_zero(phi)) return kInf;
    double acc = 0.0;
    for (int k = 0; k < phi.n; ++k) {
        const double s = phi.slope(k);
        acc += s * s;
    }
    return 0.5 * acc / phi.n;
}

double action_sde_brownian(const Path& phi, const CoefficientSet& coeffs) {
    phi.validate();
    if (!starts_at_zero(phi)) return kInf;
    double acc = 0.0;
    for (int k = 0; k < phi.n; ++k) {
        const double x = phi.midpoint_value(k);
        const double s = coeffs.sigma(x);
        if (!(s >= coeffs.sigma_min) || !(s > 0.0))
            throw DegenerateDiffusionError(
                "action_sde_brownian: sigma fell below sigma_min along the path");
        const double u = (phi.slope(k) - coeffs.b(x)) / s;
        acc += u * u;
    }
    return 0.5 * acc / phi.n;
}

double action_levy(const Path& phi, const LevyTriplet& triplet) {
    phi.validate();
    if (!starts_at_zero(phi)) return kInf;
    const ConvexFn psi = make_mgf_fn(triplet);
    std::unordered_map<double, double> conj;  // memoized on the slope value
    double acc = 0.0;
    for (int k = 0; k < phi.n; ++k) {
        const double s = phi.slope(k);
        auto it = conj.find(s);
        if (it == conj.end())
            it = conj.emplace(s, legendre_transform(psi, s).value).first;
        if (it->second >= kInf) return kInf;
        acc += it->second;
    }
    return acc / phi.n;
}

double action_general(const Path& phi, const ModelSpec& model) {
    phi.validate();
    if (!starts_at_zero(phi)) return kInf;
    double acc = 0.0;
    for (int k = 0; k < phi.n; ++k) {
        const LegendreResult lr = lagrangian(model, phi.midpoint_value(k), phi.slope(k));
        if (lr.value >= kInf) return kInf;
        acc += lr.value;
    }
    return acc / phi.n;
}

JointActionResult action_joint(const Path& phi, const ModelSpec& model) {
    phi.validate();
    JointActionResult out;
    if (!starts_at_zero(phi)) {
        out.value = kInf;
        return out;
    }
    const ConvexFn psi = make_mgf_fn(model.triplet);
    auto psi_star = [&](double v) { return legendre_transform(psi, v); };

    double acc = 0.0;
    bool hit_inf = false;
    for (int k = 0; k < phi.n; ++k) {
        const double x = phi.midpoint_value(k);
        const double zeta = phi.slope(k);
        const double b = model.coeffs.b(x);
        const double s = model.coeffs.sigma(x);
        const double e = model.coeffs.eta(x);

        if (s == 0.0 && e == 0.0) {
            if (zeta == b) continue;  // drift slope costs nothing
            out.infeasible_cells.push_back(k);
            continue;
        }
        if (e == 0.0) {
            const double u = (zeta - b) / s;
            acc += 0.5 * u * u;
            continue;
        }
        if (s == 0.0) {
            const LegendreResult lr = psi_star((zeta - b) / e);
            if (lr.value >= kInf) hit_inf = true;
            else acc += lr.value;
            continue;
        }

        // minimize c(v) = (zeta - b - e v)^2 / (2 s^2) + Psi*(v); c' is increasing
        auto cost = [&](double v) {
            const double u = (zeta - b - e * v) / s;
            return 0.5 * u * u + psi_star(v).value;
        };
        auto cprime = [&](double v) {
            const LegendreResult lr = psi_star(v);
            return -(e / (s * s)) * (zeta - b - e * v) + lr.argmax;
        };
        // start where the conjugate factor is flat: v0 = Psi'(0)
        double v0 = log_mgf(model.triplet, 0.0, 1).d1;
        double c0 = cprime(v0);
        double lo = v0, hi = v0;
        double step = 1.0 + std::abs(v0);
        if (c0 > 0.0) {
            for (int it = 0; it < 200; ++it) {
                lo = hi - step;
                if (psi_star(lo).value >= kInf) {
                    // shrink toward the conjugate's domain edge
                    double a = lo, bnd = hi;
                    for (int j = 0; j < 80; ++j) {
                        const double mid = 0.5 * (a + bnd);
                        if (psi_star(mid).value >= kInf) a = mid; else bnd = mid;
                    }
                    lo = bnd;
                    break;
                }
                if (cprime(lo) <= 0.0) break;
                hi = lo;
                step *= 2.0;
            }
        } else {
            for (int it = 0; it < 200; ++it) {
                hi = lo + step;
                if (psi_star(hi).value >= kInf) {
                    double a = lo, bnd = hi;
                    for (int j = 0; j < 80; ++j) {
                        const double mid = 0.5 * (a + bnd);
                        if (psi_star(mid).value >= kInf) bnd = mid; else a = mid;
                    }
                    hi = a;
                    break;
                }
                if (cprime(hi) >= 0.0) break;
                lo = hi;
                step *= 2.0;
            }
        }
        for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (cprime(mid) < 0.0) lo = mid; else hi = mid;
        }
        const double c = cost(0.5 * (lo + hi));
        if (c >= kInf) hit_inf = true;
        else acc += c;
    }
    if (!out.infeasible_cells.empty() || hit_inf) out.value = kInf;
    else out.value = acc / phi.n;
    return out;
}

DualBound dual_lower_bound(const Path& phi, const LevyTriplet& triplet,
                           const StepFunction& alpha) {
    phi.validate();
    alpha.validate();
    DualBound out;
    double pairing = 0.0;
    double psi_part = 0.0;
    for (const StepPiece& p : alpha.pieces) {
        pairing += p.c * (phi.at(p.s) - phi.at(p.t));
        const MgfValue m = log_mgf(triplet, -p.c);
        if (!m.finite()) {
            out.psi_infinite = true;
            out.value = -kInf;
            return out;
        }
        psi_part += m.value * (p.t - p.s);
    }
    out.value = pairing - psi_part;
    return out;
}

EntropyFormResult action_entropy_form(const Path& phi,
                                      const std::function<double(double)>& grad_U,
                                      const LevyMeasure& nu,
                                      const std::vector<std::vector<double>>& g) {
    phi.validate();
    if (nu.kind() != MeasureKind::atoms)
        throw ValidationError("entropy form requires a discrete measure");
    const auto& atoms = nu.atoms();
    if (g.size() != static_cast<std::size_t>(phi.n))
        throw ValidationError("entropy form: g must be tabulated per cell");

    EntropyFormResult out;
    out.cell_residuals.resize(phi.n);
    double acc = 0.0;
    for (int k = 0; k < phi.n; ++k) {
        if (g[k].size() != atoms.size())
            throw ValidationError("entropy form: g row must match the atom count");
        double cell = 0.0;
        double flux = 0.0;
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            const double gv = g[k][j];
            if (!(gv > 0.0)) throw ValidationError("entropy form: g must be positive");
            cell += (gv * std::log(gv) - gv + 1.0) * atoms[j].w;
            flux += atoms[j].z * (gv - 1.0) * atoms[j].w;
        }
        acc += cell;
        const double x = phi.midpoint_value(k);
        out.cell_residuals[k] = std::abs(phi.slope(k) + grad_U(x) - flux);
        out.max_constraint_residual =
            std::max(out.max_constraint_residual, out.cell_residuals[k]);
    }
    out.entropy = acc / phi.n;
    return out;
}

double solve_exponential_tilt(const LevyMeasure& nu, double flux) {
    const auto& atoms = nu.atoms();
    if (atoms.empty()) throw TiltError("tilt: measure has no atoms");
    auto T = [&](double theta) {
        double s = 0.0;
        for (const Atom& a : atoms) s += a.z * std::exp(theta * a.z) * a.w;
        return s;
    };
    bool has_pos = false, has_neg = false;
    for (const Atom& a : atoms) {
        if (a.z > 0.0) has_pos = true;
        if (a.z < 0.0) has_neg = true;
    }
    // attainable range of T: (0 or -inf, 0 or +inf)
    if (!has_pos && flux >= 0.0) throw TiltError("tilt: flux above attainable range");
    if (!has_neg && flux <= 0.0) throw TiltError("tilt: flux below attainable range");

    double lo = 0.0, hi = 0.0;
    double step = 1.0;
    if (T(0.0) < flux) {
        for (int it = 0; ; ++it) {
            if (it >= 200) throw TiltError("tilt: flux not reachable");
            lo = hi;
            hi += step;
            const double v = T(hi);
            if (!std::isfinite(v) || v >= flux) break;  // overflow: crossing is inside
            step *= 2.0;
        }
    } else {
        for (int it = 0; ; ++it) {
            if (it >= 200) throw TiltError("tilt: flux not reachable");
            hi = lo;
            lo -= step;
            const double v = T(lo);
            if (!std::isfinite(v) || v <= flux) break;
            step *= 2.0;
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (T(mid) < flux) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

EntropyOptimalResult action_entropy_optimal(const Path& phi,
                                            const std::function<double(double)>& grad_U,
                                            const LevyMeasure& nu) {
    phi.validate();
    if (nu.kind() != MeasureKind::atoms)
        throw ValidationError("entropy form requires a discrete measure");
    const auto& atoms = nu.atoms();

    double base_flux = 0.0;  // int z nu(dz): flux of the untilted measure
    for (const Atom& a : atoms) base_flux += a.z * a.w;

    EntropyOptimalResult out;
    out.theta.resize(phi.n);
    double acc = 0.0;
    for (int k = 0; k < phi.n; ++k) {
        const double x = phi.midpoint_value(k);
        const double target = phi.slope(k) + grad_U(x) + base_flux;  // absolute flux
        const double theta = solve_exponential_tilt(nu, target);
        out.theta[k] = theta;
        double cell = 0.0;
        for (const Atom& a : atoms) {
            const double gv = std::exp(theta * a.z);
            cell += (gv * std::log(gv) - gv + 1.0) * a.w;
        }
        acc += cell;
    }
    out.value = acc / phi.n;
    return out;
}

}  // namespace levyaction
