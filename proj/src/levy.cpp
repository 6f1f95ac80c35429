#include "levyaction/levy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <boost/math/special_functions/gamma.hpp>

#include "levyaction/errors.hpp"
#include "levyaction/quadrature.hpp"

namespace levyaction {

namespace {

constexpr double kExpOverflow = 700.0;

// e^u - 1 - u without cancellation for |u| down to quadrature cutoffs.
double expm1m(double u) {
    return std::expm1(u) - u;
}

// sin(u) - u, stable near zero.
double sinm(double u) {
    if (std::abs(u) < 0.1) {
        const double u2 = u * u;
        return -u * u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0));
    }
    return std::sin(u) - u;
}

struct PanelSums {
    double lo = 0.0;  // order-n pass
    double hi = 0.0;  // order-2n pass
};

struct PanelSumsC {
    std::complex<double> lo{0.0, 0.0};
    std::complex<double> hi{0.0, 0.0};
};

template <typename Sums, typename F>
void add_panel(Sums& sums, F&& f, double a, double b, int n) {
    using T = decltype(f(a));
    sums.lo += gl_integrate<T>(f, a, b, n);
    sums.hi += gl_integrate<T>(f, a, b, 2 * n);
}

template <typename Sums, typename F>
void add_panel_split(Sums& sums, F&& f, double a, double b, int n, double rate) {
    const double width = b - a;
    int pieces = 1;
    if (width * rate > 15.0) {
        const double p = std::ceil(width * rate / 15.0);
        pieces = p > 100000.0 ? 100000 : static_cast<int>(p);
    }
    const double h = width / pieces;
    for (int i = 0; i < pieces; ++i)
        add_panel(sums, f, a + i * h, a + (i + 1) * h, n);
}

double mag(double v) { return std::abs(v); }
double mag(const std::complex<double>& v) { return std::abs(v); }

// Integrates f(y) * nu(y) over one side {rho <= |y| <= ...} of the support.
// `side` is +1 or -1; f receives the signed coordinate. The base region
// [rho, R] is covered by decade panels (with a mandatory breakpoint at 1 where
// the compensator switches), then the tail is extended by doubling panels
// until their share falls below tail_rtol or divergence is detected.
template <typename Sums>
struct SideOutcome {
    Sums sums;
    bool diverged = false;
    double tail_est = 0.0;
};

template <typename Sums, typename F>
SideOutcome<Sums> integrate_side(const LevyMeasure& nu, int side, F&& f, double rate,
                                 double osc_rate = 0.0) {
    const QuadratureSpec& q = nu.quad();
    SideOutcome<Sums> out;

    double lo_abs = q.small_jump_cutoff;
    double hi_abs = kInf;
    if (side > 0) {
        lo_abs = std::max(lo_abs, nu.support_lo());
        hi_abs = std::min(hi_abs, nu.support_hi());
    } else {
        lo_abs = std::max(lo_abs, -nu.support_hi());
        hi_abs = std::min(hi_abs, -nu.support_lo());
    }
    if (!(lo_abs < hi_abs)) return out;

    // f(y, w, lw) receives the density value and its logarithm so the product
    // e^{xi y} * density stays evaluable when either factor under/overflows.
    using Ret = decltype(f(1.0, 1.0, 0.0));
    const bool has_log = nu.has_log_density();
    auto g = [&](double y_abs) -> Ret {
        const double y = side > 0 ? y_abs : -y_abs;
        double w = nu.density_at(y);
        const double lw = has_log ? nu.log_density_at(y)
                                  : (w > 0.0 ? std::log(w) : -kInf);
        if (!(lw > -kInf)) return Ret{};
        if (!(w > 0.0)) w = std::exp(lw);
        return f(y, w, lw);
    };

    // base region: decades from lo_abs to R, breakpoint at 1
    const double R0 = std::min(q.truncation_radius, hi_abs);
    std::vector<double> brk;
    brk.push_back(lo_abs);
    for (double d = lo_abs * 10.0; d < R0; d *= 10.0) brk.push_back(d);
    if (1.0 > lo_abs && 1.0 < R0) brk.push_back(1.0);
    brk.push_back(R0);
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

    for (std::size_t i = 0; i + 1 < brk.size(); ++i)
        add_panel_split(out.sums, g, brk[i], brk[i + 1], q.nodes_per_decade, rate);

    if (R0 >= hi_abs) return out;

    // adaptive tail: [R, 2R], [2R, 4R], ...
    double R = R0;
    double prev_panel = kInf;
    int growth_streak = 0;
    int quiet_streak = 0;
    for (int k = 0; k < q.max_tail_doublings; ++k) {
        const double next = std::min(2.0 * R, hi_abs);
        const double scale = std::max(mag(out.sums.hi), 1e-300);

        // probe before committing to a full rule on a wide panel; the probes
        // also estimate the local exponential rate (the measure's decay and
        // e^{xi y} largely cancel near a domain edge, so the a-priori rate
        // would oversubdivide by orders of magnitude)
        double probe = 0.0;
        double probe_vals[9];
        for (int j = 0; j <= 8; ++j) {
            const double y = R + (next - R) * j / 8.0;
            probe_vals[j] = mag(g(y));
            probe = std::max(probe, probe_vals[j]);
        }
        double local_rate = 0.0;
        const double dy = (next - R) / 8.0;
        for (int j = 0; j < 8; ++j) {
            if (probe_vals[j] > 0.0 && probe_vals[j + 1] > 0.0)
                local_rate = std::max(local_rate,
                                      std::abs(std::log(probe_vals[j + 1] / probe_vals[j])) / dy);
        }
        const double tail_rate = std::max(osc_rate, 1.5 * local_rate) + 1e-300;
        const double bound = probe * (next - R);
        if (!std::isfinite(bound) || bound > 1e250) {
            out.diverged = true;
            return out;
        }
        // a panel only counts as negligible if the integrand is not still
        // growing at its right end (guards sub-turnover dips past the edge)
        const bool rising = mag(g(next)) > mag(g(R));
        if (bound <= q.tail_rtol * scale && !rising) {
            ++quiet_streak;
            out.tail_est += bound;
            if (quiet_streak >= 2 || next >= hi_abs) return out;
            R = next;
            continue;
        }
        quiet_streak = 0;

        Sums panel;
        add_panel_split(panel, g, R, next, q.nodes_per_decade, tail_rate);
        const double pm = mag(panel.hi);
        if (!std::isfinite(pm) || mag(out.sums.hi) > 1e250) {
            out.diverged = true;
            return out;
        }
        out.sums.lo += panel.lo;
        out.sums.hi += panel.hi;
        if (pm > prev_panel && pm > 1e-8 * scale) {
            if (++growth_streak >= 3) {
                out.diverged = true;
                return out;
            }
        } else {
            growth_streak = 0;
        }
        prev_panel = pm;
        if (pm <= q.tail_rtol * std::max(mag(out.sums.hi), 1e-300)) {
            out.tail_est += pm;
            return out;
        }
        R = next;
        if (R >= hi_abs) return out;
    }
    // cap reached while still shrinking: report what we have with a tail bound
    out.tail_est += prev_panel == kInf ? 0.0 : 3.0 * prev_panel;
    return out;
}

// int_{lo_abs < |y| <= hi_abs} y^k nu(dy) by decade panels, both sides.
// hi_abs may be infinite; decades then extend until the panel share is negligible.
double signed_moment_between(const LevyMeasure& nu, int k, double lo_abs, double hi_abs) {
    double total = 0.0;
    for (int side : {+1, -1}) {
        double a = lo_abs, b = hi_abs;
        if (side > 0) {
            a = std::max(a, nu.support_lo());
            b = std::min(b, nu.support_hi());
        } else {
            a = std::max(a, -nu.support_hi());
            b = std::min(b, -nu.support_lo());
        }
        if (!(a < b)) continue;
        auto f = [&](double y_abs) {
            const double y = side > 0 ? y_abs : -y_abs;
            const double w = nu.density_at(y);
            return w > 0.0 ? std::pow(y, k) * w : 0.0;
        };
        double accum = 0.0;
        double lo = a;
        for (int j = 0; j < 200 && lo < b && lo < 1e150; ++j) {
            const double hi = std::min(lo * 10.0, b);
            const double panel = gl_integrate<double>(f, lo, hi, 48);
            accum += panel;
            if (j > 1 && std::abs(accum) > 0.0 &&
                std::abs(panel) <= 1e-15 * std::abs(accum) && hi < b)
                break;
            lo = hi;
        }
        total += accum;
    }
    return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// LevyMeasure

LevyMeasure LevyMeasure::zero() { return LevyMeasure{}; }

LevyMeasure LevyMeasure::from_atoms(std::vector<Atom> atoms) {
    LevyMeasure m;
    m.kind_ = MeasureKind::atoms;
    m.atoms_ = std::move(atoms);
    m.validate();
    return m;
}

LevyMeasure LevyMeasure::from_density(std::function<double(double)> density,
                                      double support_lo, double support_hi,
                                      QuadratureSpec spec,
                                      std::optional<InnerMoments> inner,
                                      std::function<double(double)> log_density) {
    LevyMeasure m;
    m.kind_ = MeasureKind::density;
    m.density_ = std::move(density);
    m.log_density_ = std::move(log_density);
    m.support_lo_ = support_lo;
    m.support_hi_ = support_hi;
    m.quad_ = spec;
    if (inner) m.declared_inner_ = std::make_pair(spec.small_jump_cutoff, *inner);
    m.validate();
    if (!inner)
        m.declared_inner_ =
            std::make_pair(spec.small_jump_cutoff, m.inner_moments(spec.small_jump_cutoff));
    return m;
}

LevyMeasure LevyMeasure::tempered_stable(double alpha, double m_rate) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw ValidationError("tempered_stable: alpha must lie in (1,2)");
    if (!(m_rate > 0.0)) throw ValidationError("tempered_stable: m must be positive");
    LevyMeasure m;
    m.kind_ = MeasureKind::tempered_stable;
    m.alpha_ = alpha;
    m.m_ = m_rate;
    const double c = 0.5 * alpha * (alpha - 1.0) / std::tgamma(2.0 - alpha);
    m.density_ = [c, alpha, m_rate](double y) {
        if (y <= 0.0) return 0.0;
        return c * std::exp(-m_rate * y) * std::pow(y, -1.0 - alpha);
    };
    const double log_c = std::log(c);
    m.log_density_ = [log_c, alpha, m_rate](double y) {
        if (y <= 0.0) return -kInf;
        return log_c - m_rate * y - (1.0 + alpha) * std::log(y);
    };
    m.support_lo_ = 0.0;
    m.support_hi_ = kInf;
    m.quad_.truncation_radius = std::max(10.0, 50.0 / m_rate);
    return m;
}

LevyMeasure LevyMeasure::exponential_tail(double alpha) {
    if (!(alpha > 0.0)) throw ValidationError("exponential_tail: alpha must be positive");
    LevyMeasure m;
    m.kind_ = MeasureKind::exponential_tail;
    m.alpha_ = alpha;
    m.density_ = [alpha](double z) { return std::exp(-std::pow(std::abs(z), alpha)); };
    m.log_density_ = [alpha](double z) { return -std::pow(std::abs(z), alpha); };
    m.support_lo_ = -kInf;
    m.support_hi_ = kInf;
    return m;
}

double LevyMeasure::mass_above(double cut) const {
    if (kind_ == MeasureKind::zero) return 0.0;
    if (kind_ == MeasureKind::atoms) {
        double total = 0.0;
        for (const Atom& a : atoms_)
            if (std::abs(a.z) > cut) total += a.w;
        return total;
    }
    return signed_moment_between(*this, 0, cut, kInf);
}

double LevyMeasure::first_moment_between(double lo, double hi) const {
    if (kind_ == MeasureKind::zero) return 0.0;
    if (kind_ == MeasureKind::atoms) {
        double total = 0.0;
        for (const Atom& a : atoms_)
            if (std::abs(a.z) > lo && std::abs(a.z) <= hi) total += a.w * a.z;
        return total;
    }
    return signed_moment_between(*this, 1, lo, hi);
}

double LevyMeasure::decay_hint() const {
    switch (kind_) {
        case MeasureKind::tempered_stable: return m_;
        case MeasureKind::exponential_tail: return std::max(1.0, alpha_);
        default: return 1.0;
    }
}

InnerMoments LevyMeasure::inner_moments(double rho) const {
    InnerMoments mom;
    if (kind_ == MeasureKind::zero) return mom;
    if (kind_ == MeasureKind::atoms) {
        for (const Atom& a : atoms_)
            if (std::abs(a.z) <= rho) {
                mom.m2 += a.w * a.z * a.z;
                mom.m3 += a.w * a.z * a.z * a.z;
                mom.m4 += a.w * a.z * a.z * a.z * a.z;
            }
        return mom;
    }
    if (declared_inner_ && rho == declared_inner_->first) return declared_inner_->second;
    if (kind_ == MeasureKind::tempered_stable) {
        // M_k(rho) = C sum_j (-m)^j rho^{k-alpha+j} / (j! (k-alpha+j))
        const double c = 0.5 * alpha_ * (alpha_ - 1.0) / std::tgamma(2.0 - alpha_);
        auto series = [&](int k) {
            double sum = 0.0, term_num = 1.0;  // (-m)^j / j!
            for (int j = 0; j < 40; ++j) {
                const double e = k - alpha_ + j;
                const double term = term_num * std::pow(rho, e) / e;
                sum += term;
                if (std::abs(term) < 1e-18 * std::abs(sum)) break;
                term_num *= -m_ / (j + 1.0);
            }
            return c * sum;
        };
        mom.m2 = series(2);
        mom.m3 = series(3);
        mom.m4 = series(4);
        return mom;
    }
    // generic: log-coordinate decades descending from rho on each covered side
    for (int side : {+1, -1}) {
        double hi = rho;
        if (side > 0) {
            if (support_lo_ >= rho) continue;
            hi = std::min(rho, support_hi_);
        } else {
            if (support_hi_ <= -rho) continue;
            hi = std::min(rho, -support_lo_);
        }
        if (!(hi > 0.0)) continue;
        const double l10 = std::log(10.0);
        double u_hi = std::log(hi);
        double accum2 = 0.0;
        for (int j = 0; j < 80; ++j) {
            const double u_lo = u_hi - l10;
            auto gk = [&](int k) {
                return gl_integrate<double>(
                    [&](double u) {
                        const double y_abs = std::exp(u);
                        const double y = side > 0 ? y_abs : -y_abs;
                        const double w = density_at(y);
                        return w > 0.0 ? std::pow(y, k) * y_abs * w : 0.0;
                    },
                    u_lo, u_hi, 16);
            };
            const double p2 = gk(2);
            mom.m2 += p2;
            mom.m3 += gk(3);
            mom.m4 += gk(4);
            accum2 += p2;
            if (j > 2 && p2 <= 1e-16 * std::max(accum2, 1e-300)) break;
            u_hi = u_lo;
        }
    }
    return mom;
}

void LevyMeasure::validate() const {
    if (kind_ == MeasureKind::zero) return;
    if (kind_ == MeasureKind::atoms) {
        for (const Atom& a : atoms_) {
            if (!(a.w > 0.0)) throw ValidationError("atom mass must be positive");
            if (a.z == 0.0) throw ValidationError("atom at the origin is not a jump");
            if (!std::isfinite(a.z) || !std::isfinite(a.w))
                throw ValidationError("atom entries must be finite");
        }
        return;
    }
    if (!density_) throw ValidationError("density measure without a density handle");
    if (!(support_lo_ < support_hi_)) throw ValidationError("empty measure support");
    // spot-check nonnegativity and int (y^2 ^ 1) nu(dy) < inf
    const double lo = std::max(support_lo_, -quad_.truncation_radius);
    const double hi = std::min(support_hi_, quad_.truncation_radius);
    for (int i = 0; i <= 16; ++i) {
        const double y = lo + (hi - lo) * i / 16.0;
        if (y == 0.0) continue;
        const double w = density_at(y);
        if (w < 0.0 || std::isnan(w))
            throw ValidationError("density must be nonnegative and finite");
    }
    const double small = inner_moments(1.0).m2;
    const double large = signed_moment_between(*this, 0, 1.0, quad_.truncation_radius * 64.0);
    if (!std::isfinite(small) || !std::isfinite(large))
        throw ValidationError("int (y^2 ^ 1) nu(dy) is not finite");
}

// ---------------------------------------------------------------------------
// LevyTriplet

void LevyTriplet::validate() const {
    if (!(sigma2 >= 0.0)) throw ValidationError("triplet: sigma2 must be >= 0");
    if (!std::isfinite(a)) throw ValidationError("triplet: drift must be finite");
    nu.validate();
}

void LevyTriplet::mgf_domain_hint(double& lo, double& hi) const {
    lo = -kInf;
    hi = kInf;
    switch (nu.kind()) {
        case MeasureKind::tempered_stable:
            hi = nu.m();  // Psi stays finite at the edge itself for alpha in (1,2)
            break;
        case MeasureKind::exponential_tail:
            if (nu.alpha() < 1.0) { lo = 0.0; hi = 0.0; }
            else if (nu.alpha() == 1.0) { lo = -1.0; hi = 1.0; }
            break;
        default:
            break;
    }
}

// ---------------------------------------------------------------------------
// Symbol and log-MGF

SymbolValue psi_eval(const LevyTriplet& t, double xi) {
    SymbolValue out;
    out.value = std::complex<double>(-0.5 * t.sigma2 * xi * xi, t.a * xi);

    const LevyMeasure& nu = t.nu;
    if (nu.is_zero()) return out;

    if (nu.kind() == MeasureKind::atoms) {
        std::complex<double> sum{0.0, 0.0};
        for (const Atom& a : nu.atoms()) {
            const double u = xi * a.z;
            std::complex<double> term(-2.0 * std::pow(std::sin(0.5 * u), 2),
                                      std::abs(a.z) <= 1.0 ? sinm(u) : std::sin(u));
            sum += a.w * term;
        }
        out.value += sum;
        return out;
    }

    const double rate = std::abs(xi) + nu.decay_hint() + 1.0;
    auto f = [xi](double y, double w, double) {
        const double u = xi * y;
        return w * std::complex<double>(-2.0 * std::pow(std::sin(0.5 * u), 2),
                                        std::abs(y) <= 1.0 ? sinm(u) : std::sin(u));
    };
    double resid = 0.0;
    std::complex<double> total{0.0, 0.0};
    for (int side : {+1, -1}) {
        auto r = integrate_side<PanelSumsC>(nu, side, f, rate, std::abs(xi));
        if (r.diverged || !std::isfinite(std::abs(r.sums.hi)))
            throw QuadratureError("psi_eval: side integral diverged", kInf);
        total += r.sums.hi;
        resid += std::abs(r.sums.hi - r.sums.lo) + r.tail_est;
    }
    const double rho = nu.quad().small_jump_cutoff;
    const InnerMoments mom = nu.inner_moments(rho);
    total += std::complex<double>(-0.5 * xi * xi * mom.m2 + xi * xi * xi * xi * mom.m4 / 24.0,
                                  -xi * xi * xi * mom.m3 / 6.0);
    resid += std::pow(std::abs(xi), 5) * rho * std::abs(mom.m4) / 120.0;
    out.value += total;
    out.residual = resid;
    if (resid > nu.quad().declared_tolerance * std::max(1.0, std::abs(out.value)) * 10.0)
        throw QuadratureError("psi_eval: residual above declared tolerance", resid);
    return out;
}

MgfValue log_mgf(const LevyTriplet& t, double xi, int order) {
    MgfValue out;
    out.value = t.a * xi + 0.5 * t.sigma2 * xi * xi;
    if (order >= 1) out.d1 = t.a + t.sigma2 * xi;
    if (order >= 2) out.d2 = t.sigma2;

    const LevyMeasure& nu = t.nu;
    if (nu.is_zero()) return out;

    if (nu.kind() == MeasureKind::atoms) {
        double v = 0.0, d1 = 0.0, d2 = 0.0;
        for (const Atom& a : nu.atoms()) {
            const double u = xi * a.z;
            if (u > kExpOverflow) {
                out.value = kInf;
                out.d1 = kInf;
                out.d2 = kInf;
                return out;
            }
            const bool comp = std::abs(a.z) <= 1.0;
            v += a.w * (comp ? expm1m(u) : std::expm1(u));
            if (order >= 1) d1 += a.w * a.z * (comp ? std::expm1(u) : std::exp(u));
            if (order >= 2) d2 += a.w * a.z * a.z * std::exp(u);
        }
        out.value += v;
        if (order >= 1) out.d1 += d1;
        if (order >= 2) out.d2 += d2;
        return out;
    }

    const double rate = std::abs(xi) + nu.decay_hint() + 1.0;
    const double rho = nu.quad().small_jump_cutoff;
    const InnerMoments mom = nu.inner_moments(rho);

    auto run = [&](auto&& f, double inner, double& dest, double& resid) -> bool {
        double total = inner;
        for (int side : {+1, -1}) {
            auto r = integrate_side<PanelSums>(nu, side, f, rate);
            if (r.diverged || !std::isfinite(r.sums.hi)) return false;
            total += r.sums.hi;
            resid += std::abs(r.sums.hi - r.sums.lo) + r.tail_est;
        }
        dest += total;
        return true;
    };

    double resid = 0.0;
    auto f0 = [xi](double y, double w, double lw) {
        const double u = xi * y;
        if (std::abs(y) <= 1.0) return w * expm1m(u);
        if (u > 600.0 || !(w > 0.0)) return std::exp(u + lw);  // -w is negligible here
        return w * std::expm1(u);
    };
    const double inner0 =
        0.5 * xi * xi * mom.m2 + xi * xi * xi * mom.m3 / 6.0 + xi * xi * xi * xi * mom.m4 / 24.0;
    if (!run(f0, inner0, out.value, resid)) {
        out.value = kInf;
        out.d1 = kInf;
        out.d2 = kInf;
        return out;
    }

    if (order >= 1) {
        auto f1 = [xi](double y, double w, double lw) {
            const double u = xi * y;
            if (std::abs(y) <= 1.0) return w * y * std::expm1(u);
            if (u > 600.0 || !(w > 0.0))
                return std::exp(u + lw + std::log(std::abs(y))) * (y > 0.0 ? 1.0 : -1.0);
            return w * y * std::exp(u);
        };
        const double inner1 = xi * mom.m2 + 0.5 * xi * xi * mom.m3 + xi * xi * xi * mom.m4 / 6.0;
        if (!run(f1, inner1, out.d1, resid)) out.d1 = kInf;
    }
    if (order >= 2) {
        auto f2 = [xi](double y, double w, double lw) {
            const double u = xi * y;
            if (u > 600.0 || !(w > 0.0))
                return std::exp(u + lw + 2.0 * std::log(std::abs(y)));
            return w * y * y * std::exp(u);
        };
        const double inner2 = mom.m2 + xi * mom.m3 + 0.5 * xi * xi * mom.m4;
        if (!run(f2, inner2, out.d2, resid)) out.d2 = kInf;
    }
    resid += std::pow(std::abs(xi), 5) * rho * std::abs(mom.m4) / 120.0;
    out.residual = resid;
    return out;
}

MgfValue log_mgf_strict(const LevyTriplet& t, double xi, int order) {
    MgfValue v = log_mgf(t, xi, order);
    if (!v.finite()) throw InfiniteMomentError(xi);
    return v;
}

// ---------------------------------------------------------------------------
// Moment diagnostic

MomentDiagnostic check_exponential_moments(const LevyTriplet& t, double lambda_max) {
    if (!(lambda_max > 0.0)) throw ValidationError("lambda_max must be positive");
    MomentDiagnostic diag;
    diag.lambda_max_tested = lambda_max;

    auto finite_at = [&](double lam) {
        return log_mgf(t, lam).finite() && log_mgf(t, -lam).finite();
    };

    const int K = 12;
    double prev = 0.0;
    for (int j = 0; j <= K; ++j) {
        const double lam = lambda_max * std::pow(2.0, static_cast<double>(j - K));
        if (!finite_at(lam)) {
            double lo = prev, hi = lam;
            while (hi - lo > 0.003 * hi) {
                const double mid = 0.5 * (lo + hi);
                if (finite_at(mid)) lo = mid; else hi = mid;
            }
            diag.finite = false;
            diag.first_failing_lambda = 0.5 * (lo + hi);
            return diag;
        }
        prev = lam;
    }
    return diag;
}

// ---------------------------------------------------------------------------
// Tempered-stable closed forms

double tempered_stable_kappa1(double alpha, double m) {
    const double c = 0.5 * alpha * (alpha - 1.0) / std::tgamma(2.0 - alpha);
    // Gamma(1-alpha, m) via one recurrence step from Gamma(2-alpha, m)
    const double g2 = boost::math::tgamma(2.0 - alpha, m);
    const double g1 = (g2 - std::pow(m, 1.0 - alpha) * std::exp(-m)) / (1.0 - alpha);
    return c * std::pow(m, alpha - 1.0) * g1;
}

double tempered_stable_log_mgf(double alpha, double m, double xi) {
    if (xi > m) return kInf;
    const double k1 = tempered_stable_kappa1(alpha, m);
    return 0.5 * (std::pow(m - xi, alpha) - std::pow(m, alpha) +
                  alpha * xi * std::pow(m, alpha - 1.0)) +
           xi * k1;
}

double tempered_stable_log_mgf_deriv(double alpha, double m, double xi) {
    if (xi > m) return kInf;
    const double k1 = tempered_stable_kappa1(alpha, m);
    return 0.5 * alpha * (std::pow(m, alpha - 1.0) - std::pow(m - xi, alpha - 1.0)) + k1;
}

std::complex<double> tempered_stable_symbol(double alpha, double m, double xi) {
    const double k1 = tempered_stable_kappa1(alpha, m);
    const std::complex<double> base = std::pow(std::complex<double>(m, -xi), alpha);
    return 0.5 * (base - std::pow(m, alpha) +
                  std::complex<double>(0.0, alpha * xi * std::pow(m, alpha - 1.0))) +
           std::complex<double>(0.0, xi * k1);
}

}  // namespace levyaction
