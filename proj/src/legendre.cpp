#include "levyaction/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <unordered_map>

#include "levyaction/errors.hpp"

namespace levyaction {

namespace {

constexpr int kMaxExpand = 220;
constexpr double kXiCap = 1e12;

double finite_or_inf(double v) { return std::isnan(v) ? kInf : v; }

struct Engine {
    const ConvexFn& f;
    double p;
    LegendreOptions opt;
    double stat_scale;

    double g(double xi) const { return xi * p - finite_or_inf(f.eval(xi)); }
    bool finite_at(double xi) const { return finite_or_inf(f.eval(xi)) < kInf; }

    // Safeguarded Newton/bisection for f'(xi) = p on a bracket with
    // h(a) <= 0 <= h(b), h = f' - p nondecreasing.
    LegendreResult solve_interior(double a, double b, double ha, double hb) const {
        double xi = (ha == hb) ? 0.5 * (a + b) : (a * hb - b * ha) / (hb - ha);
        if (!(xi > a && xi < b)) xi = 0.5 * (a + b);
        double h = 0.0;
        for (int it = 0; it < 120; ++it) {
            h = f.deriv(xi) - p;
            if (std::abs(h) <= opt.stat_tol * stat_scale) break;
            if (h < 0.0) a = xi; else b = xi;
            double next = kInf;
            if (f.deriv2) {
                const double d2 = f.deriv2(xi);
                if (d2 > 0.0 && std::isfinite(d2)) next = xi - h / d2;
            }
            if (!(next > a && next < b)) next = 0.5 * (a + b);
            xi = next;
            if (b - a <= 1e-15 * (1.0 + std::abs(a) + std::abs(b))) {
                h = f.deriv(xi) - p;
                break;
            }
        }
        LegendreResult res;
        res.argmax = xi;
        res.value = g(xi);
        res.stationarity_residual = std::abs(h);
        res.status = ConjugateStatus::interior;
        return res;
    }

    // Supremum against a finite edge (domain hint edge or detected +inf edge).
    // `inner` is the last point with f finite; `edge` may itself be evaluable.
    LegendreResult boundary_result(double inner, double edge) const {
        LegendreResult res;
        res.status = ConjugateStatus::boundary;
        if (finite_at(edge)) {
            res.argmax = edge;
            res.value = g(edge);
            res.stationarity_residual =
                f.deriv ? std::abs(f.deriv(edge) - p) : 0.0;
            if (std::isnan(res.stationarity_residual) ||
                std::isinf(res.stationarity_residual))
                res.stationarity_residual = 0.0;
            return res;
        }
        // geometric approach sequence toward the edge
        double xi = inner;
        double gi = g(inner);
        double gap = edge - inner;
        for (int j = 0; j < 60; ++j) {
            gap *= 0.5;
            const double cand = edge - gap;
            if (!finite_at(cand)) break;
            const double gc = g(cand);
            if (gc < gi) break;  // value turned over: sup is interior-ish, keep best
            const double delta = gc - gi;
            xi = cand;
            gi = gc;
            if (delta <= opt.value_tol * (1.0 + std::abs(gi))) break;
        }
        res.argmax = xi;
        res.value = gi;
        res.stationarity_residual = f.deriv ? std::abs(f.deriv(xi) - p) : 0.0;
        return res;
    }

    // Objective keeps increasing toward an infinite domain end.
    LegendreResult open_end_result(int dir) const {
        double xi = dir * 1.0;
        if (!finite_at(xi)) return boundary_from_zero(dir);
        double gi = g(xi);
        double prev_delta = kInf;
        for (int k = 0; k < kMaxExpand; ++k) {
            const double next = xi * 2.0;
            if (std::abs(next) > kXiCap) break;
            if (!finite_at(next)) return boundary_scan(xi, next);
            const double gn = g(next);
            const double delta = gn - gi;
            if (delta <= opt.value_tol * (1.0 + std::abs(gn))) {
                LegendreResult res;
                res.argmax = next;
                res.value = gn;
                res.status = ConjugateStatus::asymptotic;
                res.stationarity_residual = f.deriv ? std::abs(f.deriv(next) - p) : 0.0;
                return res;
            }
            if (delta > prev_delta * 0.999 && k > 4) break;  // linear growth: diverging
            prev_delta = delta;
            xi = next;
            gi = gn;
        }
        LegendreResult res;
        res.argmax = xi;
        res.value = kInf;
        res.status = ConjugateStatus::unbounded;
        res.stationarity_residual = kInf;
        return res;
    }

    LegendreResult boundary_from_zero(int dir) const {
        return boundary_scan(0.0, dir * 1.0);
    }

    // f finite at `a`, infinite at `b`: bisect the effective edge, then close in.
    LegendreResult boundary_scan(double a, double b) const {
        for (int it = 0; it < 120; ++it) {
            const double mid = 0.5 * (a + b);
            if (finite_at(mid)) a = mid; else b = mid;
            if (std::abs(b - a) <= 1e-13 * (1.0 + std::abs(a))) break;
        }
        return boundary_result(a, b);
    }
};

}  // namespace

LegendreResult legendre_transform(const ConvexFn& f, double p, const LegendreOptions& opt) {
    Engine eng{f, p, opt, 1.0 + std::abs(p)};

    double xi0 = opt.xi0;
    if (xi0 <= f.domain_lo || xi0 >= f.domain_hi)
        xi0 = std::clamp(xi0, f.domain_lo + 1e-9, f.domain_hi - 1e-9);
    if (!eng.finite_at(xi0)) {
        if (eng.finite_at(0.0)) xi0 = 0.0;
        else throw ConvexityViolationError("legendre_transform: no finite starting point");
    }

    if (!f.deriv) {
        // derivative-free route: golden section on the bracketed concave objective
        auto g = [&](double x) { return eng.g(x); };
        double a = xi0, b = xi0;
        double ga = g(a);
        // expand both ways until the middle beats both ends
        double step = 1.0;
        double lo = xi0, hi = xi0;
        for (int k = 0; k < kMaxExpand; ++k) {
            lo = std::max(xi0 - step, f.domain_lo);
            hi = std::min(xi0 + step, f.domain_hi);
            const double gl = eng.finite_at(lo) ? g(lo) : -kInf;
            const double gh = eng.finite_at(hi) ? g(hi) : -kInf;
            if (gl <= ga && gh <= ga) break;
            if (gh > ga) { xi0 = hi; ga = gh; }
            else { xi0 = lo; ga = gl; }
            step *= 2.0;
            if (step > kXiCap) {
                LegendreResult res;
                res.argmax = xi0;
                res.value = kInf;
                res.status = ConjugateStatus::unbounded;
                return res;
            }
        }
        a = lo; b = hi;
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
        double g1 = g(x1), g2 = g(x2);
        for (int it = 0; it < 200 && (b - a) > 1e-12 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
            if (g1 < g2) { a = x1; x1 = x2; g1 = g2; x2 = a + phi * (b - a); g2 = g(x2); }
            else { b = x2; x2 = x1; g2 = g1; x1 = b - phi * (b - a); g1 = g(x1); }
        }
        LegendreResult res;
        res.argmax = 0.5 * (a + b);
        res.value = g(res.argmax);
        res.status = ConjugateStatus::interior;
        // central-difference residual as a stationarity certificate
        const double h = 1e-6 * (1.0 + std::abs(res.argmax));
        if (eng.finite_at(res.argmax - h) && eng.finite_at(res.argmax + h))
            res.stationarity_residual =
                std::abs((f.eval(res.argmax + h) - f.eval(res.argmax - h)) / (2.0 * h) - p);
        return res;
    }

    const double d0 = f.deriv(xi0) - p;
    if (std::abs(d0) <= opt.stat_tol * eng.stat_scale) {
        LegendreResult res;
        res.argmax = xi0;
        res.value = eng.g(xi0);
        res.stationarity_residual = std::abs(d0);
        res.status = ConjugateStatus::interior;
        return res;
    }

    const int dir = d0 < 0.0 ? +1 : -1;
    const double edge = dir > 0 ? f.domain_hi : f.domain_lo;
    double prev = xi0, hprev = d0;
    double step = 1.0;

    if (std::isinf(edge)) {
        for (int k = 0; k < kMaxExpand; ++k) {
            const double xi = prev + dir * step;
            if (std::abs(xi) > kXiCap) return eng.open_end_result(dir);
            if (!eng.finite_at(xi)) return eng.boundary_scan(prev, xi);
            const double h = f.deriv(xi) - p;
            if (h * hprev <= 0.0) {
                return dir > 0 ? eng.solve_interior(prev, xi, hprev, h)
                               : eng.solve_interior(xi, prev, h, hprev);
            }
            // slope test: f' must move monotonically in the search direction
            if (dir * (h - hprev) < -1e-7 * (1.0 + std::abs(hprev)))
                throw ConvexityViolationError("legendre_transform: derivative not monotone");
            prev = xi;
            hprev = h;
            step *= 2.0;
        }
        return eng.open_end_result(dir);
    }

    // finite hinted edge: approach it geometrically
    double gap = edge - prev;
    for (int k = 0; k < 120; ++k) {
        gap *= 0.5;
        const double xi = edge - gap;
        if ((dir > 0 && xi <= prev) || (dir < 0 && xi >= prev)) break;
        if (!eng.finite_at(xi)) return eng.boundary_scan(prev, xi);
        const double h = f.deriv(xi) - p;
        if (h * hprev <= 0.0) {
            return dir > 0 ? eng.solve_interior(prev, xi, hprev, h)
                           : eng.solve_interior(xi, prev, h, hprev);
        }
        prev = xi;
        hprev = h;
        if (std::abs(gap) <= 1e-13 * (1.0 + std::abs(edge))) break;
    }
    return eng.boundary_result(prev, edge);
}

ConvexFn make_mgf_fn(const LevyTriplet& t) {
    auto cache = std::make_shared<std::unordered_map<double, MgfValue>>();
    auto fetch = [cache, t](double xi) -> const MgfValue& {
        auto it = cache->find(xi);
        if (it == cache->end()) it = cache->emplace(xi, log_mgf(t, xi, 2)).first;
        return it->second;
    };
    ConvexFn fn;
    fn.eval = [fetch](double xi) { return fetch(xi).value; };
    fn.deriv = [fetch](double xi) { return fetch(xi).d1; };
    fn.deriv2 = [fetch](double xi) { return fetch(xi).d2; };
    t.mgf_domain_hint(fn.domain_lo, fn.domain_hi);
    return fn;
}

}  // namespace levyaction
