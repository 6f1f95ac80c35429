#include "levyaction/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "levyaction/errors.hpp"
#include "levyaction/quadrature.hpp"

namespace levyaction {

namespace {

// Raw increments of L over M cells of width dt, written into values[1..M]
// as a running sum starting from 0. Draw order per cell is fixed:
// Gaussian part, small-jump substitute, Poisson count, jump sizes.
void accumulate_levy(std::vector<double>& values, int M, double dt,
                     const LevyIncrementSampler& s, RngStream& rng) {
    const double sig = std::sqrt(s.gaussian_sigma2() * dt);
    const double small_sig = std::sqrt(s.small_jump_variance() * dt);
    const double drift_dt = s.effective_drift() * dt;
    const double rate_dt = s.jump_rate() * dt;
    double x = 0.0;
    for (int k = 0; k < M; ++k) {
        double inc = drift_dt;
        if (sig > 0.0) inc += sig * rng.gaussian();
        if (small_sig > 0.0) inc += small_sig * rng.gaussian();
        if (rate_dt > 0.0) {
            const std::uint64_t cnt = rng.poisson(rate_dt);
            for (std::uint64_t j = 0; j < cnt; ++j) inc += s.sample_jump(rng);
        }
        x += inc;
        values[k + 1] = x;
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// LevyIncrementSampler

LevyIncrementSampler::LevyIncrementSampler(const LevyTriplet& triplet, double cutoff)
    : cutoff_(cutoff), sigma2_(triplet.sigma2) {
    const LevyMeasure& nu = triplet.nu;
    if (nu.is_zero()) {
        drift_ = triplet.a;
        return;
    }
    if (nu.kind() == MeasureKind::atoms) {
        double cum = 0.0;
        double comp = 0.0;
        for (const Atom& a : nu.atoms()) {
            cum += a.w;
            atom_z_.push_back(a.z);
            atom_cum_.push_back(cum);
            if (std::abs(a.z) <= 1.0) comp += a.z * a.w;
        }
        rate_ = cum;
        drift_ = triplet.a - comp;
        return;
    }

    if (!(cutoff > 0.0))
        throw ValidationError("levy sampler: density measures need a positive cutoff");
    small_var_ = nu.inner_moments(cutoff).m2;
    drift_ = triplet.a - nu.first_moment_between(cutoff, 1.0);

    // piecewise-linear inverse-CDF table over both sides of {|y| > cutoff}
    struct Segment { double lo, hi, mass; };
    std::vector<Segment> neg, pos;
    for (int side : {+1, -1}) {
        double a = cutoff, b = kInf;
        if (side > 0) {
            a = std::max(a, nu.support_lo());
            b = nu.support_hi();
        } else {
            a = std::max(a, -nu.support_hi());
            b = -nu.support_lo();
        }
        if (!(a < b)) continue;
        std::vector<Segment>& dest = side > 0 ? pos : neg;
        double lo = a;
        double side_total = 0.0;
        for (int dec = 0; dec < 80 && lo < b && lo < 1e150; ++dec) {
            const double hi = std::min(lo * 10.0, b);
            const int sub = 64;
            double decade_mass = 0.0;
            const double r = std::pow(hi / lo, 1.0 / sub);
            double y0 = lo;
            double d0 = nu.density_at(side > 0 ? y0 : -y0);
            for (int i = 0; i < sub; ++i) {
                const double y1 = i + 1 == sub ? hi : y0 * r;
                const double d1 = nu.density_at(side > 0 ? y1 : -y1);
                const double mass = 0.5 * (d0 + d1) * (y1 - y0);
                if (mass > 0.0)
                    dest.push_back({side > 0 ? y0 : -y1, side > 0 ? y1 : -y0, mass});
                decade_mass += mass;
                y0 = y1;
                d0 = d1;
            }
            side_total += decade_mass;
            if (dec > 1 && side_total > 0.0 && decade_mass <= 1e-12 * side_total && hi < b)
                break;
            lo = hi;
        }
    }
    std::sort(neg.begin(), neg.end(), [](const Segment& x, const Segment& y) { return x.lo < y.lo; });
    std::sort(pos.begin(), pos.end(), [](const Segment& x, const Segment& y) { return x.lo < y.lo; });

    double cum = 0.0;
    auto push = [&](const std::vector<Segment>& segs) {
        for (const Segment& s : segs) {
            if (tab_y_.empty() || tab_y_.back() != s.lo) {
                tab_y_.push_back(s.lo);
                tab_cum_.push_back(cum);
            }
            cum += s.mass;
            tab_y_.push_back(s.hi);
            tab_cum_.push_back(cum);
        }
    };
    push(neg);
    push(pos);
    rate_ = cum;
}

double LevyIncrementSampler::sample_jump(RngStream& rng) const {
    const double u = rng.uniform() * rate_;
    if (!atom_cum_.empty()) {
        const auto it = std::upper_bound(atom_cum_.begin(), atom_cum_.end(), u);
        const std::size_t i = std::min<std::size_t>(it - atom_cum_.begin(), atom_z_.size() - 1);
        return atom_z_[i];
    }
    const auto it = std::upper_bound(tab_cum_.begin(), tab_cum_.end(), u);
    std::size_t i = it - tab_cum_.begin();
    if (i == 0) i = 1;
    if (i >= tab_cum_.size()) i = tab_cum_.size() - 1;
    const double c0 = tab_cum_[i - 1], c1 = tab_cum_[i];
    const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
    return tab_y_[i - 1] + frac * (tab_y_[i] - tab_y_[i - 1]);
}

double LevyIncrementSampler::auto_cutoff(const LevyTriplet& triplet) {
    const LevyMeasure& nu = triplet.nu;
    if (!nu.is_density_backed()) return 0.0;
    const double m2_total = log_mgf(triplet, 0.0, 2).d2 - triplet.sigma2;
    const double var_target = 1e-4 * std::max(m2_total, 1e-300);
    const double rate_cap = 1e4;

    // substituted variance grows with rho, compound-Poisson rate shrinks
    auto var_ok = [&](double rho) { return nu.inner_moments(rho).m2 <= var_target; };
    auto rate_ok = [&](double rho) { return nu.mass_above(rho) <= rate_cap; };

    double lo = 1e-12, hi = 1.0;
    if (var_ok(hi)) return hi;
    for (int it = 0; it < 60; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (var_ok(mid)) lo = mid; else hi = mid;
    }
    double rho = lo;  // largest cutoff meeting the variance target
    if (!rate_ok(rho)) {
        lo = rho;
        hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = std::sqrt(lo * hi);
            if (rate_ok(mid)) hi = mid; else lo = mid;
        }
        rho = hi;  // smallest cutoff meeting the rate cap
    }
    return rho;
}

// ---------------------------------------------------------------------------
// Samplers

SamplePath sample_scaled_brownian(double epsilon, int n, RngStream rng) {
    if (!(epsilon > 0.0) || n < 1)
        throw ValidationError("sample_scaled_brownian: need epsilon > 0 and n >= 1");
    SamplePath out;
    out.interp = PathInterp::linear;
    out.path.n = n;
    out.path.values.assign(n + 1, 0.0);
    const double step = std::sqrt(epsilon / n);
    double x = 0.0;
    for (int k = 0; k < n; ++k) {
        x += step * rng.gaussian();
        out.path.values[k + 1] = x;
    }
    return out;
}

SamplePath sample_levy_raw(const LevyTriplet& triplet, int t_units, int cells_per_unit,
                           RngStream rng, const SimOptions& opts) {
    std::optional<LevyIncrementSampler> own;
    if (!opts.premade_sampler) {
        const double cutoff =
            opts.small_jump_cutoff > 0.0 ? opts.small_jump_cutoff
                                         : LevyIncrementSampler::auto_cutoff(triplet);
        own.emplace(triplet, cutoff);
    }
    const LevyIncrementSampler& sampler = opts.premade_sampler ? *opts.premade_sampler : *own;
    SamplePath out;
    out.duration = t_units;
    out.path.n = t_units * cells_per_unit;
    out.path.values.assign(out.path.n + 1, 0.0);
    accumulate_levy(out.path.values, out.path.n, 1.0 / cells_per_unit, sampler, rng);
    return out;
}

SamplePath sample_scaled_levy(const LevyTriplet& triplet, double epsilon, int n,
                              RngStream rng, const SimOptions& opts) {
    if (!(epsilon > 0.0) || n < 1)
        throw ValidationError("sample_scaled_levy: need epsilon > 0 and n >= 1");
    std::optional<LevyIncrementSampler> own;
    if (!opts.premade_sampler) {
        const double cutoff =
            opts.small_jump_cutoff > 0.0 ? opts.small_jump_cutoff
                                         : LevyIncrementSampler::auto_cutoff(triplet);
        own.emplace(triplet, cutoff);
    }
    const LevyIncrementSampler& sampler = opts.premade_sampler ? *opts.premade_sampler : *own;

    const int N = static_cast<int>(std::ceil(1.0 / epsilon - 1e-12));
    const long long M = static_cast<long long>(n) * N;
    std::vector<double> fine(M + 1, 0.0);
    const double dt = (1.0 / epsilon) / static_cast<double>(M);
    accumulate_levy(fine, static_cast<int>(M), dt, sampler, rng);

    SamplePath out;
    out.path.n = n;
    out.path.values.resize(n + 1);
    for (int k = 0; k <= n; ++k)
        out.path.values[k] = epsilon * fine[static_cast<std::size_t>(k) * N];
    return out;
}

DrivingPaths sample_driving(const ModelSpec& model, int n, RngStream rng,
                            const SimOptions& opts) {
    DrivingPaths d;
    d.g = sample_scaled_brownian(model.epsilon, n, rng.substream(1));
    if (model.triplet.nu.is_zero() && model.triplet.a == 0.0 && model.triplet.sigma2 == 0.0) {
        d.h.path = Path::zero(n);
    } else {
        d.h = sample_scaled_levy(model.triplet, model.epsilon, n, rng.substream(2), opts);
    }
    return d;
}

SamplePath euler_maruyama(const ModelSpec& model, int n, RngStream rng,
                          const SimOptions& opts) {
    const DrivingPaths d = sample_driving(model, n, rng, opts);
    const std::vector<double>& gv = d.g.path.values;
    const std::vector<double>& hv = d.h.path.values;

    SamplePath out;
    out.path.n = n;
    out.path.values.assign(n + 1, 0.0);
    out.path.values[0] = opts.x0;
    const double dt = 1.0 / n;
    std::vector<double>& x = out.path.values;
    for (int k = 0; k < n; ++k) {
        x[k + 1] = x[k] + model.coeffs.b(x[k]) * dt +
                   model.coeffs.sigma(x[k]) * (gv[k + 1] - gv[k]) +
                   model.coeffs.eta(x[k]) * (hv[k + 1] - hv[k]);
        if (std::abs(x[k + 1]) > opts.overflow_bound || !std::isfinite(x[k + 1])) {
            out.overflowed = true;
            for (int j = k + 1; j <= n; ++j) x[j] = x[k];
            break;
        }
    }
    return out;
}

SamplePath fm_scheme(const ModelSpec& model, int m, const SamplePath& g,
                     const SamplePath& h, const SimOptions& opts) {
    const int n = g.path.n;
    if (h.path.n != n)
        throw GridMismatchError("fm_scheme: driving paths live on different grids");
    if (m < 1 || n % m != 0)
        throw GridMismatchError("fm_scheme: driving grid must refine 1/m");
    const int stride = n / m;
    const std::vector<double>& gv = g.path.values;
    const std::vector<double>& hv = h.path.values;

    SamplePath out;
    out.path.n = n;
    out.path.values.assign(n + 1, 0.0);
    out.path.values[0] = opts.x0;
    const double dt = 1.0 / n;
    std::vector<double>& x = out.path.values;
    for (int K = 0; K < n; K += stride) {
        const double xL = x[K];
        const double bL = model.coeffs.b(xL);
        const double sL = model.coeffs.sigma(xL);
        const double eL = model.coeffs.eta(xL);
        for (int j = K + 1; j <= K + stride; ++j) {
            x[j] = xL + bL * (static_cast<double>(j - K) * dt) + sL * (gv[j] - gv[K]) +
                   eL * (hv[j] - hv[K]);
            if (std::abs(x[j]) > opts.overflow_bound || !std::isfinite(x[j])) {
                out.overflowed = true;
                for (int r = j; r <= n; ++r) x[r] = x[j - 1];
                return out;
            }
        }
    }
    return out;
}

SamplePath discretize_zn(const SamplePath& levy_path, int n) {
    const double dur = levy_path.duration;
    if (std::abs(dur - n) > 1e-9)
        throw GridMismatchError("discretize_zn: input path must cover [0, n]");
    if (levy_path.path.n % n != 0)
        throw GridMismatchError("discretize_zn: need an integer number of cells per unit");
    const int per_unit = levy_path.path.n / n;
    SamplePath out;
    out.path.n = n;
    out.path.values.resize(n + 1);
    for (int j = 0; j <= n; ++j)
        out.path.values[j] =
            levy_path.path.values[static_cast<std::size_t>(j) * per_unit] / n;
    return out;
}

}  // namespace levyaction
