#include "levyaction/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "levyaction/errors.hpp"

namespace levyaction {

namespace {

constexpr long kBlockSize = 4096;
constexpr double kZ95 = 1.959963984540054;

int worker_count(long blocks) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("LEVY_ACTION_THREADS")) {
        const long cap = std::atol(env);
        if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
    }
    return static_cast<int>(std::min<long>(hw, std::max<long>(blocks, 1)));
}

// Runs fn(block_index) over all blocks on the worker pool; fn must only touch
// its own slot so the fold stays deterministic.
void parallel_blocks(long blocks, const std::function<void(long)>& fn) {
    const int workers = worker_count(blocks);
    if (workers <= 1) {
        for (long b = 0; b < blocks; ++b) fn(b);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([=, &fn]() {
            for (long b = w; b < blocks; b += workers) fn(b);
        });
    }
    for (std::thread& t : pool) t.join();
}

void wilson_interval(long hits, long n, double& lo, double& hi) {
    const double p = static_cast<double>(hits) / n;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    lo = std::max(0.0, center - half);
    hi = std::min(1.0, center + half);
}

}  // namespace

bool EventSpec::eval(const SamplePath& p) const {
    switch (kind) {
        case Kind::terminal_ge:
            return p.path.values.back() >= threshold;
        case Kind::sup_ge: {
            for (double v : p.path.values)
                if (std::abs(v) >= threshold) return true;
            return false;
        }
        case Kind::tube_le: {
            if (!reference || reference->n != p.path.n)
                throw GridMismatchError("tube event: reference grid must match samples");
            for (int k = 0; k <= p.path.n; ++k)
                if (std::abs(p.path.values[k] - reference->values[k]) > threshold)
                    return false;
            return true;
        }
        case Kind::custom:
            return predicate(p);
    }
    return false;
}

EventSpec EventSpec::terminal_ge(double c) {
    EventSpec e;
    e.kind = Kind::terminal_ge;
    e.threshold = c;
    return e;
}

EventSpec EventSpec::sup_ge(double c) {
    EventSpec e;
    e.kind = Kind::sup_ge;
    e.threshold = c;
    return e;
}

EventSpec EventSpec::tube_le(Path reference, double delta) {
    EventSpec e;
    e.kind = Kind::tube_le;
    e.threshold = delta;
    e.reference = std::move(reference);
    return e;
}

EventSpec EventSpec::custom(std::function<bool(const SamplePath&)> fn) {
    EventSpec e;
    e.kind = Kind::custom;
    e.predicate = std::move(fn);
    return e;
}

LdpEstimate estimate_event(const ModelSpec& model, const EventSpec& event,
                           long n_samples, int grid_n, RngStream rng) {
    if (n_samples < 100)
        throw ValidationError("estimate_event: need at least 100 samples");
    model.validate();

    const double cutoff = LevyIncrementSampler::auto_cutoff(model.triplet);
    const LevyIncrementSampler sampler(
        model.triplet, model.triplet.nu.is_density_backed() ? cutoff : 0.0);
    SimOptions sim;
    sim.premade_sampler = &sampler;

    const long blocks = (n_samples + kBlockSize - 1) / kBlockSize;
    std::vector<long> hits(blocks, 0);
    parallel_blocks(blocks, [&](long b) {
        RngStream block_rng = rng.substream(static_cast<std::uint64_t>(b));
        const long lo = b * kBlockSize;
        const long hi = std::min(n_samples, lo + kBlockSize);
        long h = 0;
        for (long i = lo; i < hi; ++i) {
            SamplePath p = euler_maruyama(model, grid_n,
                                          block_rng.substream(static_cast<std::uint64_t>(i - lo)),
                                          sim);
            if (event.eval(p)) ++h;
        }
        hits[b] = h;
    });

    long total = 0;
    for (long h : hits) total += h;  // integer fold: order-independent

    LdpEstimate est;
    est.epsilon = model.epsilon;
    est.n_samples = n_samples;
    est.p_hat = static_cast<double>(total) / n_samples;
    wilson_interval(total, n_samples, est.ci_lo, est.ci_hi);
    if (total == 0) {
        est.zero_hits = true;
        // rule-of-three upper bound keeps the rate table total
        est.rate_value = model.epsilon * std::log(3.0 / n_samples);
    } else {
        est.rate_value = model.epsilon * std::log(est.p_hat);
    }
    return est;
}

double neg_inf_action(const ModelSpec& model, const EventSpec& event, int grid_n) {
    ModelSpec m = model;
    switch (event.kind) {
        case EventSpec::Kind::terminal_ge: {
            const Path drift = drift_path(m, 0.0, grid_n);
            if (drift.values.back() >= event.threshold) return 0.0;
            BoundaryProblem bp;
            bp.functional = Functional::general;
            bp.model = m;
            bp.x0 = 0.0;
            bp.x1 = event.threshold;
            bp.n = grid_n;
            return -minimize_action(bp).action;
        }
        case EventSpec::Kind::sup_ge: {
            const Path drift = drift_path(m, 0.0, grid_n);
            for (double v : drift.values)
                if (std::abs(v) >= event.threshold) return 0.0;
            // hit +-c at a swept pin time, then follow the drift for free
            double best = kInf;
            for (double target : {event.threshold, -event.threshold}) {
                for (int j = 1; j <= 8; ++j) {
                    const int pin = grid_n * j / 8;
                    MinimizeOptions opts;
                    opts.free_right_endpoint = pin != grid_n;
                    std::vector<bool> pins(grid_n + 1, false);
                    pins[pin] = true;
                    opts.extra_pins = pins;
                    std::vector<double> init(grid_n + 1, 0.0);
                    for (int k = 0; k <= grid_n; ++k) {
                        const double t = static_cast<double>(k) / grid_n;
                        const double tp = static_cast<double>(pin) / grid_n;
                        init[k] = t <= tp ? target * t / tp : target;
                    }
                    opts.initial = init;
                    BoundaryProblem bp;
                    bp.functional = Functional::general;
                    bp.model = m;
                    bp.x0 = 0.0;
                    bp.x1 = target;
                    bp.n = grid_n;
                    const MinimizationResult res = minimize_action(bp, opts);
                    best = std::min(best, res.action);
                }
            }
            return -best;
        }
        case EventSpec::Kind::tube_le: {
            // delta -> 0 proxy: the action of the reference path itself
            if (!event.reference)
                throw ValidationError("tube event without a reference path");
            return -action_general(*event.reference, m);
        }
        case EventSpec::Kind::custom:
            throw ValidationError("neg_inf_action: custom events have no built-in infimum");
    }
    return 0.0;
}

RateTable rate_table(const ModelSpec& model, const EventSpec& event,
                     const std::vector<double>& epsilons, long n_samples, int grid_n,
                     RngStream rng, CorrectionModel correction) {
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1]))
            throw ValidationError("rate_table: epsilons must be decreasing");

    RateTable table;
    table.neg_inf_action = neg_inf_action(model, event, grid_n);

    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        ModelSpec m = model;
        m.epsilon = epsilons[i];
        table.rows.push_back(
            estimate_event(m, event, n_samples, grid_n,
                           rng.substream(static_cast<std::uint64_t>(i))));
    }

    // least squares for rate ~ c0 + c1 * basis(eps) [+ c2 * eps]
    std::vector<double> xs1, xs2, ys;
    for (const LdpEstimate& row : table.rows) {
        if (row.zero_hits) continue;
        ys.push_back(row.rate_value);
        switch (correction) {
            case CorrectionModel::eps_log:
                xs1.push_back(row.epsilon * std::log(1.0 / row.epsilon));
                break;
            case CorrectionModel::eps:
                xs1.push_back(row.epsilon);
                break;
            case CorrectionModel::eps_log_plus_eps:
                xs1.push_back(row.epsilon * std::log(1.0 / row.epsilon));
                xs2.push_back(row.epsilon);
                break;
        }
    }
    table.extrapolated_limit = ys.empty() ? 0.0 : ys.back();
    const std::size_t k = ys.size();
    if (k >= 2) {
        if (correction != CorrectionModel::eps_log_plus_eps || k < 3) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (std::size_t i = 0; i < k; ++i) {
                sx += xs1[i];
                sy += ys[i];
                sxx += xs1[i] * xs1[i];
                sxy += xs1[i] * ys[i];
            }
            const double det = k * sxx - sx * sx;
            if (std::abs(det) > 1e-14)
                table.extrapolated_limit = (sy * sxx - sx * sxy) / det;
        } else {
            // 3x3 normal equations for [1, x1, x2]
            double a[3][3] = {{static_cast<double>(k), 0, 0}, {0, 0, 0}, {0, 0, 0}};
            double b[3] = {0, 0, 0};
            for (std::size_t i = 0; i < k; ++i) {
                const double r[3] = {1.0, xs1[i], xs2[i]};
                for (int p = 0; p < 3; ++p) {
                    b[p] += r[p] * ys[i];
                    for (int q = 0; q < 3; ++q) a[p][q] += r[p] * r[q];
                }
            }
            // Gaussian elimination
            for (int p = 0; p < 3; ++p) {
                int piv = p;
                for (int q = p + 1; q < 3; ++q)
                    if (std::abs(a[q][p]) > std::abs(a[piv][p])) piv = q;
                std::swap(a[p], a[piv]);
                std::swap(b[p], b[piv]);
                if (std::abs(a[p][p]) < 1e-14) { b[0] = ys.back(); break; }
                for (int q = p + 1; q < 3; ++q) {
                    const double f = a[q][p] / a[p][p];
                    for (int r2 = p; r2 < 3; ++r2) a[q][r2] -= f * a[p][r2];
                    b[q] -= f * b[p];
                }
            }
            double c[3] = {0, 0, 0};
            for (int p = 2; p >= 0; --p) {
                double s = b[p];
                for (int q = p + 1; q < 3; ++q) s -= a[p][q] * c[q];
                c[p] = std::abs(a[p][p]) < 1e-14 ? 0.0 : s / a[p][p];
            }
            table.extrapolated_limit = c[0];
        }
    }
    return table;
}

double equivalence_gap_sde(const ModelSpec& model, int m, int grid_n, long n_samples,
                           double delta, RngStream rng) {
    if (m < 1 || grid_n % m != 0)
        throw GridMismatchError("equivalence_gap_sde: m must divide the grid size");
    const double cutoff = LevyIncrementSampler::auto_cutoff(model.triplet);
    const LevyIncrementSampler sampler(
        model.triplet, model.triplet.nu.is_density_backed() ? cutoff : 0.0);

    const long blocks = (n_samples + kBlockSize - 1) / kBlockSize;
    std::vector<long> exceed(blocks, 0);
    parallel_blocks(blocks, [&](long b) {
        RngStream block_rng = rng.substream(static_cast<std::uint64_t>(b));
        const long lo = b * kBlockSize;
        const long hi = std::min(n_samples, lo + kBlockSize);
        long cnt = 0;
        for (long i = lo; i < hi; ++i) {
            SimOptions sim;
            sim.premade_sampler = &sampler;
            RngStream path_rng = block_rng.substream(static_cast<std::uint64_t>(i - lo));
            const DrivingPaths d = sample_driving(model, grid_n, path_rng, sim);
            const SamplePath fine = fm_scheme(model, grid_n, d.g, d.h, sim);
            const SamplePath coarse = fm_scheme(model, m, d.g, d.h, sim);
            double sup = 0.0;
            for (int k = 0; k <= grid_n; ++k)
                sup = std::max(sup,
                               std::abs(fine.path.values[k] - coarse.path.values[k]));
            if (sup > delta) ++cnt;
        }
        exceed[b] = cnt;
    });
    long total = 0;
    for (long c : exceed) total += c;
    return static_cast<double>(total) / n_samples;
}

double equivalence_gap_levy(const LevyTriplet& triplet, int big_n, int cells_per_unit,
                            long n_samples, double delta, RngStream rng) {
    if (big_n < 1 || cells_per_unit < 1)
        throw ValidationError("equivalence_gap_levy: need positive sizes");
    const double cutoff = LevyIncrementSampler::auto_cutoff(triplet);
    const LevyIncrementSampler sampler(
        triplet, triplet.nu.is_density_backed() ? cutoff : 0.0);

    const long blocks = (n_samples + kBlockSize - 1) / kBlockSize;
    std::vector<long> exceed(blocks, 0);
    parallel_blocks(blocks, [&](long b) {
        RngStream block_rng = rng.substream(static_cast<std::uint64_t>(b));
        const long lo = b * kBlockSize;
        const long hi = std::min(n_samples, lo + kBlockSize);
        long cnt = 0;
        for (long i = lo; i < hi; ++i) {
            SimOptions sim;
            sim.premade_sampler = &sampler;
            SamplePath L = sample_levy_raw(triplet, big_n, cells_per_unit,
                                           block_rng.substream(static_cast<std::uint64_t>(i - lo)),
                                           sim);
            // A(t) = Z_N^L(t)/N, B(t) = (1/N) L(tN); compare on the fine [0,1] grid
            const double inv_n = 1.0 / big_n;
            double sup = 0.0;
            const int fine_cells = big_n * cells_per_unit;
            for (int j = 0; j <= fine_cells; ++j) {
                // chi_{1} convention: the t = 1 value is L(N)/N
                const int unit = j == fine_cells ? big_n : j / cells_per_unit;
                const double a = L.path.values[static_cast<std::size_t>(unit) * cells_per_unit] * inv_n;
                const double bb = L.path.values[j] * inv_n;
                sup = std::max(sup, std::abs(a - bb));
            }
            if (sup > delta) ++cnt;
        }
        exceed[b] = cnt;
    });
    long total = 0;
    for (long c : exceed) total += c;
    return static_cast<double>(total) / n_samples;
}

}  // namespace levyaction
