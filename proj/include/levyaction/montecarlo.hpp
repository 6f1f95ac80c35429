#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "levyaction/minimize.hpp"
#include "levyaction/simulate.hpp"

namespace levyaction {

// Deterministic event predicate on the grid representation of a sample path.
struct EventSpec {
    enum class Kind { terminal_ge, sup_ge, tube_le, custom };
    Kind kind = Kind::terminal_ge;
    double threshold = 0.0;
    std::optional<Path> reference;  // tube events
    std::function<bool(const SamplePath&)> predicate;  // custom events

    bool eval(const SamplePath& p) const;

    static EventSpec terminal_ge(double c);
    static EventSpec sup_ge(double c);
    static EventSpec tube_le(Path reference, double delta);
    static EventSpec custom(std::function<bool(const SamplePath&)> fn);
};

struct LdpEstimate {
    double epsilon = 0.0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double rate_value = 0.0;  // eps * ln p_hat; rule-of-three bound when zero hits
    long n_samples = 0;
    bool zero_hits = false;
};

// Crude Monte Carlo with a Wilson 95% interval. Work is split into fixed
// blocks with per-block substreams, so results are byte-identical for any
// worker count. LEVY_ACTION_THREADS caps the worker pool.
LdpEstimate estimate_event(const ModelSpec& model, const EventSpec& event,
                           long n_samples, int grid_n, RngStream rng);

enum class CorrectionModel { eps_log, eps, eps_log_plus_eps };

struct RateTable {
    std::vector<LdpEstimate> rows;
    double neg_inf_action = 0.0;   // -inf S over the event, from the minimizer
    double extrapolated_limit = 0.0;
};

RateTable rate_table(const ModelSpec& model, const EventSpec& event,
                     const std::vector<double>& epsilons, long n_samples, int grid_n,
                     RngStream rng, CorrectionModel correction = CorrectionModel::eps_log);

// -inf of the action functional over the event set (1-D endpoint/pin sweep).
double neg_inf_action(const ModelSpec& model, const EventSpec& event, int grid_n);

// Empirical P(sup-distance > delta) between the m-coarse scheme X^{eps,m} and
// the reference scheme on the fine grid, sharing driving noise pathwise.
double equivalence_gap_sde(const ModelSpec& model, int m, int grid_n, long n_samples,
                           double delta, RngStream rng);

// Empirical P(||Z_N/N - eps L(./eps)||_inf > delta) with eps = 1/N, both built
// from one underlying trajectory of L.
double equivalence_gap_levy(const LevyTriplet& triplet, int big_n, int cells_per_unit,
                            long n_samples, double delta, RngStream rng);

}  // namespace levyaction
