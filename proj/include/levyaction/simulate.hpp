#pragma once

#include <memory>
#include <vector>

#include "levyaction/model.hpp"
#include "levyaction/path.hpp"
#include "levyaction/rng.hpp"

namespace levyaction {

enum class PathInterp { linear, step };

// Grid path with a cadlag interpretation flag: value constant on [t_k, t_{k+1})
// when interp == step. The grid covers [0, duration].
struct SamplePath {
    Path path;
    PathInterp interp = PathInterp::step;
    double duration = 1.0;
    bool overflowed = false;
};

class LevyIncrementSampler;

struct SimOptions {
    double small_jump_cutoff = 0.0;  // 0: choose automatically (see notes below)
    double overflow_bound = 1e9;
    double x0 = 0.0;
    // reuse a prebuilt sampler across many paths (tables are per-measure)
    const LevyIncrementSampler* premade_sampler = nullptr;
};

// Jump-part machinery for density measures: total rate above the cutoff and an
// inverse-CDF table for jump sizes, built once and reused across samples.
class LevyIncrementSampler {
public:
    LevyIncrementSampler(const LevyTriplet& triplet, double cutoff);

    double cutoff() const { return cutoff_; }
    double jump_rate() const { return rate_; }
    double small_jump_variance() const { return small_var_; }
    double effective_drift() const { return drift_; }  // a - int_{cutoff<|y|<=1} y nu
    double gaussian_sigma2() const { return sigma2_; }

    double sample_jump(RngStream& rng) const;

    // Picks the default cutoff: substituted variance <= 1e-4 of the jump
    // variance when that keeps the compound-Poisson rate below ~1e4 per unit
    // time, otherwise the rate cap wins.
    static double auto_cutoff(const LevyTriplet& triplet);

private:
    double cutoff_ = 0.0;
    double rate_ = 0.0;
    double small_var_ = 0.0;
    double drift_ = 0.0;
    double sigma2_ = 0.0;
    // discrete measures sample atoms directly
    std::vector<double> atom_z_;
    std::vector<double> atom_cum_;
    // density measures sample from a tabulated inverse CDF
    std::vector<double> tab_y_;
    std::vector<double> tab_cum_;
};

// sqrt(eps) B on [0,1]: Gaussian increments of variance 1/n, summed.
SamplePath sample_scaled_brownian(double epsilon, int n, RngStream rng);

// L^eps_t = eps L_{t/eps}: simulates L over [0, ceil(1/eps)] on n*ceil(1/eps)
// cells (drift + Gaussian + compound Poisson above the cutoff + matched-variance
// Gaussian below it), scales by eps and compresses onto the [0,1] grid.
SamplePath sample_scaled_levy(const LevyTriplet& triplet, double epsilon, int n,
                              RngStream rng, const SimOptions& opts = {});

// Driving pair (g, h) = (sqrt(eps) B, L^eps) on the model's grid.
struct DrivingPaths {
    SamplePath g;
    SamplePath h;
};
DrivingPaths sample_driving(const ModelSpec& model, int n, RngStream rng,
                            const SimOptions& opts = {});

// Euler scheme for dX = b dt + sqrt(eps) sigma dB + eta dL^eps, left-point
// coefficients; identical recursion to fm_scheme at m == n.
SamplePath euler_maruyama(const ModelSpec& model, int n, RngStream rng,
                          const SimOptions& opts = {});

// The discretized solution map: coefficients frozen at the left endpoints of
// the coarse grid t_k = k/m; driving paths must refine 1/m.
SamplePath fm_scheme(const ModelSpec& model, int m, const SamplePath& g,
                     const SamplePath& h, const SimOptions& opts = {});

// Z_n^L(t)/n = L(floor(n t))/n as a step path on [0,1]; the input path must
// cover [0, n] on a grid with an integer number of cells per unit time.
SamplePath discretize_zn(const SamplePath& levy_path, int n);

// Simulates the raw (unscaled) Levy process L over [0, T_units] with
// cells_per_unit cells per unit of time.
SamplePath sample_levy_raw(const LevyTriplet& triplet, int t_units, int cells_per_unit,
                           RngStream rng, const SimOptions& opts = {});

}  // namespace levyaction
