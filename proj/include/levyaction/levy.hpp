#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace levyaction {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Atom {
    double z;  // jump size
    double w;  // mass > 0
};

// Controls the composite Gauss-Legendre evaluation of the jump integrals:
// decade panels on [rho, R] (plus the mirror interval), adaptive geometric
// tail extension past R, and a Taylor moment correction inside (-rho, rho).
struct QuadratureSpec {
    double truncation_radius = 50.0;
    int nodes_per_decade = 24;
    double small_jump_cutoff = 1e-6;  // rho
    double tail_rtol = 1e-13;         // tail panels stop below this relative share
    double declared_tolerance = 1e-8; // accuracy contract, checked by tests
    int max_tail_doublings = 60;
};

// int_{|y|<=rho} y^k nu(dy), k = 2,3,4; drives the inner Taylor correction.
struct InnerMoments {
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
};

enum class MeasureKind { zero, atoms, density, tempered_stable, exponential_tail };

// Jump intensity measure. Discrete measures evaluate exactly; density-backed
// measures (including the two builtins) go through the quadrature engine.
class LevyMeasure {
public:
    LevyMeasure() = default;

    static LevyMeasure zero();
    static LevyMeasure from_atoms(std::vector<Atom> atoms);
    // log_density extends evaluation into the range where the density itself
    // underflows but e^{xi y} * density is still significant (domain edges).
    static LevyMeasure from_density(std::function<double(double)> density,
                                    double support_lo, double support_hi,
                                    QuadratureSpec spec = {},
                                    std::optional<InnerMoments> inner = {},
                                    std::function<double(double)> log_density = nullptr);
    // density (alpha(alpha-1)/(2 Gamma(2-alpha))) e^{-m y} / y^{1+alpha} on y > 0
    static LevyMeasure tempered_stable(double alpha, double m);
    // density e^{-|z|^alpha} on the whole line
    static LevyMeasure exponential_tail(double alpha);

    MeasureKind kind() const { return kind_; }
    bool is_zero() const { return kind_ == MeasureKind::zero; }
    bool is_density_backed() const {
        return kind_ == MeasureKind::density || kind_ == MeasureKind::tempered_stable ||
               kind_ == MeasureKind::exponential_tail;
    }
    const std::vector<Atom>& atoms() const { return atoms_; }
    double density_at(double y) const { return density_ ? density_(y) : 0.0; }
    bool has_log_density() const { return static_cast<bool>(log_density_); }
    double log_density_at(double y) const { return log_density_(y); }
    double support_lo() const { return support_lo_; }
    double support_hi() const { return support_hi_; }
    const QuadratureSpec& quad() const { return quad_; }
    QuadratureSpec& quad() { return quad_; }
    double alpha() const { return alpha_; }
    double m() const { return m_; }

    // Largest decay rate the integrand inherits from the measure itself;
    // used to size quadrature sub-panels.
    double decay_hint() const;

    InnerMoments inner_moments(double rho) const;

    // nu({|y| > cut}); finite for every valid measure once cut > 0.
    double mass_above(double cut) const;

    // int_{lo < |y| <= hi} y nu(dy)
    double first_moment_between(double lo, double hi) const;

    // Checks mass positivity and int (y^2 ^ 1) nu(dy) < infinity (numerically
    // for densities); throws ValidationError.
    void validate() const;

private:
    MeasureKind kind_ = MeasureKind::zero;
    std::vector<Atom> atoms_;
    std::function<double(double)> density_;
    std::function<double(double)> log_density_;
    double support_lo_ = -kInf;
    double support_hi_ = kInf;
    QuadratureSpec quad_;
    double alpha_ = 0.0;
    double m_ = 0.0;
    // inner moments precomputed at a specific cutoff (first: the cutoff)
    std::optional<std::pair<double, InnerMoments>> declared_inner_;
};

// The generating data (a, sigma^2, nu) of the Levy-Khintchine formula.
struct LevyTriplet {
    double a = 0.0;
    double sigma2 = 0.0;
    LevyMeasure nu;

    void validate() const;

    // Interval on which Psi is known finite a priori; the evaluator still
    // detects divergence outside of it for user densities.
    void mgf_domain_hint(double& lo, double& hi) const;
};

struct SymbolValue {
    std::complex<double> value;
    double residual = 0.0;  // quadrature residual estimate, 0 for exact kinds
};

struct MgfValue {
    double value = 0.0;  // +inf when xi lies outside the effective domain
    double d1 = std::numeric_limits<double>::quiet_NaN();
    double d2 = std::numeric_limits<double>::quiet_NaN();
    double residual = 0.0;
    bool finite() const { return value < kInf; }
};

// Levy symbol psi(xi) = i a xi - sigma^2 xi^2 / 2 + int (e^{i xi y} - 1 - i xi y 1_{|y|<=1}) nu(dy).
SymbolValue psi_eval(const LevyTriplet& t, double xi);

// Log-MGF Psi(xi) = a xi + sigma^2 xi^2 / 2 + int (e^{xi y} - 1 - xi y 1_{|y|<=1}) nu(dy),
// together with Psi' and Psi'' for order >= 1 / >= 2. Returns +inf outside the
// numerically detected domain rather than throwing.
MgfValue log_mgf(const LevyTriplet& t, double xi, int order = 0);

// Throwing wrapper for call sites whose contract requires a finite value.
MgfValue log_mgf_strict(const LevyTriplet& t, double xi, int order = 0);

struct MomentDiagnostic {
    double lambda_max_tested = 0.0;
    bool finite = true;
    std::optional<double> first_failing_lambda;
};

// Probes Psi at +-lambda over a geometric grid up to lambda_max and bisects
// the first divergence to ~0.3% relative accuracy.
MomentDiagnostic check_exponential_moments(const LevyTriplet& t, double lambda_max);

// Closed forms for the tempered-stable builtin, used as cross-checks against
// the quadrature path. kappa1 is the mean of the |y|>1 jump part.
double tempered_stable_kappa1(double alpha, double m);
double tempered_stable_log_mgf(double alpha, double m, double xi);        // +inf for xi >= m
double tempered_stable_log_mgf_deriv(double alpha, double m, double xi);
std::complex<double> tempered_stable_symbol(double alpha, double m, double xi);

}  // namespace levyaction
