#pragma once

#include <functional>

#include "levyaction/levy.hpp"

namespace levyaction {

// Convex extended-real function of one variable. eval may return +inf;
// deriv/deriv2 are optional. The domain hint bounds the search, but an
// effective domain edge strictly inside the hint is also detected from
// +inf evaluations.
struct ConvexFn {
    std::function<double(double)> eval;
    std::function<double(double)> deriv;
    std::function<double(double)> deriv2;
    double domain_lo = -kInf;
    double domain_hi = kInf;
};

enum class ConjugateStatus {
    interior,          // stationary point found strictly inside the domain
    boundary,          // supremum sits on a (finite) domain edge
    asymptotic,        // supremum approached as xi -> +-inf, finite limit
    unbounded          // conjugate is +inf
};

struct LegendreResult {
    double value = 0.0;
    double argmax = 0.0;
    double stationarity_residual = 0.0;  // |f'(xi*) - p| where a derivative exists
    ConjugateStatus status = ConjugateStatus::interior;
};

struct LegendreOptions {
    double stat_tol = 1e-10;   // on |f'(xi) - p|, scaled by (1 + |p|)
    double value_tol = 1e-8;   // on limit estimates at boundaries
    double xi0 = 0.0;          // starting point, must have f(xi0) finite
};

// f*(p) = sup_xi { xi p - f(xi) } for convex extended-real f.
LegendreResult legendre_transform(const ConvexFn& f, double p,
                                  const LegendreOptions& opt = {});

// Psi of a triplet wrapped as a ConvexFn with memoized evaluations
// (cache local to the returned object; safe to copy per worker).
ConvexFn make_mgf_fn(const LevyTriplet& t);

}  // namespace levyaction
