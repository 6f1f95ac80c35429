#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace levyaction {

// Invalid user-supplied data: model documents, parameter ranges, malformed paths.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature failed to reach its declared tolerance; carries the residual estimate.
struct QuadratureError : std::runtime_error {
    double residual;
    QuadratureError(const std::string& what, double res)
        : std::runtime_error(what), residual(res) {}
};

// Psi(xi) requested where the exponential moment diverges and finiteness is a precondition.
struct InfiniteMomentError : std::runtime_error {
    double xi;
    explicit InfiniteMomentError(double xi_)
        : std::runtime_error("exponential moment diverges at xi = " + std::to_string(xi_)),
          xi(xi_) {}
};

// sigma(x) fell below the declared positive lower bound along a path.
struct DegenerateDiffusionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A function handed to the Legendre engine failed the convexity slope test.
struct ConvexityViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Joint-action constraint zeta = b + sigma*u + eta*v has no solution on some cells.
struct InfeasibleConstraintError : std::runtime_error {
    std::vector<int> cells;
    InfeasibleConstraintError(const std::string& what, std::vector<int> cells_)
        : std::runtime_error(what), cells(std::move(cells_)) {}
};

// Grids of two paths (or a path and a scheme) do not nest as required.
struct GridMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exponential tilt cannot reach the requested jump flux.
struct TiltError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Expression text rejected by the coefficient grammar; offset is 0-based.
struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(const std::string& what, std::size_t off)
        : std::runtime_error(what), offset(off) {}
};

}  // namespace levyaction
