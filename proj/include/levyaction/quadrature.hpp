#pragma once

#include <vector>

namespace levyaction {

// Gauss-Legendre rule on [-1,1]; nodes/weights computed once per order by
// Newton iteration on P_n and cached.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussLegendreRule& gauss_legendre(int n);

// Integrates f over [a,b] with the order-n rule.
template <typename T, typename F>
T gl_integrate(F&& f, double a, double b, int n) {
    const GaussLegendreRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    T acc{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

}  // namespace levyaction
