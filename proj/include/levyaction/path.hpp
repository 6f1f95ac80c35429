#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace levyaction {

// Piecewise-linear function on the uniform grid t_k = k/n. values[0] is the
// declared start; the slope n*(values[k+1]-values[k]) is constant on each cell.
struct Path {
    int n = 1;
    std::vector<double> values;  // size n+1

    double start() const { return values.front(); }
    double end() const { return values.back(); }
    double slope(int k) const { return n * (values[k + 1] - values[k]); }
    double midpoint_value(int k) const { return 0.5 * (values[k] + values[k + 1]); }

    // linear interpolation at t in [0,1]
    double at(double t) const;

    void validate() const;

    static Path line(double x0, double x1, int n);
    static Path zero(int n);
    static Path from_function(const std::function<double(double)>& f, int n);

    nlohmann::json to_json() const;
    static Path from_json(const nlohmann::json& j);
};

// alpha(t) = sum_j c_j 1_{[s_j, t_j)}(t) with 0 < s_1 < t_1 <= s_2 < ... <= 1.
struct StepPiece {
    double c;
    double s;
    double t;
};

struct StepFunction {
    std::vector<StepPiece> pieces;

    double at(double t) const;
    void validate() const;
};

}  // namespace levyaction
