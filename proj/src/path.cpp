#include "levyaction/path.hpp"

#include <algorithm>
#include <cmath>

#include "levyaction/errors.hpp"

namespace levyaction {

double Path::at(double t) const {
    if (t <= 0.0) return values.front();
    if (t >= 1.0) return values.back();
    const double u = t * n;
    const int k = std::min(static_cast<int>(u), n - 1);
    const double frac = u - k;
    return values[k] + frac * (values[k + 1] - values[k]);
}

void Path::validate() const {
    if (n < 1) throw ValidationError("path: n must be >= 1");
    if (values.size() != static_cast<std::size_t>(n) + 1)
        throw ValidationError("path: values must hold n+1 entries");
    for (double v : values)
        if (!std::isfinite(v)) throw ValidationError("path: values must be finite");
}

Path Path::line(double x0, double x1, int n) {
    Path p;
    p.n = n;
    p.values.resize(n + 1);
    for (int k = 0; k <= n; ++k)
        p.values[k] = x0 + (x1 - x0) * static_cast<double>(k) / n;
    return p;
}

Path Path::zero(int n) { return line(0.0, 0.0, n); }

Path Path::from_function(const std::function<double(double)>& f, int n) {
    Path p;
    p.n = n;
    p.values.resize(n + 1);
    for (int k = 0; k <= n; ++k) p.values[k] = f(static_cast<double>(k) / n);
    return p;
}

nlohmann::json Path::to_json() const {
    return nlohmann::json{{"n", n}, {"values", values}, {"start", values.front()}};
}

Path Path::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("path json: expected an object");
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw ValidationError("path json: /n must be an integer");
    if (!j.contains("values") || !j["values"].is_array())
        throw ValidationError("path json: /values must be an array");
    Path p;
    p.n = j["n"].get<int>();
    p.values = j["values"].get<std::vector<double>>();
    p.validate();
    if (j.contains("start")) {
        const double declared = j["start"].get<double>();
        if (declared != p.values.front())
            throw ValidationError("path json: /start disagrees with values[0]");
    }
    return p;
}

double StepFunction::at(double t) const {
    for (const StepPiece& p : pieces)
        if (t >= p.s && t < p.t) return p.c;
    return 0.0;
}

void StepFunction::validate() const {
    double prev_t = 0.0;
    for (const StepPiece& p : pieces) {
        if (!(p.s > 0.0) || !(p.s < p.t) || !(p.t <= 1.0))
            throw ValidationError("step function: need 0 < s_j < t_j <= 1");
        if (!(p.s >= prev_t))
            throw ValidationError("step function: pieces must be ordered and disjoint");
        if (!std::isfinite(p.c)) throw ValidationError("step function: c_j must be finite");
        prev_t = p.t;
    }
}

}  // namespace levyaction
