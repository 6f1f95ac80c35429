#include "levyaction/model_io.hpp"

#include <cmath>
#include <fstream>

#include "levyaction/errors.hpp"

namespace levyaction {

namespace {

const nlohmann::json& require(const nlohmann::json& j, const std::string& key,
                              const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        throw ValidationError("model: missing required key " + where + "/" + key);
    return j[key];
}

double require_number(const nlohmann::json& j, const std::string& key,
                      const std::string& where) {
    const nlohmann::json& v = require(j, key, where);
    if (!v.is_number())
        throw ValidationError("model: " + where + "/" + key + " must be a number");
    return v.get<double>();
}

std::string require_string(const nlohmann::json& j, const std::string& key,
                           const std::string& where) {
    const nlohmann::json& v = require(j, key, where);
    if (!v.is_string())
        throw ValidationError("model: " + where + "/" + key + " must be a string");
    return v.get<std::string>();
}

Expr compile(const std::string& text, const std::string& where) {
    try {
        return Expr::parse(text);
    } catch (const ParseError& e) {
        throw ValidationError("model: " + where + ": " + e.what());
    }
}

LevyMeasure parse_measure(const nlohmann::json& nu) {
    const std::string kind = require_string(nu, "kind", "/triplet/nu");
    const nlohmann::json params =
        nu.contains("params") ? nu["params"] : nlohmann::json::object();
    if (kind == "none") return LevyMeasure::zero();
    if (kind == "atoms") {
        const nlohmann::json& arr = require(params, "atoms", "/triplet/nu/params");
        if (!arr.is_array())
            throw ValidationError("model: /triplet/nu/params/atoms must be an array");
        std::vector<Atom> atoms;
        for (const auto& entry : arr) {
            if (!entry.is_array() || entry.size() != 2)
                throw ValidationError(
                    "model: each atom must be a [size, mass] pair at /triplet/nu/params/atoms");
            atoms.push_back({entry[0].get<double>(), entry[1].get<double>()});
        }
        return LevyMeasure::from_atoms(std::move(atoms));
    }
    if (kind == "tempered_stable") {
        const double alpha = require_number(params, "alpha", "/triplet/nu/params");
        const double m = require_number(params, "m", "/triplet/nu/params");
        return LevyMeasure::tempered_stable(alpha, m);
    }
    if (kind == "exponential_tail") {
        const double alpha = require_number(params, "alpha", "/triplet/nu/params");
        return LevyMeasure::exponential_tail(alpha);
    }
    if (kind == "density") {
        const std::string text = require_string(params, "expr", "/triplet/nu/params");
        Expr density = compile(text, "/triplet/nu/params/expr");
        QuadratureSpec spec;
        if (params.contains("R")) spec.truncation_radius = params["R"].get<double>();
        if (params.contains("nodes_per_decade"))
            spec.nodes_per_decade = params["nodes_per_decade"].get<int>();
        if (params.contains("rho")) spec.small_jump_cutoff = params["rho"].get<double>();
        double lo = -kInf, hi = kInf;
        if (params.contains("support")) {
            const auto& s = params["support"];
            if (!s.is_array() || s.size() != 2)
                throw ValidationError("model: /triplet/nu/params/support must be [lo, hi]");
            lo = s[0].get<double>();
            hi = s[1].get<double>();
        }
        return LevyMeasure::from_density([density](double y) { return density(y); }, lo, hi,
                                         spec);
    }
    throw ValidationError("model: unknown measure kind '" + kind + "' at /triplet/nu/kind");
}

}  // namespace

ModelDocument parse_model_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ValidationError("model: document must be a JSON object");

    ModelDocument out;
    const nlohmann::json& triplet = require(doc, "triplet", "");
    out.spec.triplet.a = require_number(triplet, "a", "/triplet");
    out.spec.triplet.sigma2 = require_number(triplet, "sigma2", "/triplet");
    out.spec.triplet.nu = parse_measure(require(triplet, "nu", "/triplet"));

    const nlohmann::json& coeffs = require(doc, "coefficients", "");
    out.b_source = require_string(coeffs, "b", "/coefficients");
    out.sigma_source = require_string(coeffs, "sigma", "/coefficients");
    out.eta_source = require_string(coeffs, "eta", "/coefficients");
    Expr b = compile(out.b_source, "/coefficients/b");
    Expr sigma = compile(out.sigma_source, "/coefficients/sigma");
    Expr eta = compile(out.eta_source, "/coefficients/eta");

    out.spec.epsilon = require_number(doc, "epsilon", "");
    if (!(out.spec.epsilon > 0.0))
        throw ValidationError("model: /epsilon must be positive");

    if (doc.contains("n")) {
        if (!doc["n"].is_number_integer())
            throw ValidationError("model: /n must be an integer");
        out.grid_n = doc["n"].get<int>();
        if (out.grid_n < 1) throw ValidationError("model: /n must be >= 1");
    }
    if (doc.contains("state_interval")) {
        const auto& s = doc["state_interval"];
        if (!s.is_array() || s.size() != 2)
            throw ValidationError("model: /state_interval must be [lo, hi]");
        out.state_lo = s[0].get<double>();
        out.state_hi = s[1].get<double>();
        if (!(out.state_lo < out.state_hi))
            throw ValidationError("model: /state_interval must be increasing");
    }

    // sampling validation over the declared state interval: finite values,
    // empirical Lipschitz and sup bounds
    const int samples = 201;
    double lip = 0.0, bs = 0.0, ss = 0.0, es = 0.0, smin = kInf;
    double pb = 0.0, ps = 0.0, pe = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = out.state_lo + (out.state_hi - out.state_lo) * i / (samples - 1);
        const double vb = b(x), vs = sigma(x), ve = eta(x);
        if (!std::isfinite(vb))
            throw ValidationError("model: /coefficients/b is not finite on the state interval");
        if (!std::isfinite(vs))
            throw ValidationError(
                "model: /coefficients/sigma is not finite on the state interval");
        if (!std::isfinite(ve))
            throw ValidationError(
                "model: /coefficients/eta is not finite on the state interval");
        bs = std::max(bs, std::abs(vb));
        ss = std::max(ss, std::abs(vs));
        es = std::max(es, std::abs(ve));
        smin = std::min(smin, vs);
        if (i > 0) {
            const double h = (out.state_hi - out.state_lo) / (samples - 1);
            lip = std::max({lip, std::abs(vb - pb) / h, std::abs(vs - ps) / h,
                            std::abs(ve - pe) / h});
        }
        pb = vb;
        ps = vs;
        pe = ve;
    }
    out.spec.coeffs.b = [b](double x) { return b(x); };
    out.spec.coeffs.sigma = [sigma](double x) { return sigma(x); };
    out.spec.coeffs.eta = [eta](double x) { return eta(x); };
    out.spec.coeffs.lipschitz_bound = lip;
    out.spec.coeffs.b_sup = bs;
    out.spec.coeffs.sigma_sup = ss;
    out.spec.coeffs.eta_sup = es;
    if (doc.contains("sigma_min"))
        out.spec.coeffs.sigma_min = doc["sigma_min"].get<double>();

    out.spec.validate();
    return out;
}

ModelDocument parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("model: cannot open file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("model: invalid JSON in " + path + ": " + e.what());
    }
    return parse_model_json(doc);
}

}  // namespace levyaction
