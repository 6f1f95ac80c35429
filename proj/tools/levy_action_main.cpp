// Command-line surface: model documents in, tables and paths out.
//
// Subcommands: symbol, legendre, action, minimize, simulate, rate-table,
// equivalence. All numeric output uses '.' decimals with 17 significant
// digits so doubles round-trip. Exit codes: 0 success, 1 validation error,
// 2 numerical failure. Output files are written only after a subcommand
// has fully succeeded.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "levyaction/action.hpp"
#include "levyaction/errors.hpp"
#include "levyaction/minimize.hpp"
#include "levyaction/model_io.hpp"
#include "levyaction/montecarlo.hpp"
#include "levyaction/simulate.hpp"

using namespace levyaction;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// collect output in memory; nothing is written on failure
struct OutFile {
    std::string path;
    std::ostringstream body;

    void commit() const {
        if (path.empty()) {
            std::cout << body.str();
            return;
        }
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw ValidationError("cannot open output file " + path);
        out << body.str();
    }
};

Functional parse_functional(const std::string& name) {
    if (name == "brownian") return Functional::brownian;
    if (name == "sde_brownian") return Functional::sde_brownian;
    if (name == "levy") return Functional::levy;
    if (name == "general") return Functional::general;
    if (name == "joint") return Functional::joint;
    throw ValidationError("unknown functional '" + name + "'");
}

EventSpec parse_event(const std::string& text) {
    // grammar: terminal>=C | sup>=C | tube<=DELTA@path.json
    auto starts = [&](const char* p) { return text.rfind(p, 0) == 0; };
    if (starts("terminal>=")) return EventSpec::terminal_ge(std::stod(text.substr(10)));
    if (starts("sup>=")) return EventSpec::sup_ge(std::stod(text.substr(5)));
    if (starts("tube<=")) {
        const std::string rest = text.substr(6);
        const std::size_t at = rest.find('@');
        if (at == std::string::npos)
            throw ValidationError("tube event needs tube<=DELTA@path.json");
        const double delta = std::stod(rest.substr(0, at));
        std::ifstream in(rest.substr(at + 1));
        if (!in) throw ValidationError("cannot open event path " + rest.substr(at + 1));
        nlohmann::json j;
        in >> j;
        return EventSpec::tube_le(Path::from_json(j), delta);
    }
    throw ValidationError("unknown event '" + text +
                          "' (use terminal>=C, sup>=C or tube<=D@path.json)");
}

Path load_path(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open path file " + file);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("invalid path JSON: ") + e.what());
    }
    return Path::from_json(j);
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"action functionals, minimum-action paths and LDP diagnostics "
                 "for SDEs driven by Brownian and Levy noise"};
    app.require_subcommand(1);

    std::string model_file, out_file, path_file, functional_name = "general";
    std::string event_text, eps_text = "0.5,0.25,0.1", kind = "sde", mode = "sde";
    double xi_min = -5.0, xi_max = 5.0, p_min = -3.0, p_max = 3.0;
    int steps = 101, n_override = 0, m_coarse = 0;
    double x0 = 0.0, x1 = 1.0, delta = 0.1;
    long samples = 100000;
    std::uint64_t seed = 1, stream = 0;
    std::string m_list_text = "2,4,8";

    auto* symbol = app.add_subcommand("symbol", "tabulate psi and Psi over a xi grid");
    symbol->add_option("--model", model_file)->required();
    symbol->add_option("--xi-min", xi_min);
    symbol->add_option("--xi-max", xi_max);
    symbol->add_option("--steps", steps);
    symbol->add_option("--out", out_file);

    auto* legendre = app.add_subcommand("legendre", "tabulate the conjugate Psi*");
    legendre->add_option("--model", model_file)->required();
    legendre->add_option("--p-min", p_min);
    legendre->add_option("--p-max", p_max);
    legendre->add_option("--steps", steps);
    legendre->add_option("--out", out_file);

    auto* action = app.add_subcommand("action", "evaluate a functional on a path file");
    action->add_option("--model", model_file);
    action->add_option("--functional", functional_name);
    action->add_option("--path", path_file)->required();
    action->add_option("--out", out_file);

    auto* minimize = app.add_subcommand("minimize", "solve the fixed-endpoint problem");
    minimize->add_option("--model", model_file)->required();
    minimize->add_option("--functional", functional_name);
    minimize->add_option("--x0", x0);
    minimize->add_option("--x1", x1)->required();
    minimize->add_option("--n", n_override);
    minimize->add_option("--out", out_file);

    auto* simulate = app.add_subcommand("simulate", "emit sample paths");
    simulate->add_option("--model", model_file)->required();
    simulate->add_option("--kind", kind)->check(CLI::IsMember({"brownian", "levy", "sde"}));
    simulate->add_option("--samples", samples);
    simulate->add_option("--n", n_override);
    simulate->add_option("--seed", seed);
    simulate->add_option("--stream", stream);
    simulate->add_option("--format", mode)->check(CLI::IsMember({"csv", "json"}));
    simulate->add_option("--out", out_file);

    auto* rate = app.add_subcommand("rate-table", "LDP verification run");
    rate->add_option("--model", model_file)->required();
    rate->add_option("--event", event_text)->required();
    rate->add_option("--eps", eps_text);
    rate->add_option("--samples", samples);
    rate->add_option("--n", n_override);
    rate->add_option("--seed", seed);
    rate->add_option("--stream", stream);
    rate->add_option("--out", out_file);

    auto* equiv = app.add_subcommand("equivalence", "approximation diagnostics");
    equiv->add_option("--model", model_file)->required();
    equiv->add_option("--mode", mode)->check(CLI::IsMember({"sde", "levy"}));
    equiv->add_option("--m-list", m_list_text);
    equiv->add_option("--delta", delta);
    equiv->add_option("--samples", samples);
    equiv->add_option("--n", n_override);
    equiv->add_option("--seed", seed);
    equiv->add_option("--stream", stream);
    equiv->add_option("--out", out_file);

    CLI11_PARSE(app, argc, argv);

    OutFile out;
    out.path = out_file;

    if (symbol->parsed()) {
        const ModelDocument doc = parse_model_file(model_file);
        out.body << "xi,re_psi,im_psi,Psi,Psi1,Psi2,residual\n";
        for (int i = 0; i < steps; ++i) {
            const double xi = xi_min + (xi_max - xi_min) * i / std::max(1, steps - 1);
            const SymbolValue s = psi_eval(doc.spec.triplet, xi);
            const MgfValue m = log_mgf(doc.spec.triplet, xi, 2);
            out.body << fmt(xi) << ',' << fmt(s.value.real()) << ',' << fmt(s.value.imag())
                     << ',' << fmt(m.value) << ',' << fmt(m.d1) << ',' << fmt(m.d2) << ','
                     << fmt(std::max(s.residual, m.residual)) << '\n';
        }
    } else if (legendre->parsed()) {
        const ModelDocument doc = parse_model_file(model_file);
        const ConvexFn psi = make_mgf_fn(doc.spec.triplet);
        out.body << "p,psi_star,argmax,stationarity_residual,status\n";
        for (int i = 0; i < steps; ++i) {
            const double p = p_min + (p_max - p_min) * i / std::max(1, steps - 1);
            const LegendreResult r = legendre_transform(psi, p);
            out.body << fmt(p) << ',' << fmt(r.value) << ',' << fmt(r.argmax) << ','
                     << fmt(r.stationarity_residual) << ',' << static_cast<int>(r.status)
                     << '\n';
        }
    } else if (action->parsed()) {
        const Path phi = load_path(path_file);
        const Functional f = parse_functional(functional_name);
        ModelSpec spec;
        if (!model_file.empty()) {
            spec = parse_model_file(model_file).spec;
        } else if (f == Functional::brownian) {
            spec.coeffs = CoefficientSet::constant(0.0, 1.0, 0.0);
        } else {
            throw ValidationError("--model is required for functionals other than brownian");
        }
        const double value = evaluate_functional(f, phi, spec);
        out.body << fmt(value) << '\n';
    } else if (minimize->parsed()) {
        const ModelDocument doc = parse_model_file(model_file);
        BoundaryProblem bp;
        bp.functional = parse_functional(functional_name);
        bp.model = doc.spec;
        bp.x0 = x0;
        bp.x1 = x1;
        bp.n = n_override > 0 ? n_override : doc.grid_n;
        const MinimizationResult res = minimize_action(bp);
        nlohmann::json j = res.path.to_json();
        j["action"] = res.action;
        j["grad_norm"] = res.grad_norm;
        j["el_residual"] = res.el_residual;
        j["iterations"] = res.iterations;
        j["converged"] = res.converged;
        out.body << j.dump(2) << '\n';
    } else if (simulate->parsed()) {
        const ModelDocument doc = parse_model_file(model_file);
        const int n = n_override > 0 ? n_override : doc.grid_n;
        const double cutoff = LevyIncrementSampler::auto_cutoff(doc.spec.triplet);
        const LevyIncrementSampler sampler(
            doc.spec.triplet, doc.spec.triplet.nu.is_density_backed() ? cutoff : 0.0);
        SimOptions sim;
        sim.premade_sampler = &sampler;
        nlohmann::json paths = nlohmann::json::array();
        if (mode == "csv") out.body << "sample,t,value\n";
        for (long s = 0; s < samples; ++s) {
            RngStream rng(seed, stream + static_cast<std::uint64_t>(s));
            SamplePath p;
            if (kind == "brownian") p = sample_scaled_brownian(doc.spec.epsilon, n, rng);
            else if (kind == "levy")
                p = sample_scaled_levy(doc.spec.triplet, doc.spec.epsilon, n, rng, sim);
            else p = euler_maruyama(doc.spec, n, rng, sim);
            if (mode == "csv") {
                for (int k = 0; k <= n; ++k)
                    out.body << s << ',' << fmt(static_cast<double>(k) / n) << ','
                             << fmt(p.path.values[k]) << '\n';
            } else {
                paths.push_back(p.path.to_json());
            }
        }
        if (mode == "json") out.body << paths.dump(2) << '\n';
    } else if (rate->parsed()) {
        const ModelDocument doc = parse_model_file(model_file);
        const EventSpec event = parse_event(event_text);
        const std::vector<double> epsilons = parse_csv_doubles(eps_text);
        const int n = n_override > 0 ? n_override : doc.grid_n;
        const RateTable table =
            rate_table(doc.spec, event, epsilons, samples, n, RngStream(seed, stream));
        out.body << "epsilon,p_hat,ci_lo,ci_hi,rate_value,neg_inf_S\n";
        for (const LdpEstimate& row : table.rows)
            out.body << fmt(row.epsilon) << ',' << fmt(row.p_hat) << ',' << fmt(row.ci_lo)
                     << ',' << fmt(row.ci_hi) << ',' << fmt(row.rate_value) << ','
                     << fmt(table.neg_inf_action) << '\n';
        // extrapolated limit as a trailing epsilon=0 row
        out.body << fmt(0.0) << ",,,," << fmt(table.extrapolated_limit) << ','
                 << fmt(table.neg_inf_action) << '\n';
    } else if (equiv->parsed()) {
        const ModelDocument doc = parse_model_file(model_file);
        const int n = n_override > 0 ? n_override : doc.grid_n;
        const std::vector<double> ms = parse_csv_doubles(m_list_text);
        if (mode == "levy") {
            out.body << "inv_epsilon,tail_frequency\n";
            for (double mv : ms) {
                const int big_n = static_cast<int>(mv);
                const double freq = equivalence_gap_levy(doc.spec.triplet, big_n, n, samples,
                                                         delta, RngStream(seed, stream));
                out.body << big_n << ',' << fmt(freq) << '\n';
            }
        } else {
            out.body << "m,tail_frequency\n";
            for (double mv : ms) {
                const int m = static_cast<int>(mv);
                const double freq =
                    equivalence_gap_sde(doc.spec, m, n, samples, delta, RngStream(seed, stream));
                out.body << m << ',' << fmt(freq) << '\n';
            }
        }
    }

    out.commit();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 1;
    } catch (const GridMismatchError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
}
