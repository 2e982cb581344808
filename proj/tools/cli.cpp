#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "invmean/error.hpp"
#include "invmean/expr.hpp"
#include "invmean/invariance.hpp"
#include "invmean/limit_like.hpp"
#include "invmean/mean.hpp"
#include "invmean/orbit.hpp"
#include "invmean/transfinite.hpp"
#include "report_json.hpp"

namespace invmean::cli {

namespace {

using io::Json;

struct RunConfig {
    std::string pair;
    std::string mean_m;
    std::string mean_n;
    std::vector<double> domain;
    double gap_tol = 1e-12;
    std::size_t max_steps = 100'000;
    std::size_t max_limit_stages = 64;
    std::size_t window = 16;
    std::size_t grid_nodes = 101;
    std::size_t random_pairs = 1000;
    std::uint64_t seed = GridSpec{}.seed;
    double tol = kResidualTolerance;
    std::string format = "csv";
    std::string out_path;

    GridSpec grid() const { return GridSpec{grid_nodes, random_pairs, seed}; }

    ConvergencePolicy policy() const {
        ConvergencePolicy p{gap_tol, max_steps};
        p.validate();
        return p;
    }

    StagePolicy stage_policy() const {
        StagePolicy p;
        p.inner = policy();
        p.max_limit_stages = max_limit_stages;
        p.validate();
        return p;
    }

    void validate() const {
        if (window < 2) throw InvalidArgument("--window must be at least 2");
        if (grid_nodes < 1) throw InvalidArgument("--grid must be at least 1");
        if (!(tol > 0.0)) throw InvalidArgument("--tol must be positive");
        policy();
        stage_policy();
    }
};

struct EvalArgs {
    double x = 0.0;
    double y = 0.0;
    std::string target = "tr";
    std::string phi = "liminf";
    std::size_t stage = 1;
    std::string component = "a";
};

struct OrbitArgs {
    double x = 0.0;
    double y = 0.0;
};

struct CheckArgs {
    std::string k;
    std::vector<std::string> candidates;
    std::string phi;
    std::vector<std::string> specs;
    double jump_factor = 4.0;
};

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fixed17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

Interval resolve_domain(const RunConfig& c) {
    if (!c.domain.empty()) {
        if (c.domain.size() != 2) throw InvalidArgument("--domain takes two values LO HI");
        return Interval(c.domain[0], c.domain[1]);
    }
    if (c.pair == "agm") return Interval(1.0, 2.0);
    return Interval(0.0, 10.0);
}

MeanPair build_pair(const RunConfig& c) {
    const bool custom = !c.mean_m.empty() || !c.mean_n.empty();
    if (custom && !c.pair.empty()) throw InvalidArgument("give either --pair or --mean-m/--mean-n");
    if (custom && (c.mean_m.empty() || c.mean_n.empty()))
        throw InvalidArgument("--mean-m and --mean-n go together");

    const Interval domain = resolve_domain(c);
    if (!custom) {
        if (c.pair.empty() || c.pair == "example31") return make_example_pair(domain);
        Mean a = make_builtin(BuiltinKind::arithmetic, domain);
        Mean g = make_builtin(BuiltinKind::geometric, domain);
        return MeanPair(std::move(a), std::move(g), false);
    }
    const GridSpec grid = c.grid();
    Mean m = mean_from_text(c.mean_m, domain, grid);
    Mean n = mean_from_text(c.mean_n, domain, grid);
    const bool comparable = comparable_on_grid(m, n, grid);
    return MeanPair(std::move(m), std::move(n), comparable);
}

Mean candidate_mean(const std::string& text, const MeanPair& pair, const RunConfig& c) {
    if (text == "lo" || text == "up") {
        const bool lower = text == "lo";
        const ConvergencePolicy policy = c.policy();
        return Mean(lower ? "Lo" : "Up", pair.domain(), [pair, policy, lower](double x, double y) {
            const LowerUpper r = lower_upper(pair, x, y, policy);
            return lower ? r.lo : r.up;
        });
    }
    if (text == "tr") return transfinite_mean(pair, c.stage_policy());
    if (starts_with(text, "bo:")) return bo_mean(pair, LimitLikeSpec::parse(text.substr(3)), c.policy(), c.window);
    return mean_from_text(text, pair.domain(), c.grid());
}

struct Value {
    double value = 0.0;
    bool converged = true;
};

Value evaluate_target(const EvalArgs& a, const MeanPair& pair, const RunConfig& c) {
    const Interval& d = pair.domain();
    if (!d.contains(a.x) || !d.contains(a.y)) throw DomainError("(x, y) lies outside the domain");

    if (a.target == "lo" || a.target == "up") {
        const LowerUpper r = lower_upper(pair, a.x, a.y, c.policy());
        return {a.target == "lo" ? r.lo : r.up, r.converged};
    }
    if (a.target == "tr") {
        const TransfiniteReport r = transfinite_iterate(pair, a.x, a.y, c.stage_policy());
        return {r.tr_value, !r.approximate};
    }
    if (a.target == "bo") {
        const LimitLikeSpec spec = LimitLikeSpec::parse(a.phi);
        if (a.x == a.y) return {a.x, true};
        OrbitTrace trace = iterate(pair, a.x, a.y, c.policy());
        extend_orbit(pair, trace, (c.window + 1) / 2);
        const auto seq = interleave(trace);
        return {apply_phi(spec, seq, c.window, d), trace.converged};
    }
    // stage
    if (a.stage < 1) throw InvalidArgument("--stage must be at least 1");
    const TransfiniteReport r = transfinite_iterate(pair, a.x, a.y, c.stage_policy());
    std::size_t seen = 0;
    for (const StageRecord& s : r.stage_pairs) {
        if (s.kind != StageKind::limit || ++seen < a.stage) continue;
        return {a.component == "a" ? s.a : s.b, !r.approximate};
    }
    return {r.tr_value, !r.approximate};
}

Json policy_json(const RunConfig& c) {
    return Json{{"gap_tol", c.gap_tol},
                {"max_steps", c.max_steps},
                {"max_limit_stages", c.max_limit_stages},
                {"window", c.window},
                {"tolerance", c.tol}};
}

Json check_header(const std::string& name, const MeanPair& pair, const RunConfig& c) {
    const GridSpec grid = c.grid();
    Json j;
    j["check"] = name;
    j["passed"] = false;
    j["pair"] = io::to_json(pair);
    j["grid"] = io::to_json(grid, sample_points(grid, pair.domain()).size());
    j["policy"] = policy_json(c);
    return j;
}

/// Runs one check, fills `report` and returns whether it passed.
bool run_check(const std::string& name, const CheckArgs& a, const RunConfig& c, Json& report) {
    if (name == "limitlike") {
        const auto sequences = standard_test_sequences();
        const std::vector<std::string> specs =
            a.specs.empty() ? std::vector<std::string>{"liminf", "limsup"} : a.specs;
        report["check"] = name;
        report["passed"] = false;
        report["sequences"] = sequences.size();
        Json results = Json::array();
        bool ok = true;
        for (const auto& text : specs) {
            const LimitLikeSpec spec = LimitLikeSpec::parse(text);
            const LimitLikeReport r = check_two_limit_like(spec, sequences);
            ok = ok && r.passed();
            Json j{{"spec", spec.name()}, {"passed", r.passed()}};
            j.update(io::to_json(r));
            results.push_back(std::move(j));
        }
        report["result"] = results;
        return ok;
    }

    const MeanPair pair = build_pair(c);
    report = check_header(name, pair, c);
    const GridSpec grid = c.grid();

    if (name == "properties") {
        const PropertyReport r = check_properties(pair, grid);
        report["result"] = io::to_json(r);
        return r.all_hold();
    }
    if (name == "invariance") {
        const Mean k = candidate_mean(a.k, pair, c);
        Json result{{"k", k.name()}};
        if (pair.symmetric()) {
            const SymmetryReport r = check_symmetry_of_invariant(k, pair, grid, c.tol);
            result["invariance"] = io::to_json(r.invariance);
            result["invariant"] = r.invariance.passed(c.tol);
            result["symmetry"] = io::to_json(r);
            result["symmetry"].erase("invariance");
            report["result"] = result;
            return r.invariance.passed(c.tol) && r.consistent();
        }
        const InvarianceReport r = invariance_residual(k, pair, grid);
        result["invariance"] = io::to_json(r);
        result["invariant"] = r.passed(c.tol);
        report["result"] = result;
        return r.passed(c.tol);
    }
    if (name == "ordering") {
        const std::vector<std::string> names =
            a.candidates.empty() ? std::vector<std::string>{"lo", "up", "tr"} : a.candidates;
        std::vector<Mean> means;
        for (const auto& n : names) means.push_back(candidate_mean(n, pair, c));
        const OrderingReport r = ordering_check(pair, means, grid, c.policy(), c.tol);
        report["result"] = io::to_json(r);
        return r.passed();
    }
    if (name == "phi") {
        const MeanExpr e = parse(a.phi);
        const Function2 phi = [e](double x, double y) { return e(x, y); };
        const PhiDecompositionReport r = check_phi_decomposition(phi, pair, grid, c.stage_policy(), c.tol);
        Json result{{"phi", e.to_string()}};
        result.update(io::to_json(r));
        report["result"] = result;
        return r.passed();
    }
    // uniqueness
    const UniquenessProbe r = probe_continuous_uniqueness(pair, grid, c.stage_policy(), a.jump_factor);
    report["result"] = io::to_json(r);
    return !r.jump_detected;
}

void emit(const std::string& text, const RunConfig& c, std::ostream& out) {
    if (c.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(c.out_path, std::ios::binary);
    if (!file) throw InvalidArgument("cannot open output file '" + c.out_path + "'");
    file << text;
    if (!file.flush()) throw InvalidArgument("cannot write output file '" + c.out_path + "'");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    EvalArgs eval_args;
    OrbitArgs orbit_args;
    CheckArgs check_args;

    CLI::App app{"Invariant means of mean-type mappings", "invmean"};
    app.set_config("--config", "", "TOML file with option values; command-line flags take precedence");
    app.require_subcommand(1);

    app.add_option("--pair", cfg.pair, "Built-in pair: example31 (default) or agm")
        ->check(CLI::IsMember({"example31", "agm"}));
    app.add_option("--mean-m", cfg.mean_m, "M as a built-in name, kc:<c> or an expression in x, y");
    app.add_option("--mean-n", cfg.mean_n, "N as a built-in name, kc:<c> or an expression in x, y");
    app.add_option("--domain", cfg.domain, "Closed interval LO HI")->expected(2);
    app.add_option("--gap-tol", cfg.gap_tol, "Orbit stabilization tolerance");
    app.add_option("--max-steps", cfg.max_steps, "Step limit per orbit");
    app.add_option("--max-limit-stages", cfg.max_limit_stages, "Limit-stage budget for Tr");
    app.add_option("--window", cfg.window, "Tail window for Bo");
    app.add_option("--grid", cfg.grid_nodes, "Uniform nodes per axis");
    app.add_option("--random-pairs", cfg.random_pairs, "Random sample points added to the grid");
    app.add_option("--seed", cfg.seed, "Seed for the random sample points");
    app.add_option("--tol", cfg.tol, "Pass/fail tolerance of the checks");
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", cfg.out_path, "Write the result to this file instead of stdout");

    auto* eval = app.add_subcommand("eval", "Evaluate Lo, Up, Tr, Bo or a stage mean at (x, y)");
    eval->fallthrough();
    eval->add_option("--x", eval_args.x, "First coordinate")->required();
    eval->add_option("--y", eval_args.y, "Second coordinate")->required();
    eval->add_option("--target", eval_args.target)
        ->check(CLI::IsMember({"lo", "up", "tr", "bo", "stage"}));
    eval->add_option("--phi", eval_args.phi, "liminf, limsup or w:EXPR (target bo)");
    eval->add_option("--stage", eval_args.stage, "Limit stage, 1 = (Lo, Up) (target stage)");
    eval->add_option("--component", eval_args.component, "Coordinate of the stage pair")->check(CLI::IsMember({"a", "b"}));

    auto* orbit = app.add_subcommand("orbit", "Export the orbit of (x, y)");
    orbit->fallthrough();
    orbit->add_option("--x", orbit_args.x, "First coordinate")->required();
    orbit->add_option("--y", orbit_args.y, "Second coordinate")->required();

    auto* check = app.add_subcommand("check", "Run a verification and write a JSON report");
    check->fallthrough();
    check->require_subcommand(1);
    std::vector<CLI::App*> checks;
    auto add_check = [&](const char* name, const char* help) {
        auto* sub = check->add_subcommand(name, help);
        sub->fallthrough();
        checks.push_back(sub);
        return sub;
    };
    add_check("properties", "Mean bounds, symmetry, strictness, M <= N and weakIn on the grid");
    add_check("invariance", "Invariance residual of a mean K")
        ->add_option("--k", check_args.k, "lo, up, tr, bo:<phi>, kc:<c>, built-in or expression")
        ->required();
    add_check("ordering", "Lo <= K <= Up for invariant candidates")
        ->add_option("--candidate", check_args.candidates, "lo, up, tr, bo:<phi>, kc:<c>, built-in or expression");
    add_check("phi", "Decomposition Phi = f o Tr of an invariant function")
        ->add_option("--phi", check_args.phi, "Function Phi as an expression in x, y")
        ->required();
    add_check("uniqueness", "Continuity probe of Tr")
        ->add_option("--jump-factor", check_args.jump_factor, "Jump threshold in grid steps");
    add_check("limitlike", "2-limit-like laws on eventually periodic sequences")
        ->add_option("--spec", check_args.specs, "liminf, limsup or w:EXPR (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        cfg.validate();
        if (*eval) {
            const MeanPair pair = build_pair(cfg);
            const Value v = evaluate_target(eval_args, pair, cfg);
            std::string text;
            if (cfg.format == "json") {
                const Json j{{"target", eval_args.target},
                             {"x", eval_args.x},
                             {"y", eval_args.y},
                             {"value", v.value},
                             {"converged", v.converged}};
                text = j.dump(2) + "\n";
            } else {
                text = shortest(v.value) + (v.converged ? " converged\n" : " approximate\n");
            }
            emit(text, cfg, out);
            return v.converged ? kExitOk : kExitApproximate;
        }
        if (*orbit) {
            const MeanPair pair = build_pair(cfg);
            const OrbitTrace trace = iterate(pair, orbit_args.x, orbit_args.y, cfg.policy());
            std::string text;
            if (cfg.format == "json") {
                text = io::orbit_to_json(trace).dump(2) + "\n";
            } else {
                std::ostringstream os;
                os << "n,x_n,y_n,gap\n";
                for (std::size_t i : export_indices(trace.pairs.size())) {
                    const Point p = trace.pairs[i];
                    os << i << ',' << fixed17(p.x) << ',' << fixed17(p.y) << ','
                       << fixed17(std::abs(p.x - p.y)) << '\n';
                }
                text = os.str();
            }
            emit(text, cfg, out);
            return trace.converged ? kExitOk : kExitApproximate;
        }
        for (auto* sub : checks) {
            if (!*sub) continue;
            Json report;
            const bool passed = run_check(sub->get_name(), check_args, cfg, report);
            report["passed"] = passed;
            emit(report.dump(2) + "\n", cfg, out);
            return passed ? kExitOk : kExitCheckFailed;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

}  // namespace invmean::cli
