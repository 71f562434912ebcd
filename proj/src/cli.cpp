#include "qhs/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qhs/catalog.hpp"
#include "qhs/cost.hpp"
#include "qhs/fusion.hpp"
#include "qhs/isomorphism.hpp"
#include "qhs/ktheory.hpp"
#include "qhs/morphism.hpp"
#include "qhs/presentation.hpp"
#include "qhs/report.hpp"
#include "qhs/solver.hpp"

namespace qhs {

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string catalog;
    std::string file;
    std::optional<double> q;
    std::optional<double> T;
    std::string x;
    std::optional<int> n;
    std::optional<int> window;
    std::optional<int> loops;
    std::optional<double> tol;
    std::string format = "json";
    std::size_t max_solutions = 8;
    int steps = 2;
    std::string example;
};

void add_common(CLI::App* sub, Options& o) {
    auto* cat = sub->add_option("--catalog", o.catalog, "Catalog graph name");
    auto* file = sub->add_option("--file", o.file, "Input JSON file");
    cat->excludes(file);
    sub->add_option("--q", o.q, "Deformation parameter, 0 < |q| <= 1");
    sub->add_option("--T", o.T, "q + 1/q");
    sub->add_option("--x", o.x, "Podles parameter, a number or inf");
    sub->add_option("--n", o.n, "Catalog size parameter");
    sub->add_option("--window", o.window, "Window half-width for infinite graphs");
    sub->add_option("--loops", o.loops, "Loop count for point_loops");
    sub->add_option("--tol", o.tol, "Verification tolerance");
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"json", "dot", "text"}));
    sub->add_option("--max-solutions", o.max_solutions, "Solution cap for searches");
}

std::optional<double> parse_x(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("--x: expected a number or inf, got '" + s + "'");
    }
}

double resolve_tolerance(const Options& o) {
    double tol = kVerifyTol;
    if (o.tol) {
        tol = *o.tol;
    } else if (const char* env = std::getenv("QHS_TOLERANCE")) {
        try {
            tol = std::stod(env);
        } catch (const std::exception&) {
            throw UsageError(std::string("QHS_TOLERANCE: not a number: ") + env);
        }
    }
    if (!(tol > 0.0) || !std::isfinite(tol)) throw UsageError("tolerance must be positive");
    return tol;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Input {
    OrientedGraph graph;
    std::optional<Cost> cost;
    std::optional<DeformationParameter> dp;
    std::optional<double> T;  // as given, before any root is taken
};

std::optional<DeformationParameter> flag_parameter(const Options& o) {
    if (o.q && o.T) throw UsageError("give at most one of --q and --T");
    if (o.q) return DeformationParameter::from_q(*o.q);
    if (o.T && std::abs(*o.T) >= 2.0) return DeformationParameter::from_T(*o.T);
    return std::nullopt;
}

Input load_input(const Options& o) {
    if (o.catalog.empty() == o.file.empty()) throw UsageError("give exactly one of --catalog and --file");
    Input in;
    auto dp = flag_parameter(o);
    if (!o.catalog.empty()) {
        CatalogParams p;
        if (dp) p.q = dp->q();
        p.x = parse_x(o.x);
        p.n = o.n;
        p.window = o.window;
        p.loops = o.loops;
        CatalogEntry e = catalog(o.catalog, p);
        in.graph = std::move(e.graph);
        in.cost = std::move(e.cost);
        in.dp = e.dp;
    } else {
        LoadedGraph lg = load_graph(read_file(o.file));
        in.graph = std::move(lg.graph);
        in.cost = std::move(lg.cost);
        if (lg.q) in.dp = DeformationParameter::from_q(*lg.q);
        else if (lg.T && std::abs(*lg.T) >= 2.0) in.dp = DeformationParameter::from_T(*lg.T);
        if (lg.T) in.T = lg.T;
    }
    if (dp) {
        in.dp = dp;
        in.T.reset();
    }
    if (o.T) in.T = o.T;
    return in;
}

const Cost& require_cost(const Input& in) {
    if (!in.cost) throw UsageError("input carries no edge weights");
    return *in.cost;
}

const DeformationParameter& require_dp(const Input& in) {
    if (!in.dp) throw UsageError("no deformation parameter; give --q or --T");
    return *in.dp;
}

double input_T(const Input& in) {
    if (in.T) return *in.T;
    return require_dp(in).T();
}

[[noreturn]] void unsupported(const std::string& format, const std::string& cmd) {
    throw UsageError("format '" + format + "' is not supported by " + cmd);
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
    return s;
}

std::string fairness_text(const FairnessReport& r) {
    return r.pass ? "pass\n" : "fail: " + join(r.reasons, "; ") + "\n";
}

int cmd_verify(const Options& o, std::ostream& out) {
    Input in = load_input(o);
    const Cost& w = require_cost(in);
    FairnessOptions fo;
    fo.tol = resolve_tolerance(o);
    FairnessReport r = verify_fair_balanced(in.graph, w, input_T(in), fo);
    if (o.format == "json") out << dump(to_json(r, in.graph));
    else if (o.format == "text") out << fairness_text(r);
    else out << to_dot(in.graph, &w);
    return r.pass ? kPass : kFail;
}

int cmd_solve(const Options& o, std::ostream& out) {
    Input in = load_input(o);
    SolveOptions so;
    so.max_solutions = o.max_solutions;
    SolveResult r = solve_cost(in.graph, require_dp(in), so);
    if (o.format == "json") {
        out << dump(to_json(r, in.graph));
    } else if (o.format == "text") {
        if (!r.feasible) {
            out << "infeasible\n";
        } else {
            out << "feasible: " << r.solutions.size() << " solution(s)" << (r.family ? ", family" : "")
                << "\n";
            for (const auto& s : r.solutions) {
                for (std::size_t e = 0; e < in.graph.num_edges(); ++e)
                    out << (e ? " " : "") << in.graph.edges()[e].id << "=" << round12(s.cost[e]);
                out << "\n";
            }
        }
    } else {
        out << to_dot(in.graph, r.feasible ? &r.solutions.front().cost : nullptr);
    }
    return r.feasible ? kPass : kFail;
}

int cmd_norm(const Options& o, std::ostream& out) {
    Input in = load_input(o);
    double tol = resolve_tolerance(o);
    double norm = graph_norm(in.graph, tol);
    Json j{{"norm", round12(norm)}};
    bool ok = true;
    if (in.dp) {
        double T = std::abs(in.dp->T());
        ok = norm <= T + 1e-8;
        j["abs_T"] = round12(T);
        j["within_bound"] = ok;
        if (auto pc = perron_cost(in.graph, in.dp->T())) {
            Json c = Json::object();
            for (std::size_t e = 0; e < in.graph.num_edges(); ++e)
                c[in.graph.edges()[e].id] = round12((*pc)[e]);
            j["perron_cost"] = c;
        }
    }
    if (o.format == "json") out << dump(j);
    else if (o.format == "text") out << "norm = " << round12(norm) << "\n";
    else unsupported(o.format, "norm");
    return ok ? kPass : kFail;
}

int cmd_classify(const Options& o, std::ostream& out) {
    Input in = load_input(o);
    double tol = resolve_tolerance(o);
    AdeTag tag = classify_ade(in.graph);
    bool coideal = is_coideal_type(in.graph);
    Json j{{"ade", to_string(tag)},
           {"coideal_type", coideal},
           {"infinite_type", is_infinite_type(tag)},
           {"norm", round12(graph_norm(in.graph, tol))}};
    if (o.format == "json") out << dump(j);
    else if (o.format == "text") out << to_string(tag) << (coideal ? " (coideal type)" : "") << "\n";
    else unsupported(o.format, "classify");
    return coideal ? kPass : kFail;
}

int cmd_nstep(const Options& o, std::ostream& out) {
    Input in = load_input(o);
    if (o.steps < 1) throw UsageError("--steps must be at least 1");
    const Cost& w = require_cost(in);
    NStepResult r = n_step(in.graph, w, input_T(in), o.steps);
    FairnessOptions fo;
    fo.tol = resolve_tolerance(o);
    FairnessReport rep = verify_fair_balanced(r.graph, r.cost, r.T, fo);
    if (o.format == "json")
        out << dump({{"graph", graph_json(r.graph, &r.cost)},
                     {"T", round12(r.T)},
                     {"verification", to_json(rep, r.graph)}});
    else if (o.format == "text") out << "T' = " << round12(r.T) << ": " << fairness_text(rep);
    else out << to_dot(r.graph, &r.cost);
    return rep.pass ? kPass : kFail;
}

// Builds the solution or reports why the input has none.
std::optional<FundamentalSolution> build_checked(const Input& in, const Options& o,
                                                 std::ostream& out) {
    const Cost& w = require_cost(in);
    const DeformationParameter& dp = require_dp(in);
    FairnessOptions fo;
    fo.tol = resolve_tolerance(o);
    FairnessReport fr = verify_fair_balanced(in.graph, w, dp, fo);
    if (!fr.pass) {
        if (o.format == "json") out << dump(to_json(fr, in.graph));
        else out << fairness_text(fr);
        return std::nullopt;
    }
    return build_solution(in.graph, w, dp);
}

int cmd_solution(const std::string& action, const Options& o, std::ostream& out) {
    if (o.format == "dot" && action != "roundtrip") unsupported(o.format, "solution " + action);
    double tol = resolve_tolerance(o);

    if (action == "verify" && !o.file.empty()) {
        Json doc;
        try {
            doc = Json::parse(read_file(o.file));
        } catch (const Json::parse_error& e) {
            throw SchemaError(std::string("parse error: ") + e.what());
        }
        if (doc.contains("blocks")) {
            auto dp = flag_parameter(o);
            if (!dp) throw UsageError("verifying a stored solution needs --q or --T");
            FundamentalSolution s = solution_from_json(doc);
            SolutionReport r = verify_solution(s, *dp, tol);
            if (o.format == "json") out << dump(to_json(r));
            else out << (r.pass ? "pass\n" : "fail: " + join(r.reasons, "; ") + "\n");
            return r.pass ? kPass : kFail;
        }
    }

    Input in = load_input(o);
    auto s = build_checked(in, o, out);
    if (!s) return kFail;
    const DeformationParameter& dp = *in.dp;
    if (action == "build") {
        if (o.format == "json") out << dump(to_json(*s));
        else out << "solution on " << s->size() << " vertices, " << s->jmaps.size() << " blocks\n";
        return kPass;
    }
    if (action == "verify") {
        SolutionReport r = verify_solution(*s, dp, tol);
        if (o.format == "json") out << dump(to_json(r));
        else out << (r.pass ? "pass\n" : "fail: " + join(r.reasons, "; ") + "\n");
        return r.pass ? kPass : kFail;
    }
    SolutionGraph back = solution_to_graph(*s, dp, tol);
    auto phi = weighted_isomorphism(in.graph, *in.cost, back.graph, back.cost, 1e-7);
    if (o.format == "dot") {
        out << to_dot(back.graph, &back.cost);
    } else if (o.format == "text") {
        out << (phi ? "isomorphic\n" : "not isomorphic\n");
    } else {
        Json j{{"verdict", phi ? "isomorphic" : "not_isomorphic"},
               {"graph", graph_json(back.graph, &back.cost)}};
        if (phi) {
            Json m = Json::object();
            for (std::size_t v = 0; v < phi->size(); ++v)
                m[in.graph.vertices()[v]] = back.graph.vertices()[(*phi)[v]];
            j["phi"] = m;
        }
        out << dump(j);
    }
    return phi ? kPass : kFail;
}

int cmd_presentation(const Options& o, std::ostream& out) {
    if (o.format == "dot") unsupported(o.format, "presentation");
    Input in = load_input(o);
    auto s = build_checked(in, o, out);
    if (!s) return kFail;
    Presentation p = emit_presentation(*s, *in.dp);
    PresentationCheck c = check_presentation(p, *in.dp, std::max(resolve_tolerance(o), 1e-10));
    if (o.format == "json") {
        Json j = to_json(p);
        j["check"] = {{"verdict", c.pass ? "pass" : "fail"},
                      {"e_identity_residual", round12(c.e_identity_residual)},
                      {"f_spectrum_residual", round12(c.f_spectrum_residual)},
                      {"references_ok", c.references_ok}};
        out << dump(j);
    } else {
        out << p.generators.size() << " generators; relations Eq1 " << p.count("Eq1") << ", Eq2 "
            << p.count("Eq2") << ", Eq2p " << p.count("Eq2p") << ", Eq3 " << p.count("Eq3") << "; "
            << (c.pass ? "pass" : "fail") << "\n";
    }
    return c.pass ? kPass : kFail;
}

int emit_psi(const PsiReport& r, const MorphismData* m, const Options& o, std::ostream& out) {
    if (o.format == "json") {
        Json j = to_json(r, *m);
        if (o.file.empty()) j = {{"morphism", to_json(*m)}, {"report", j}};
        out << dump(j);
    } else {
        out << (r.pass ? "pass" : "fail") << " (worst residual " << round12(r.worst_residual);
        if (r.worst_pair) out << " at " << m->y.index[r.worst_pair->first] << "," << m->x.index[r.worst_pair->second];
        out << ")\n";
        if (!r.pass) out << join(r.reasons, "; ") << "\n";
    }
    return r.pass ? kPass : kFail;
}

int cmd_morphism(const std::string& action, const Options& o, std::ostream& out,
                 std::ostream& err) {
    if (o.format == "dot") unsupported(o.format, "morphism " + action);
    double tol = resolve_tolerance(o);
    if (action == "example") {
        Options local = o;
        local.file.clear();
        EmbeddingParams p;
        p.q = o.q;
        if (o.T) p.q = DeformationParameter::from_T(*o.T).q();
        p.x = parse_x(o.x);
        p.window = o.window;
        MorphismData m;
        try {
            m = example_embedding(o.example, p);
        } catch (const std::runtime_error& e) {
            // The phase propagation found no solution: a negative verdict.
            err << "fail: " << e.what() << "\n";
            return kFail;
        }
        PsiReport r = verify_psi(m, example_parameter(o.example, p), tol);
        return emit_psi(r, &m, local, out);
    }
    if (o.file.empty()) throw UsageError("morphism verify needs --file");
    auto dp = flag_parameter(o);
    if (!dp) throw UsageError("morphism verify needs --q or --T");
    Json doc;
    try {
        doc = Json::parse(read_file(o.file));
    } catch (const Json::parse_error& e) {
        throw SchemaError(std::string("parse error: ") + e.what());
    }
    MorphismData m = morphism_from_json(doc.contains("morphism") ? doc["morphism"] : doc);
    PsiReport r = verify_psi(m, *dp, tol);
    return emit_psi(r, &m, o, out);
}

int cmd_ktheory(const Options& o, std::ostream& out) {
    if (o.format == "dot") unsupported(o.format, "ktheory");
    Input in = load_input(o);
    KGroups k = k_groups(in.graph);
    if (o.format == "json") out << dump(to_json(k));
    else out << k.to_string() << "\n";
    return kPass;
}

int cmd_catalog(const std::string& action, const Options& o, std::ostream& out) {
    if (action == "list") {
        if (o.format == "json") out << dump(Json(catalog_names()));
        else if (o.format == "text") out << join(catalog_names(), "\n") << "\n";
        else unsupported(o.format, "catalog list");
        return kPass;
    }
    if (o.catalog.empty()) throw UsageError("catalog emit needs --catalog");
    Input in = load_input(o);
    if (o.format == "dot") out << to_dot(in.graph, &*in.cost);
    else if (o.format == "json") out << dump(graph_json(in.graph, &*in.cost, in.dp->q()));
    else unsupported(o.format, "catalog emit");
    return kPass;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum homogeneous spaces over SU_q(2): graph classification tools", "qhs"};
    app.require_subcommand(1);
    Options o;
    std::string action;

    auto* verify = app.add_subcommand("verify", "Check a weighted graph for a fair and balanced T-cost");
    auto* solve = app.add_subcommand("solve-cost", "Search for fair and balanced T-costs on a graph");
    auto* norm = app.add_subcommand("norm", "Graph norm and Perron cost");
    auto* classify = app.add_subcommand("classify", "Extended ADE recognition");
    auto* nstep = app.add_subcommand("nstep", "n-step graph and its verification");
    auto* solution = app.add_subcommand("solution", "Fundamental solutions");
    auto* pres = app.add_subcommand("presentation", "Linking-algebra presentation");
    auto* morph = app.add_subcommand("morphism", "Equivariant morphism data");
    auto* kth = app.add_subcommand("ktheory", "K-groups of the function algebra");
    auto* cat = app.add_subcommand("catalog", "Built-in graphs");

    for (auto* s : {verify, solve, norm, classify, nstep, pres, kth}) add_common(s, o);
    nstep->add_option("--steps", o.steps, "Path length n");

    std::vector<std::pair<CLI::App*, std::string>> leaves;
    auto nested = [&](CLI::App* parent, std::initializer_list<const char*> names) {
        parent->require_subcommand(1);
        for (const char* n : names) {
            auto* sub = parent->add_subcommand(n);
            add_common(sub, o);
            leaves.push_back({sub, n});
        }
    };
    nested(solution, {"build", "verify", "roundtrip"});
    nested(morph, {"verify", "example"});
    nested(cat, {"list", "emit"});
    for (auto& [sub, name] : leaves)
        if (name == "example")
            sub->add_option("name", o.example, "Example name")
                ->required()
                ->check(CLI::IsMember(example_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        if (code == 0) return kPass;
        err << app.help();
        return kUsage;
    }
    for (auto& [sub, name] : leaves)
        if (sub->parsed()) action = name;

    try {
        if (verify->parsed()) return cmd_verify(o, out);
        if (solve->parsed()) return cmd_solve(o, out);
        if (norm->parsed()) return cmd_norm(o, out);
        if (classify->parsed()) return cmd_classify(o, out);
        if (nstep->parsed()) return cmd_nstep(o, out);
        if (solution->parsed()) return cmd_solution(action, o, out);
        if (pres->parsed()) return cmd_presentation(o, out);
        if (morph->parsed()) return cmd_morphism(action, o, out, err);
        if (kth->parsed()) return cmd_ktheory(o, out);
        if (cat->parsed()) return cmd_catalog(action, o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    err << app.help();
    return kUsage;
}

} // namespace qhs
