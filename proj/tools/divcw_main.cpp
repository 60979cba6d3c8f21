// Command-line interface: solve, diversify, cross-check and generate
// cliquewidth-decomposition instances.
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "divcw/engine.hpp"
#include "divcw/errors.hpp"
#include "divcw/graph.hpp"
#include "divcw/measures.hpp"
#include "divcw/mso/mso_core.hpp"
#include "divcw/oracle.hpp"
#include "divcw/problems.hpp"
#include "json.hpp"

namespace {

using namespace divcw;

constexpr int kExitFeasible = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInternalError = 3;

struct RunConfig {
    std::string format = "csv";  // csv | json
    int threads = 1;
    std::uint64_t seed = 0;  // reserved for randomized drivers
    bool no_timing = false;
};

struct Row {
    std::string instance;
    int r = 1;
    std::string measure;
    std::uint64_t d = 0;
    bool feasible = false;
    std::optional<std::uint64_t> best;
    std::vector<VertexSet> solutions;
    std::uint64_t wall_ms = 0;
};

std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
    std::string quoted = "\"";
    for (char c : raw) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string join_solutions(const std::vector<VertexSet>& solutions) {
    std::string out;
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        if (i) out += ';';
        bool first = true;
        for (const std::string& v : solutions[i]) {
            if (!first) out += ' ';
            out += v;
            first = false;
        }
    }
    return out;
}

void print_row(const Row& row, const RunConfig& cfg) {
    if (cfg.format == "json") {
        nlohmann::json j;
        j["instance"] = row.instance;
        j["r"] = row.r;
        j["measure"] = row.measure;
        j["d"] = row.d;
        j["feasible"] = row.feasible;
        if (row.best)
            j["best_value"] = *row.best;
        else
            j["best_value"] = nullptr;
        nlohmann::json sols = nlohmann::json::array();
        for (const VertexSet& s : row.solutions) sols.push_back(std::vector<std::string>(s.begin(), s.end()));
        j["solutions"] = sols;
        j["wall_ms"] = row.wall_ms;
        std::cout << j.dump() << '\n';
        return;
    }
    std::cout << "instance,r,measure,d,feasible,best_value,solutions,wall_ms\n";
    std::cout << csv_field(row.instance) << ',' << row.r << ',' << csv_field(row.measure) << ',' << row.d << ','
              << (row.feasible ? "true" : "false") << ',' << (row.best ? std::to_string(*row.best) : "") << ','
              << csv_field(join_solutions(row.solutions)) << ',' << row.wall_ms << '\n';
}

class Stopwatch {
public:
    std::uint64_t elapsed_ms(const RunConfig& cfg) const {
        if (cfg.no_timing) return 0;
        auto dt = std::chrono::steady_clock::now() - start_;
        return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(dt).count());
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// A parsed problem selector: vc:<k>, ds:<k>, minvc:<k>, mso:<file>, minds.
struct Selector {
    std::string text;
    std::string kind;
    int k = 0;
    std::shared_ptr<const mso::Formula> formula;
};

Selector parse_selector(const std::string& text) {
    Selector sel;
    sel.text = text;
    std::string::size_type colon = text.find(':');
    sel.kind = text.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (sel.kind == "vc" || sel.kind == "ds" || sel.kind == "minvc") {
        try {
            std::size_t pos = 0;
            sel.k = std::stoi(arg, &pos);
            if (pos != arg.size() || sel.k < 0) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw input_error("problem '" + text + "' needs a non-negative size bound, e.g. '" + sel.kind + ":2'");
        }
    } else if (sel.kind == "mso") {
        if (arg.empty()) throw input_error("problem 'mso' needs a formula file, e.g. 'mso:formula.txt'");
        sel.formula = std::make_shared<mso::Formula>(mso::parse_formula_file(arg));
    } else if (sel.kind == "minds") {
        if (!arg.empty()) throw input_error("problem 'minds' takes no argument");
    } else {
        throw input_error("unknown problem '" + text + "' (expected vc:<k>, ds:<k>, minvc:<k>, mso:<file>, minds)");
    }
    return sel;
}

std::vector<Selector> parse_selectors(const std::string& csv) {
    std::vector<Selector> out;
    std::istringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw input_error("empty problem selector");
        out.push_back(parse_selector(item));
    }
    if (out.empty()) throw input_error("no problem selectors given");
    return out;
}

std::unique_ptr<DpCore> make_core(const Selector& sel, const CwDecomposition& d) {
    if (sel.kind == "vc") return vc_core(sel.k, d);
    if (sel.kind == "ds") return ds_core(sel.k, d);
    if (sel.kind == "mso") return mso::mso_core(*sel.formula, d, sel.text);
    if (sel.kind == "minvc")
        throw input_error("'minvc' is a minimization run, only available with the solve command");
    throw input_error("problem '" + sel.text + "' has no dynamic-programming core (oracle only)");
}

ProblemSpec make_spec(const Selector& sel) {
    ProblemSpec spec;
    if (sel.kind == "vc") {
        spec.kind = ProblemSpec::Kind::VertexCover;
        spec.k = sel.k;
    } else if (sel.kind == "ds") {
        spec.kind = ProblemSpec::Kind::DominatingSet;
        spec.k = sel.k;
    } else if (sel.kind == "minds") {
        spec.kind = ProblemSpec::Kind::MinimalDominatingSet;
    } else if (sel.kind == "mso") {
        spec.kind = ProblemSpec::Kind::MsoFormula;
        spec.formula = sel.formula;
    } else {
        throw input_error("problem '" + sel.text + "' cannot be brute-forced");
    }
    return spec;
}

VennMeasure parse_measure_arg(const std::string& text, int r) {
    if (text == "sum") return divsum_as_venn(r);
    if (text == "star") return divstar(r);
    if (text.rfind("table:", 0) == 0) {
        VennMeasure f = parse_measure_file(text.substr(6));
        if (f.r != r)
            throw input_error("measure table has arity " + std::to_string(f.r) + " but " + std::to_string(r) +
                              " problems were given");
        return f;
    }
    if (text == "min")
        throw input_error("the min measure is the diverse-min command's objective; use 'diverse-min'");
    throw input_error("unknown measure '" + text + "' (expected sum, star, table:<file>, min)");
}

std::vector<std::string> universe_of(const ColoredGraph& g) {
    std::vector<std::string> u = g.names;
    std::sort(u.begin(), u.end());
    return u;
}

// Cross-checks an engine result against the brute-force oracle; loud
// internal error on mismatch, warning if the instance exceeds the oracle
// budget.
void verify_diverse(const CwDecomposition& d, const std::vector<Selector>& sels, const VennMeasure* f,
                    std::uint64_t d_target, bool feasible, const std::optional<std::uint64_t>& best,
                    const std::vector<VertexSet>& solutions, const RunConfig& cfg) {
    ColoredGraph g = evaluate(d);
    try {
        std::vector<std::vector<VertexSet>> lists;
        lists.reserve(sels.size());
        for (const Selector& sel : sels) lists.push_back(brute_solutions(make_spec(sel), g));
        std::vector<std::string> universe = universe_of(g);
        if (f != nullptr) {
            std::optional<BestTuple> oracle = brute_best_diversity(lists, *f, universe, cfg.threads);
            bool oracle_feasible = oracle && oracle->value >= d_target;
            if (oracle_feasible != feasible)
                throw std::logic_error("oracle disagrees on feasibility");
            if (oracle && (!best || *best != oracle->value))
                throw std::logic_error("oracle optimum " + std::to_string(oracle->value) +
                                       " differs from engine optimum " +
                                       (best ? std::to_string(*best) : std::string("none")));
            if (feasible && venn_div(*f, solutions, universe) != *best)
                throw std::logic_error("returned tuple does not attain the reported optimum");
        } else {
            std::optional<BestTuple> oracle = brute_best_min_distance(lists, universe, cfg.threads);
            bool oracle_feasible = oracle && (d_target == 0 || oracle->value >= d_target);
            if (oracle_feasible != feasible) throw std::logic_error("oracle disagrees on feasibility");
            if (feasible && d_target > 0 && div_min(solutions) < d_target)
                throw std::logic_error("returned tuple violates the distance target");
        }
        std::cerr << "verify: oracle agrees\n";
    } catch (const budget_error& e) {
        std::cerr << "verify: skipped (" << e.what() << ")\n";
    }
}

int cmd_check(const std::string& path) {
    CwDecomposition d = parse_decomposition_file(path);
    std::vector<std::string> violations = validate(d);
    if (!violations.empty()) {
        for (const std::string& v : violations) std::cerr << "invalid: " << v << '\n';
        return kExitInputError;
    }
    ColoredGraph g = evaluate(d);
    std::cout << "valid, n=" << g.num_vertices() << " m=" << g.num_edges() << " width=" << d.width << '\n';
    return kExitFeasible;
}

int cmd_gen(const std::string& family, const std::vector<int>& args, const std::string& output) {
    CwDecomposition d;
    if (family == "path") {
        if (args.size() != 1) throw input_error("gen path needs one argument: the number of vertices");
        d = gen_path(args[0]);
    } else if (family == "clique") {
        if (args.size() != 1) throw input_error("gen clique needs one argument: the number of vertices");
        d = gen_clique(args[0]);
    } else if (family == "biclique") {
        if (args.size() != 2) throw input_error("gen biclique needs two arguments: the two side sizes");
        d = gen_complete_bipartite(args[0], args[1]);
    } else {
        throw input_error("unknown family '" + family + "' (expected path, clique, biclique)");
    }
    std::string text = format_decomposition(d);
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output);
        if (!out) throw input_error("cannot write '" + output + "'");
        out << text;
    }
    return kExitFeasible;
}

int cmd_solve(const std::string& decomp_path, const std::string& problem, const RunConfig& cfg) {
    CwDecomposition d = parse_decomposition_file(decomp_path);
    Selector sel = parse_selector(problem);
    Stopwatch timer;

    Row row;
    row.instance = decomp_path;
    row.r = 1;

    std::optional<VertexSet> solution;
    if (sel.kind == "minvc") {
        solution = min_vc(d, sel.k);
    } else {
        std::unique_ptr<DpCore> core = make_core(sel, d);
        std::optional<Witness> w = solve_single(*core, d);
        if (w) solution = extract_solution(*core, d, *w);
    }
    row.feasible = solution.has_value();
    if (solution) {
        row.best = solution->size();
        row.solutions = {*solution};
    }
    row.wall_ms = timer.elapsed_ms(cfg);
    print_row(row, cfg);
    return row.feasible ? kExitFeasible : kExitInfeasible;
}

int cmd_diverse(const std::string& decomp_path, const std::string& problems, const std::string& measure,
                std::uint64_t d_target, bool verify, const RunConfig& cfg) {
    CwDecomposition d = parse_decomposition_file(decomp_path);
    std::vector<Selector> sels = parse_selectors(problems);
    VennMeasure f = parse_measure_arg(measure, static_cast<int>(sels.size()));
    Stopwatch timer;

    std::vector<std::unique_ptr<DpCore>> cores;
    std::vector<const DpCore*> core_ptrs;
    for (const Selector& sel : sels) {
        cores.push_back(make_core(sel, d));
        core_ptrs.push_back(cores.back().get());
    }
    std::optional<DiverseResult> result = diverse_solve(core_ptrs, f, d);

    Row row;
    row.instance = decomp_path;
    row.r = static_cast<int>(sels.size());
    row.measure = f.name;
    row.d = d_target;
    row.feasible = result && result->best >= d_target;
    if (result) {
        row.best = result->best;
        if (row.feasible) row.solutions = result->solutions;
    }
    row.wall_ms = timer.elapsed_ms(cfg);
    print_row(row, cfg);
    if (verify) verify_diverse(d, sels, &f, d_target, row.feasible, row.best, result ? result->solutions : std::vector<VertexSet>{}, cfg);
    return row.feasible ? kExitFeasible : kExitInfeasible;
}

int cmd_diverse_min(const std::string& decomp_path, const std::string& problems, std::uint64_t d_target,
                    bool verify, const RunConfig& cfg) {
    CwDecomposition d = parse_decomposition_file(decomp_path);
    std::vector<Selector> sels = parse_selectors(problems);
    Stopwatch timer;

    std::vector<std::unique_ptr<DpCore>> cores;
    std::vector<const DpCore*> core_ptrs;
    for (const Selector& sel : sels) {
        cores.push_back(make_core(sel, d));
        core_ptrs.push_back(cores.back().get());
    }
    std::optional<std::vector<VertexSet>> result = min_diverse_solve(core_ptrs, d_target, d);

    Row row;
    row.instance = decomp_path;
    row.r = static_cast<int>(sels.size());
    row.measure = "min";
    row.d = d_target;
    row.feasible = result.has_value();
    if (result) {
        row.solutions = *result;
        row.best = div_min(*result);
    }
    row.wall_ms = timer.elapsed_ms(cfg);
    print_row(row, cfg);
    if (verify)
        verify_diverse(d, sels, nullptr, d_target, row.feasible, row.best,
                       result ? *result : std::vector<VertexSet>{}, cfg);
    return row.feasible ? kExitFeasible : kExitInfeasible;
}

int cmd_oracle(const std::string& decomp_path, const std::string& graph_path, const std::string& problems,
               const std::string& measure, std::uint64_t d_target, const RunConfig& cfg) {
    if (decomp_path.empty() == graph_path.empty())
        throw input_error("oracle needs exactly one of --decomp and --graph");
    ColoredGraph g = graph_path.empty() ? evaluate(parse_decomposition_file(decomp_path))
                                        : parse_graph_file(graph_path);
    std::string instance = graph_path.empty() ? decomp_path : graph_path;
    std::vector<Selector> sels = parse_selectors(problems);
    Stopwatch timer;

    std::vector<std::vector<VertexSet>> lists;
    lists.reserve(sels.size());
    for (const Selector& sel : sels) lists.push_back(brute_solutions(make_spec(sel), g));
    std::vector<std::string> universe = universe_of(g);

    std::optional<BestTuple> best;
    std::string measure_name;
    if (measure == "min") {
        best = brute_best_min_distance(lists, universe, cfg.threads);
        measure_name = "min";
    } else {
        VennMeasure f = parse_measure_arg(measure, static_cast<int>(sels.size()));
        best = brute_best_diversity(lists, f, universe, cfg.threads);
        measure_name = f.name;
    }

    Row row;
    row.instance = instance;
    row.r = static_cast<int>(sels.size());
    row.measure = measure_name;
    row.d = d_target;
    row.feasible = best && best->value >= d_target;
    if (best) {
        row.best = best->value;
        row.solutions = best->tuple;
    }
    row.wall_ms = timer.elapsed_ms(cfg);
    print_row(row, cfg);
    return row.feasible ? kExitFeasible : kExitInfeasible;
}

int cmd_mso_check(const std::string& decomp_path, const std::string& formula_path, const RunConfig& cfg) {
    CwDecomposition d = parse_decomposition_file(decomp_path);
    mso::Formula f = mso::parse_formula_file(formula_path);
    Stopwatch timer;
    bool holds = mso::model_check(f, d);

    Row row;
    row.instance = decomp_path;
    row.r = 1;
    row.measure = "";
    row.feasible = holds;
    row.wall_ms = timer.elapsed_ms(cfg);
    print_row(row, cfg);
    return holds ? kExitFeasible : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"diverse solutions for vertex problems on cliquewidth decompositions"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may also follow the subcommand

    RunConfig cfg;
    app.add_option("--format", cfg.format, "output format: csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", cfg.threads, "worker threads for oracle scans")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "seed, reserved for randomized drivers");
    app.add_flag("--no-timing", cfg.no_timing, "report wall_ms as 0 for diff-friendly output");

    std::string decomp, graph, problems, problem, measure = "sum", formula, family, output;
    std::vector<int> gen_args;
    std::uint64_t d_target = 0;
    bool verify = false;

    CLI::App* check = app.add_subcommand("check", "validate a decomposition file");
    check->add_option("decomp", decomp, "decomposition file")->required();

    CLI::App* gen = app.add_subcommand("gen", "generate a decomposition (path, clique, biclique)");
    gen->add_option("family", family, "path | clique | biclique")->required();
    gen->add_option("args", gen_args, "family parameters");
    gen->add_option("-o,--output", output, "write to a file instead of stdout");

    CLI::App* solve = app.add_subcommand("solve", "find one solution");
    solve->add_option("--decomp", decomp, "decomposition file")->required();
    solve->add_option("--problem", problem, "vc:<k> | ds:<k> | minvc:<k> | mso:<file>")->required();

    CLI::App* diverse = app.add_subcommand("diverse", "find r solutions maximizing a diversity measure");
    diverse->add_option("--decomp", decomp, "decomposition file")->required();
    diverse->add_option("--problems", problems, "comma-separated selectors, one per solution slot")->required();
    diverse->add_option("--measure", measure, "sum | star | table:<file>");
    diverse->add_option("--d", d_target, "diversity target (success iff optimum >= d)");
    diverse->add_flag("--verify", verify, "cross-check against the brute-force oracle");

    CLI::App* diverse_min = app.add_subcommand("diverse-min", "find r solutions with all pairwise distances >= d");
    diverse_min->add_option("--decomp", decomp, "decomposition file")->required();
    diverse_min->add_option("--problems", problems, "comma-separated selectors, one per solution slot")->required();
    diverse_min->add_option("--d", d_target, "distance target")->required();
    diverse_min->add_flag("--verify", verify, "cross-check against the brute-force oracle");

    CLI::App* oracle = app.add_subcommand("oracle", "brute-force reference run");
    oracle->add_option("--decomp", decomp, "decomposition file");
    oracle->add_option("--graph", graph, "plain graph file");
    oracle->add_option("--problems", problems, "comma-separated selectors, one per solution slot")->required();
    oracle->add_option("--measure", measure, "sum | star | table:<file> | min");
    oracle->add_option("--d", d_target, "target for the feasible column");

    CLI::App* mso_check = app.add_subcommand("mso-check", "evaluate a closed formula on a decomposition");
    mso_check->add_option("--decomp", decomp, "decomposition file")->required();
    mso_check->add_option("--formula", formula, "formula file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        if (check->parsed()) return cmd_check(decomp);
        if (gen->parsed()) return cmd_gen(family, gen_args, output);
        if (solve->parsed()) return cmd_solve(decomp, problem, cfg);
        if (diverse->parsed()) return cmd_diverse(decomp, problems, measure, d_target, verify, cfg);
        if (diverse_min->parsed()) return cmd_diverse_min(decomp, problems, d_target, verify, cfg);
        if (oracle->parsed()) return cmd_oracle(decomp, graph, problems, measure, d_target, cfg);
        if (mso_check->parsed()) return cmd_mso_check(decomp, formula, cfg);
        throw input_error("no command given");
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const overflow_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternalError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternalError;
    }
}
