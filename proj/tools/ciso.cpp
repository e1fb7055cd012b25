// ciso: command-line runner for the construction, certification and
// lower-bound pipeline. Exit codes: 0 success/found, 1 not found,
// 2 input error, 3 inconclusive or budget exhausted.

#include <ciso/ciso.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>

using namespace ciso;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0, exit_not_found = 1, exit_input = 2, exit_inconclusive = 3;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

EdgeColouring read_colouring(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    try {
        return read_colouring_csv(in);
    } catch (const parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write " + path);
    out << text;
}

void write_json(const std::string& path, const json& j) {
    if (!path.empty()) write_text(path, j.dump(2) + "\n");
}

// Named pattern, "Ksub<s>x<t>" for K_{s,t}^sub, or a graph JSON file.
Graph parse_pattern(const std::string& spec) {
    static const std::regex sub(R"(Ksub(\d+)x(\d+))");
    std::smatch m;
    if (std::regex_match(spec, m, sub)) return subdivision_kst(std::stoi(m[1]), std::stoi(m[2]));
    if (spec.ends_with(".json")) return graph_from_json(read_json(spec));
    return named_pattern(spec);
}

struct ConstructArgs {
    int a = 1, b = 2, r = 2;
    std::uint64_t q = 5;
    std::optional<int> d, n;
    seed_t seed = 0;
    std::string out = "colouring.csv", stats, properized;
};

int cmd_construct(const ConstructArgs& args) {
    ConstructionParams p;
    p.tree_a = args.a;
    p.tree_b = args.b;
    p.tree_r = args.r;
    p.q = args.q;
    p.degree = args.d;
    p.n = args.n;
    p.seed = args.seed;
    const Construction con = construct_random_colouring(p);
    const EdgeColouring& c = con.colouring;
    const int bound = boundedness(c);
    const EdgeColouring proper = vizing_properize(c);
    const bool ok = !is_proper(proper);

    write_text(args.out, colouring_to_csv(c));
    if (!args.properized.empty()) write_text(args.properized, colouring_to_csv(proper));
    json stats{{"n", c.vertex_count()},
               {"q", con.params.q},
               {"a", con.params.tree_a},
               {"b", con.params.tree_b},
               {"d", *con.params.degree},
               {"seed", con.params.seed},
               {"palette_size", c.palette().size()},
               {"boundedness_C", bound},
               {"proper_after_vizing", ok},
               {"properized_palette_size", proper.palette().size()}};
    write_json(args.stats.empty() ? args.out + ".stats.json" : args.stats, stats);
    std::cout << "construct n=" << c.vertex_count() << " q=" << con.params.q << " d=" << *con.params.degree
              << " palette=" << c.palette().size() << " C=" << bound << " proper_after_vizing=" << std::boolalpha << ok
              << " out=" << args.out << "\n";
    return ok ? exit_ok : exit_inconclusive;
}

struct VerifyArgs {
    std::string colouring, tree, pattern, out;
    std::optional<std::size_t> k0;
    std::uint64_t budget = 0;
};

int cmd_verify(const VerifyArgs& args) {
    const EdgeColouring c = read_colouring(args.colouring);
    const RootedTree t = args.tree.empty() ? path_rooted_at_leaves(2) : tree_from_json(read_json(args.tree));

    json j;
    const auto bad = is_proper(c);
    j["n"] = c.vertex_count();
    j["is_proper"] = !bad;
    if (bad)
        j["proper_violation"] = {{"vertex", bad->vertex},
                                 {"first", {bad->first.u, bad->first.v}},
                                 {"second", {bad->second.u, bad->second.v}}};
    j["palette_size"] = c.palette().size();
    j["boundedness_C"] = boundedness(c);

    const CollectionMaximum best = max_rooted_collection(c, t);
    j["max_rooted_collection"] = best.max_size;
    j["root_pairs"] = best.root_pairs;
    const std::size_t k0 = args.k0.value_or(best.max_size + 1);
    const PowerFreeCertificate cert = certify_power_free(c, t, k0, args.budget);
    j["k0"] = k0;
    j["certified_k0"] = cert.holds ? json(k0) : json(nullptr);
    if (args.budget > 0) j["direct_power_search"] = to_string(cert.direct.outcome);

    bool inconclusive = args.budget > 0 && cert.direct.outcome == SearchOutcome::budget_exhausted;
    std::optional<EmbeddedPair> witness;
    if (!args.pattern.empty()) {
        const Graph h = parse_pattern(args.pattern);
        const SearchResult r = find_pair(c, h, args.budget > 0 ? args.budget : unlimited_budget);
        j["pattern_search"] = to_string(r.outcome);
        inconclusive |= r.outcome == SearchOutcome::budget_exhausted;
        if (r.pair) witness = r.pair;
    } else if (best.max_size > 0) {
        auto col = rooted_collection(c, t, best.x_roots, best.y_roots, 1);
        if (!col.members.empty()) witness = col.members.front();
    }
    if (witness) {
        j["witness"] = witness_to_json(c, *witness);
        const auto problem = check_colour_isomorphic_pair(c, witness->pattern, witness->map1, witness->map2);
        j["witness_verified"] = !problem;
    }
    write_json(args.out, j);
    std::cout << "verify n=" << c.vertex_count() << " is_proper=" << std::boolalpha << !bad
              << " C=" << j["boundedness_C"] << " max_rooted_collection=" << best.max_size
              << " certified_k0=" << j["certified_k0"] << " witness=" << (witness ? "yes" : "no") << "\n";
    return inconclusive ? exit_inconclusive : exit_ok;
}

struct ConstraintArgs {
    std::string system, tree, out;
    int p = 2;
    std::size_t trials = 100;
    std::optional<int> host;
    seed_t seed = 0;
};

int cmd_constraint(const ConstraintArgs& args) {
    if (!args.system.empty()) {
        const CorrespondenceSystem sys = system_from_json(read_json(args.system));
        const std::size_t k = constraint_number(sys);
        write_json(args.out, {{"k", k},
                              {"h1_edges", sys.h1_edges().size()},
                              {"h2_edges", sys.h2_edges().size()},
                              {"support", sys.support().size()},
                              {"union_vertices", sys.union_vertex_count()}});
        std::cout << "constraint k=" << k << "\n";
        return exit_ok;
    }
    const RootedTree t = tree_from_json(read_json(args.tree));
    const int host = args.host.value_or(2 * t.root_count() + 2 * args.p * t.unrooted_count());
    const BalanceTrialReport rep = check_balance_inequality(t, args.p, args.trials, host, args.seed);
    json j{{"p", args.p},
           {"trials", rep.trials},
           {"host", host},
           {"seed", args.seed},
           {"violations", rep.violations},
           {"extension_steps", rep.extension_steps},
           {"extension_violations", rep.extension_violations},
           {"rejected_draws", rep.rejected_draws},
           {"tightest_ratio", rep.tightest_ratio ? json(std::to_string(rep.tightest_ratio->numerator()) + "/" +
                                                      std::to_string(rep.tightest_ratio->denominator()))
                                                 : json(nullptr)}};
    write_json(args.out, j);
    std::cout << "constraint trials=" << rep.trials << " violations=" << rep.violations
              << " extension_violations=" << rep.extension_violations << "\n";
    return rep.violations + rep.extension_violations == 0 ? exit_ok : exit_not_found;
}

struct LowerArgs {
    std::string colouring, out;
    int s = 2, t = 2;
    seed_t seed = 0;
    std::uint64_t budget = 10'000'000;
    std::size_t orderings = 16;
};

int cmd_lower(const LowerArgs& args) {
    const EdgeColouring c = read_colouring(args.colouring);
    PipelineOptions opts;
    opts.orderings = args.orderings;
    const PipelineResult r = find_clean_kst_sub(c, args.s, args.t, args.seed, args.budget, opts);
    write_json(args.out, pipeline_to_json(c, r));
    std::cout << "lower n=" << c.vertex_count() << " outcome=" << to_string(r.outcome) << " aux_edges=" << r.aux_edges
              << " red_edges=" << r.red_edges;
    if (!r.reason.empty()) std::cout << " reason=\"" << r.reason << "\"";
    std::cout << "\n";
    switch (r.outcome) {
    case PipelineOutcome::found: return exit_ok;
    case PipelineOutcome::not_found: return exit_not_found;
    case PipelineOutcome::inconclusive: return exit_inconclusive;
    }
    return exit_inconclusive;
}

struct OracleArgs {
    std::vector<int> n;
    std::vector<std::string> patterns;
    std::string out;
};

int cmd_oracle(const OracleArgs& args) {
    std::ostringstream csv;
    csv << "n,pattern,f2\n";
    for (int n : args.n)
        for (const auto& name : args.patterns) csv << n << "," << name << "," << f2_exact(n, parse_pattern(name)).value << "\n";
    write_text(args.out, csv.str());
    if (!args.out.empty() && args.out != "-") std::cout << "oracle rows=" << args.n.size() * args.patterns.size() << " out=" << args.out << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Colour-isomorphic subgraph constructions and lower-bound search"};
    app.require_subcommand(1);

    ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "Random-polynomial colouring of K_n");
    construct->add_option("--a", ca.a, "Unrooted vertices of the target tree")->check(CLI::PositiveNumber);
    construct->add_option("--b", ca.b, "Edges of the target tree")->check(CLI::PositiveNumber);
    construct->add_option("--r", ca.r, "Roots of the target tree (default degree only)")->check(CLI::PositiveNumber);
    construct->add_option("--q", ca.q, "Field size (prime)");
    construct->add_option("--d", ca.d, "Polynomial degree bound");
    construct->add_option("--n", ca.n, "Number of vertices (default q^b)");
    construct->add_option("--seed", ca.seed);
    construct->add_option("--out", ca.out, "Colouring CSV path");
    construct->add_option("--stats", ca.stats, "Stats JSON path (default <out>.stats.json)");
    construct->add_option("--properized", ca.properized, "Also write the Vizing-properized colouring here");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Certify properties of a colouring");
    verify->add_option("--colouring", va.colouring)->required();
    verify->add_option("--tree", va.tree, "Rooted tree JSON (default: path of length 2 rooted at its leaves)");
    verify->add_option("--k0", va.k0, "Power to certify (default: max rooted collection + 1)");
    verify->add_option("--budget", va.budget, "Node budget for direct searches (0 skips the power search)");
    verify->add_option("--pattern", va.pattern, "Also search for a colour-isomorphic pair of this pattern");
    verify->add_option("--out", va.out, "Certificate JSON path");

    ConstraintArgs ka;
    auto* constraint = app.add_subcommand("constraint", "Constraint number of a system, or random trials on a tree");
    auto* sys_opt = constraint->add_option("--system", ka.system, "Correspondence system JSON");
    auto* tree_opt = constraint->add_option("--tree", ka.tree, "Balanced rooted tree JSON");
    sys_opt->excludes(tree_opt);
    constraint->add_option("--p", ka.p, "Copy pairs per system")->check(CLI::PositiveNumber);
    constraint->add_option("--trials", ka.trials);
    constraint->add_option("--seed", ka.seed);
    constraint->add_option("--host", ka.host, "Host vertex count for random copies");
    constraint->add_option("--out", ka.out, "Report JSON path");

    LowerArgs la;
    auto* lower = app.add_subcommand("lower", "Search a proper colouring for a clean K_{s,t}^sub pair");
    lower->add_option("--colouring", la.colouring)->required();
    lower->add_option("--s", la.s);
    lower->add_option("--t", la.t);
    lower->add_option("--seed", la.seed);
    lower->add_option("--budget", la.budget);
    lower->add_option("--orderings", la.orderings, "Random vertex orderings tried");
    lower->add_option("--out", la.out, "Diagnostics JSON path");

    OracleArgs oa;
    auto* oracle = app.add_subcommand("oracle", "Exact f2(n, H) for n <= 6");
    oracle->add_option("--n", oa.n)->required()->delimiter(',');
    oracle->add_option("--pattern", oa.patterns, "K2, K3, P3, P4, C4, 2K2, Ksub<s>x<t> or a graph JSON")
        ->required()
        ->delimiter(',');
    oracle->add_option("--out", oa.out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        if (*construct) return cmd_construct(ca);
        if (*verify) return cmd_verify(va);
        if (*constraint) {
            if (ka.system.empty() && ka.tree.empty()) throw input_error("constraint needs --system or --tree");
            return cmd_constraint(ka);
        }
        if (*lower) return cmd_lower(la);
        if (*oracle) return cmd_oracle(oa);
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return exit_input;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_inconclusive;
    }
    return exit_input;
}
