// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <ciso/ciso.hpp>

#include "oracles.hpp"
#include "plant.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace ciso;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string fixture(const std::string& name) { return std::string(CISO_FIXTURES) + "/" + name; }

RootedTree load_tree(const std::string& name) { return tree_from_json(oracle::load_json(fixture("trees/" + name + ".json"))); }

EdgeColouring shuffled_round_robin(int n, seed_t seed) {
    rng gen(seed);
    auto perm = gen.permutation(n);
    auto rr = round_robin_colouring(n);
    std::vector<colour_t> cols(rr.edge_count());
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            cols[EdgeColouring::edge_index(n, perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(v)])] =
                rr.colour(u, v);
    return EdgeColouring(n, std::move(cols));
}

Outcome ac1() {
    Outcome o;
    const auto k1 = constraint_number(system_from_json(oracle::load_json(fixture("disjoint_path_pairs.json"))));
    const auto k2 = constraint_number(system_from_json(oracle::load_json(fixture("crossed_path_pairs.json"))));
    o.require(k1 == 10, "disjoint path pairs give k=" + std::to_string(k1));
    o.require(k2 == 9, "crossed path pairs give k=" + std::to_string(k2));
    std::size_t trees = 0;
    for (const auto& entry : std::filesystem::directory_iterator(fixture("trees"))) {
        const RootedTree t = tree_from_json(oracle::load_json(entry.path().string()));
        const int r = t.root_count(), a = t.unrooted_count();
        std::vector<int> x, y;
        LabelledCopy c1{std::vector<int>(static_cast<std::size_t>(t.vertex_count()))}, c2 = c1;
        for (int i = 0; i < r; ++i) {
            x.push_back(i);
            y.push_back(r + i);
            c1.embedding[static_cast<std::size_t>(t.roots()[static_cast<std::size_t>(i)])] = i;
            c2.embedding[static_cast<std::size_t>(t.roots()[static_cast<std::size_t>(i)])] = r + i;
        }
        for (int i = 0; i < a; ++i) {
            c1.embedding[static_cast<std::size_t>(t.unrooted()[static_cast<std::size_t>(i)])] = 2 * r + i;
            c2.embedding[static_cast<std::size_t>(t.unrooted()[static_cast<std::size_t>(i)])] = 2 * r + a + i;
        }
        const auto k = constraint_number(glue(t, {{c1, c2}}, x, y));
        o.require(k == static_cast<std::size_t>(t.edge_count()), entry.path().stem().string() + " gives k=" + std::to_string(k));
        ++trees;
    }
    o.require(trees == 8, "corpus has " + std::to_string(trees) + " trees");
    o.detail << "k=" << k1 << "," << k2 << "; p=1 gives k=b on " << trees << " trees";
    return o;
}

Outcome ac2() {
    Outcome o;
    std::size_t systems = 0, violations = 0, chains = 0, steps = 0, ext_violations = 0;
    rational tightest(1000);
    for (const char* name : {"p2_leaves", "path5_leaves", "star3_leaves", "path_x_u_v", "spider3x2_leaves"}) {
        const RootedTree t = load_tree(name);
        o.require(is_balanced(t).balanced, std::string(name) + " is not balanced");
        const int host = 2 * t.root_count() + 3 * t.unrooted_count();
        for (int p = 1; p <= 4; ++p) {
            const auto rep = check_balance_inequality(t, p, 250, host, derive_seed(2024, static_cast<std::uint64_t>(p)));
            systems += rep.trials;
            violations += rep.violations;
            if (p >= 2) chains += rep.trials;
            steps += rep.extension_steps;
            ext_violations += rep.extension_violations;
            if (rep.tightest_ratio) tightest = std::min(tightest, *rep.tightest_ratio);
        }
    }
    o.require(systems == 5000, "ran " + std::to_string(systems) + " systems");
    o.require(violations == 0, std::to_string(violations) + " inequality violations");
    o.require(chains >= 1000, "only " + std::to_string(chains) + " extension chains");
    o.require(ext_violations == 0, std::to_string(ext_violations) + " extension violations");
    o.detail << systems << " systems (1000 per tree, p=1..4), 0 violations required, got " << violations
             << "; tightest 2k/(rho(v-2r)) = " << tightest << "; " << chains << " extension chains, " << steps
             << " steps, " << ext_violations << " violations";
    return o;
}

Outcome ac3() {
    Outcome o;
    struct Case {
        std::uint64_t q;
        std::vector<std::vector<felem>> points;
    };
    const std::vector<Case> cases{{5, {{1, 2}}}, {5, {{1, 2}, {3, 0}}}, {7, {{4, 6}}}, {7, {{1, 2}, {3, 4}}}};
    for (const auto& c : cases) {
        const int m = static_cast<int>(c.points.size());
        const auto est = vanishing_probability_trial(PrimeField(c.q), c.points, m + 1, 50000, derive_seed(c.q, static_cast<std::uint64_t>(m)));
        const double expected = std::pow(static_cast<double>(c.q), -m);
        const double sigma = std::sqrt(expected * (1 - expected) / 50000.0);
        const double z = (est.estimate - expected) / sigma;
        o.require(std::abs(z) <= 3.0, "(q,m)=(" + std::to_string(c.q) + "," + std::to_string(m) + ") off by " + std::to_string(z) + " sigma");
        o.detail << "(" << c.q << "," << m << "): " << est.estimate << " vs " << expected << " (z=" << std::setprecision(3) << z
                 << std::setprecision(6) << ") ";
    }
    return o;
}

Outcome ac4() {
    Outcome o;
    const RootedTree t = path_rooted_at_leaves(2);
    for (std::uint64_t q : {5u, 7u}) {
        std::ostringstream cs, maxes;
        for (seed_t seed = 1; seed <= 10; ++seed) {
            ConstructionParams p;
            p.tree_a = 1;
            p.tree_b = 2;
            p.q = q;
            p.seed = seed;
            const auto con = construct_random_colouring(p);
            const auto& c = con.colouring;
            const std::string tag = "q=" + std::to_string(q) + " seed=" + std::to_string(seed);
            o.require(c.palette().size() <= q * q, tag + " palette " + std::to_string(c.palette().size()));
            const int bound = boundedness(c);
            const auto proper = vizing_properize(c);
            o.require(!is_proper(proper), tag + " Vizing output not proper");
            o.require(proper.palette().size() <= static_cast<std::size_t>(bound + 1) * q * q,
                      tag + " properized palette " + std::to_string(proper.palette().size()));
            const auto best = max_rooted_collection(c, t);
            const auto cert = certify_power_free(c, t, best.max_size + 1, 0);
            o.require(cert.holds && cert.rooted.max_size == best.max_size, tag + " certificate at max+1 failed");
            cs << (seed > 1 ? "," : "") << bound;
            maxes << (seed > 1 ? "," : "") << best.max_size;
        }
        o.detail << "q=" << q << ": C=[" << cs.str() << "] max|C(X,Y)|=[" << maxes.str() << "]; ";
    }
    return o;
}

Outcome ac5() {
    Outcome o;
    const auto k4 = f2_exact(4, named_pattern("K2")).value, k5 = f2_exact(5, named_pattern("K2")).value;
    o.require(k4 == 6, "f2(4,K2)=" + std::to_string(k4));
    o.require(k5 == 10, "f2(5,K2)=" + std::to_string(k5));
    std::size_t outputs = 0;
    for (int n = 4; n <= 6; ++n)
        for (const char* name : {"K2", "P3", "2K2", "K3", "P4", "C4"}) {
            const auto r = f2_exact(n, named_pattern(name));
            o.require(r.value >= static_cast<std::size_t>(n - 1), "f2(" + std::to_string(n) + "," + name + ") below n-1");
            o.require(!is_proper(r.colouring) && r.colouring.palette().size() == r.value,
                      std::string("oracle colouring for ") + name + " inconsistent");
            ++outputs;
        }
    o.detail << "f2(4,K2)=" << k4 << " f2(5,K2)=" << k5 << "; " << outputs << " oracle outputs all >= n-1";
    return o;
}

Outcome ac6() {
    Outcome o;
    auto tuples = [](const AuxGraph& f) {
        std::set<oracle::AuxTuple> out;
        for (auto [a, b] : f.graph.edges()) {
            const auto& l = f.graph.left_shadow(a);
            const auto& r = f.graph.right_shadow(b);
            out.emplace(l[0], l[1], r[0], r[1]);
        }
        return out;
    };
    std::size_t fixtures = 0, shadow_triples = 0, shadow_violations = 0;
    for (int n = 8; n <= 12; ++n)
        for (seed_t s = 0; s < 4; ++s) {
            const std::vector<EdgeColouring> colourings{shuffled_round_robin(n, s),
                                                        plant::random_pair(n, named_pattern("P4"), s).colouring,
                                                        plant::random_pair(n, named_pattern("C4"), s + 50).colouring};
            for (const auto& c : colourings) {
                rng gen(derive_seed(s, static_cast<std::uint64_t>(n)));
                for (int k = 0; k < 25; ++k) {
                    const auto ordering = gen.permutation(n);
                    const AuxGraph f = build_aux_graph(c, ordering);
                    o.require(tuples(f) == oracle::aux_edges(c, ordering), "aux mismatch at n=" + std::to_string(n));
                    const auto rep = check_shadow_disjointness_exhaustive(f);
                    shadow_triples += rep.checked;
                    shadow_violations += rep.violations.size();
                    ++fixtures;
                }
            }
        }
    o.require(shadow_violations == 0, std::to_string(shadow_violations) + " shadow violations");

    std::size_t by_pipeline = 0, by_red = 0, by_search = 0, certified = 0;
    for (int i = 0; i < 20; ++i) {
        const int n = 24 + (24 * i) / 19;
        const auto pl = plant::kst_for_pipeline(n, 2, 2, derive_seed(606, static_cast<std::uint64_t>(i)));
        PipelineOptions opts;
        opts.fixed_orderings = {pl.ordering};
        const auto res = find_clean_kst_sub(pl.colouring, 2, 2, static_cast<seed_t>(i), 20'000'000, opts);
        std::optional<EmbeddedPair> w;
        if (res.outcome == PipelineOutcome::found) {
            w = res.witness;
            ++by_pipeline;
            by_red += res.method == "red_embedding";
        } else {
            const auto direct = find_pair(pl.colouring, subdivision_kst(2, 2), 50'000'000);
            if (direct.pair) w = direct.pair, ++by_search;
        }
        const bool ok = w && !check_colour_isomorphic_pair(pl.colouring, w->pattern, w->map1, w->map2);
        o.require(ok, "no certified witness for plant " + std::to_string(i) + " (n=" + std::to_string(n) + ")");
        certified += ok;
    }
    o.detail << fixtures << " (colouring, ordering) fixtures at n=8..12 match brute force; " << shadow_triples << " shadow triples, "
             << shadow_violations << " violations; planted K_{2,2}^sub: " << certified << "/20 certified (" << by_pipeline
             << " pipeline of which " << by_red << " via red K_{2,2}, " << by_search << " direct search)";
    return o;
}

using PairKey = std::tuple<std::string, std::vector<int>, std::vector<int>>;

std::set<PairKey> all_pairs(const EdgeColouring& c, const std::string& name) {
    std::set<PairKey> out;
    LockstepSearch search(c, named_pattern(name));
    search.plan();
    search.run(
        [&](const std::vector<int>& m1, const std::vector<int>& m2) {
            out.emplace(name, m1, m2);
            return true;
        },
        unlimited_budget);
    return out;
}

Outcome ac7() {
    Outcome o;
    std::size_t before_total = 0, after_total = 0, nonempty = 0;
    for (seed_t s = 0; s < 50; ++s) {
        rng gen(derive_seed(77, s));
        const int n = 10;
        const auto palette = 4 + gen.below(6);
        std::vector<colour_t> cols(EdgeColouring::pair_count(n));
        for (auto& x : cols) x = gen.below(palette);
        // Monochromatic K4 on a random vertex set, plus a monochromatic perfect matching.
        auto perm = gen.permutation(n);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                cols[EdgeColouring::edge_index(n, perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)])] = 100;
        perm = gen.permutation(n);
        for (int i = 0; i < n; i += 2)
            cols[EdgeColouring::edge_index(n, perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i) + 1])] = 101;
        const EdgeColouring c(n, cols);
        const EdgeColouring refined = vizing_properize(c);
        o.require(!is_proper(refined), "refined colouring not proper");
        std::size_t b = 0;
        for (const char* name : {"K2", "P3", "2K2", "K3"}) {
            const auto before = all_pairs(c, name);
            const auto after = all_pairs(refined, name);
            o.require(std::includes(before.begin(), before.end(), after.begin(), after.end()),
                      std::string("seed ") + std::to_string(s) + " " + name + ": refinement created a new pair");
            b += before.size();
            after_total += after.size();
        }
        before_total += b;
        nonempty += b > 0;
    }
    o.require(nonempty == 50, "some colourings had no pairs before refinement");
    o.detail << "50 colourings of K10; pairs before " << before_total << ", after " << after_total << " (all subsets)";
    return o;
}

} // namespace

int main() {
    struct Criterion {
        const char* id;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{{"AC1", 1, ac1},   {"AC2", 60, ac2},  {"AC3", 120, ac3}, {"AC4", 600, ac4},
                                          {"AC5", 300, ac5}, {"AC6", 600, ac6}, {"AC7", 120, ac7}};
    bool all = true;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.require(secs < c.limit_s, "runtime over " + std::to_string(static_cast<int>(c.limit_s)) + " s");
        all = all && o.pass;
        std::cout << c.id << " " << (o.pass ? "PASS" : "FAIL") << " (" << std::fixed << std::setprecision(2) << secs
                  << " s, limit " << std::setprecision(0) << c.limit_s << " s) " << std::defaultfloat << std::setprecision(6)
                  << o.detail.str() << std::endl;
    }
    return all ? 0 : 1;
}
