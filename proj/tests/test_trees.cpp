#include <ciso/trees.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>

using namespace ciso;

namespace {

RootedTree load_tree(const std::string& name) {
    return tree_from_json(oracle::load_json(std::string(CISO_FIXTURES) + "/trees/" + name + ".json"));
}

// Checks g is the 8-cycle: connected and 2-regular on 8 vertices.
bool is_c8(const Graph& g) {
    if (g.vertex_count() != 8 || g.edge_count() != 8 || !g.is_connected()) return false;
    for (int v = 0; v < 8; ++v)
        if (g.degree(v) != 2) return false;
    return true;
}

} // namespace

TEST(Density, Examples) {
    EXPECT_EQ(density(path_rooted_at_leaves(2)), rational(2));
    EXPECT_EQ(density(load_tree("edge_one_root")), rational(1));
    EXPECT_EQ(density(path_rooted_at_leaves(4)), rational(4, 3));
    EXPECT_EQ(density(path_rooted_at_leaves(5)), rational(5, 4));
}

TEST(Density, AllRootsIsAnError) {
    EXPECT_THROW(density(RootedTree(Graph(1, {}), {0})), parameter_error);
}

TEST(RootedTree, Validation) {
    EXPECT_THROW(RootedTree(Graph(3, {{0, 1}}), {0}), parameter_error);           // not connected
    EXPECT_THROW(RootedTree(Graph(3, {{0, 1}, {1, 2}}), {0, 1}), parameter_error);  // adjacent roots
    EXPECT_THROW(RootedTree(Graph(3, {{0, 1}, {1, 2}}), {0, 0}), parameter_error);  // repeated root
    RootedTree t(Graph(3, {{0, 1}, {1, 2}}), {0, 2});
    EXPECT_EQ(t.root_count(), 2);
    EXPECT_EQ(t.unrooted_count(), 1);
    EXPECT_EQ(t.edge_count(), 2);
}

TEST(Balanced, Examples) {
    EXPECT_TRUE(is_balanced(path_rooted_at_leaves(2)).balanced);
    EXPECT_TRUE(is_balanced(load_tree("star3_leaves")).balanced);
    EXPECT_TRUE(is_balanced(load_tree("path_x_u_v")).balanced);
    EXPECT_TRUE(is_balanced(load_tree("path5_leaves")).balanced);
    EXPECT_TRUE(is_balanced(load_tree("spider3x2_leaves")).balanced);
}

TEST(Balanced, WitnessOnFailure) {
    // Broom: leaves l1, l2 rooted on centre c, then c - x - y. rho = 4/3 but S = {y} gives 1.
    RootedTree t(Graph(5, {{0, 2}, {1, 2}, {2, 3}, {3, 4}}), {0, 1});
    auto res = is_balanced(t);
    ASSERT_FALSE(res.balanced);
    ASSERT_FALSE(res.witness.empty());
    EXPECT_LT(rational(edges_meeting(t, res.witness), static_cast<std::int64_t>(res.witness.size())), density(t));
    EXPECT_FALSE(oracle::balanced(t));
}

TEST(Balanced, CapExceeded) {
    std::vector<Edge> edges;
    for (int i = 0; i < 24; ++i) edges.emplace_back(i, i + 1);
    RootedTree t(Graph(25, edges), {0});
    EXPECT_THROW(is_balanced(t, 20), budget_error);
}

TEST(Balanced, FullSetAchievesDensity) {
    rng gen(3);
    for (int i = 0; i < 200; ++i) {
        auto t = random_rooted_tree(2 + static_cast<int>(gen.below(8)), gen);
        EXPECT_EQ(rational(edges_meeting(t, t.unrooted()), t.unrooted_count()), density(t));
    }
}

namespace {

// All labelled trees on n vertices via Pruefer codes.
void for_each_tree(int n, const std::function<void(const Graph&)>& fn) {
    if (n == 1) return fn(Graph(1, {}));
    if (n == 2) return fn(Graph(2, {{0, 1}}));
    std::vector<int> code(static_cast<std::size_t>(n - 2), 0);
    for (;;) {
        std::vector<int> deg(static_cast<std::size_t>(n), 1);
        for (int c : code) ++deg[static_cast<std::size_t>(c)];
        std::vector<Edge> edges;
        for (int c : code) {
            int leaf = 0;
            while (deg[static_cast<std::size_t>(leaf)] != 1) ++leaf;
            edges.emplace_back(leaf, c);
            --deg[static_cast<std::size_t>(leaf)];
            --deg[static_cast<std::size_t>(c)];
        }
        int u = -1, v = -1;
        for (int i = 0; i < n; ++i)
            if (deg[static_cast<std::size_t>(i)] == 1) (u < 0 ? u : v) = i;
        edges.emplace_back(u, v);
        fn(Graph(n, edges));
        std::size_t i = 0;
        while (i < code.size() && code[i] == n - 1) code[i++] = 0;
        if (i == code.size()) break;
        ++code[i];
    }
}

// Every independent root set with at least one root and one unrooted vertex.
void for_each_root_set(const Graph& g, const std::function<void(const std::vector<int>&)>& fn) {
    const int n = g.vertex_count();
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
        bool independent = true;
        for (const Edge& e : g.edges())
            if ((mask >> e.u & 1) && (mask >> e.v & 1)) independent = false;
        if (!independent) continue;
        std::vector<int> roots;
        for (int v = 0; v < n; ++v)
            if (mask >> v & 1) roots.push_back(v);
        fn(roots);
    }
}

} // namespace

TEST(Balanced, AgreesWithOracleUpToSixVertices) {
    std::size_t checked = 0, balanced = 0;
    for (int n = 2; n <= 6; ++n)
        for_each_tree(n, [&](const Graph& g) {
            for_each_root_set(g, [&](const std::vector<int>& roots) {
                RootedTree t(g, roots);
                const bool ours = is_balanced(t).balanced;
                ASSERT_EQ(ours, oracle::balanced(t)) << "n=" << n;
                ++checked;
                balanced += ours;
            });
        });
    EXPECT_GT(checked, 10000u);
    EXPECT_GT(balanced, 0u);
    EXPECT_LT(balanced, checked);
}

TEST(Balanced, AgreesWithOracleOnSevenAndEightVertices) {
    // n = 7: every labelled tree (7^5 codes) with the leaf root set, when independent.
    std::size_t checked = 0;
    for_each_tree(7, [&](const Graph& g) {
        std::vector<int> roots;
        for (int v = 0; v < 7; ++v)
            if (g.degree(v) == 1) roots.push_back(v);
        RootedTree t(g, roots);
        ASSERT_EQ(is_balanced(t).balanced, oracle::balanced(t));
        ++checked;
    });
    EXPECT_EQ(checked, 16807u);
    rng gen(8);
    for (int i = 0; i < 3000; ++i) {
        auto t = random_rooted_tree(8, gen);
        ASSERT_EQ(is_balanced(t).balanced, oracle::balanced(t));
    }
}

TEST(Power, Counts) {
    for (const char* name : {"p2_leaves", "edge_one_root", "star3_leaves", "path5_leaves", "caterpillar"}) {
        auto t = load_tree(name);
        for (int k = 1; k <= 4; ++k) {
            Graph p = power(t, k);
            EXPECT_EQ(p.vertex_count(), t.root_count() + k * t.unrooted_count()) << name;
            EXPECT_EQ(p.edge_count(), static_cast<std::size_t>(k * t.edge_count())) << name;
        }
    }
}

TEST(Power, P2CubedIsK23) {
    Graph p = power(path_rooted_at_leaves(2), 3);
    ASSERT_EQ(p.vertex_count(), 5);
    ASSERT_EQ(p.edge_count(), 6u);
    // Roots 0, 1 are adjacent to every copy vertex, copies pairwise nonadjacent.
    for (int c = 2; c < 5; ++c) {
        EXPECT_TRUE(p.has_edge(0, c));
        EXPECT_TRUE(p.has_edge(1, c));
    }
    EXPECT_FALSE(p.has_edge(0, 1));
}

TEST(Power, FirstPowerIsTheTree) {
    auto t = load_tree("caterpillar");
    Graph p = power(t, 1);
    EXPECT_EQ(p.vertex_count(), t.vertex_count());
    EXPECT_EQ(p.edge_count(), static_cast<std::size_t>(t.edge_count()));
    EXPECT_TRUE(p.is_connected());
}

TEST(Subdivision, Counts) {
    EXPECT_TRUE(is_c8(subdivision_kst(2, 2)));
    EXPECT_EQ(subdivision_kst(2, 3).vertex_count(), 11);
    EXPECT_EQ(subdivision_kst(2, 3).edge_count(), 12u);
    EXPECT_EQ(subdivision_kst(3, 3).vertex_count(), 15);
    EXPECT_EQ(subdivision_kst(3, 3).edge_count(), 18u);
    EXPECT_THROW(subdivision_kst(1, 3), parameter_error);
    EXPECT_THROW(subdivision_kst(3, 2), parameter_error);
}

TEST(RandomTree, RootsIndependentAndNonTrivial) {
    rng gen(12);
    for (int i = 0; i < 500; ++i) {
        auto t = random_rooted_tree(2 + static_cast<int>(gen.below(9)), gen);
        EXPECT_GE(t.root_count(), 1);
        EXPECT_GE(t.unrooted_count(), 1);
    }
    auto b = random_balanced_tree(6, gen);
    EXPECT_TRUE(is_balanced(b).balanced);
}

TEST(TreeJson, RoundTripAndErrors) {
    auto t = load_tree("spider3x2_leaves");
    nlohmann::json j;
    to_json(j, t);
    auto u = tree_from_json(j);
    EXPECT_EQ(u.graph().edges(), t.graph().edges());
    EXPECT_EQ(u.roots(), t.roots());
    EXPECT_THROW(tree_from_json(nlohmann::json::parse(R"({"vertices":["a","b"],"edges":[["a","c"]],"roots":["a"]})")),
                 parse_error);
    EXPECT_THROW(tree_from_json(nlohmann::json::parse(R"({"vertices":["a","b"],"edges":[["a","b"]]})")), parse_error);
}
