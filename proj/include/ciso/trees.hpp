#pragma once

// Rooted trees: density, balancedness, rooted powers, and the 1-subdivided
// complete bipartite family.

#include <ciso/error.hpp>
#include <ciso/graph.hpp>
#include <ciso/rng.hpp>

#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ciso {

using rational = boost::rational<std::int64_t>;

/// A tree with an ordered, independent set of roots. The order of `roots()`
/// is the order in which a labelled copy sends roots to a host root tuple.
class RootedTree {
public:
    RootedTree(Graph tree, std::vector<int> roots) : tree_(std::move(tree)), roots_(std::move(roots)) {
        const int n = tree_.vertex_count();
        if (n < 1) throw parameter_error("tree needs at least one vertex");
        if (tree_.edge_count() != static_cast<std::size_t>(n - 1) || !tree_.is_connected())
            throw parameter_error("edge set does not form a tree");
        is_root_.assign(static_cast<std::size_t>(n), 0);
        for (int r : roots_) {
            if (r < 0 || r >= n) throw parameter_error("root out of range");
            if (is_root_[static_cast<std::size_t>(r)]) throw parameter_error("repeated root " + tree_.label(r));
            is_root_[static_cast<std::size_t>(r)] = 1;
        }
        for (const Edge& e : tree_.edges())
            if (is_root_[static_cast<std::size_t>(e.u)] && is_root_[static_cast<std::size_t>(e.v)])
                throw parameter_error("roots " + tree_.label(e.u) + " and " + tree_.label(e.v) + " are adjacent");
        for (int v = 0; v < n; ++v)
            if (!is_root_[static_cast<std::size_t>(v)]) unrooted_.push_back(v);
    }

    const Graph& graph() const noexcept { return tree_; }
    const std::vector<int>& roots() const noexcept { return roots_; }
    const std::vector<int>& unrooted() const noexcept { return unrooted_; }
    bool is_root(int v) const { return is_root_[static_cast<std::size_t>(v)] != 0; }

    int vertex_count() const noexcept { return tree_.vertex_count(); }
    int root_count() const noexcept { return static_cast<int>(roots_.size()); }             // r
    int unrooted_count() const noexcept { return static_cast<int>(unrooted_.size()); }      // a
    int edge_count() const noexcept { return static_cast<int>(tree_.edge_count()); }         // b

private:
    Graph tree_;
    std::vector<int> roots_;
    std::vector<char> is_root_;
    std::vector<int> unrooted_;
};

/// rho_T = e(T) / (v(T) - |R|), exact.
inline rational density(const RootedTree& t) {
    if (t.unrooted_count() == 0) throw parameter_error("every vertex is a root; density undefined");
    return rational(t.edge_count(), t.unrooted_count());
}

/// Number of edges of `t` with at least one endpoint in `subset`.
inline int edges_meeting(const RootedTree& t, const std::vector<int>& subset) {
    std::vector<char> in(static_cast<std::size_t>(t.vertex_count()), 0);
    for (int v : subset) in[static_cast<std::size_t>(v)] = 1;
    int count = 0;
    for (const Edge& e : t.graph().edges())
        if (in[static_cast<std::size_t>(e.u)] || in[static_cast<std::size_t>(e.v)]) ++count;
    return count;
}

struct BalanceResult {
    bool balanced = true;
    std::vector<int> witness;  // a nonempty unrooted S with e(S)/|S| < rho_T, when not balanced
    rational min_ratio{0};     // min over nonempty S of e(S)/|S|
};

inline constexpr int default_balance_cap = 20;

/// Decides e(S)/|S| >= rho_T for every nonempty S of unrooted vertices by
/// enumerating all 2^a - 1 subsets.
inline BalanceResult is_balanced(const RootedTree& t, int cap = default_balance_cap) {
    const int a = t.unrooted_count();
    if (a == 0) throw parameter_error("every vertex is a root; balancedness undefined");
    if (a > cap || a > 62)
        throw budget_error("2^" + std::to_string(a) + " subsets exceed the enumeration cap 2^" + std::to_string(cap));
    const rational rho = density(t);

    std::vector<int> pos(static_cast<std::size_t>(t.vertex_count()), -1);
    for (int i = 0; i < a; ++i) pos[static_cast<std::size_t>(t.unrooted()[static_cast<std::size_t>(i)])] = i;
    std::vector<std::uint64_t> edge_mask;
    for (const Edge& e : t.graph().edges()) {
        std::uint64_t m = 0;
        if (pos[static_cast<std::size_t>(e.u)] >= 0) m |= std::uint64_t{1} << pos[static_cast<std::size_t>(e.u)];
        if (pos[static_cast<std::size_t>(e.v)] >= 0) m |= std::uint64_t{1} << pos[static_cast<std::size_t>(e.v)];
        edge_mask.push_back(m);
    }

    BalanceResult out;
    out.min_ratio = rho;
    std::optional<std::uint64_t> worst;
    const std::uint64_t full = (std::uint64_t{1} << a) - 1;
    for (std::uint64_t s = 1; s <= full; ++s) {
        std::int64_t hit = 0;
        for (std::uint64_t m : edge_mask) hit += (m & s) != 0;
        const rational ratio(hit, std::popcount(s));
        if (ratio < out.min_ratio) {
            out.min_ratio = ratio;
            worst = s;
        }
    }
    if (worst) {
        out.balanced = false;
        for (int i = 0; i < a; ++i)
            if ((*worst >> i) & 1) out.witness.push_back(t.unrooted()[static_cast<std::size_t>(i)]);
    }
    return out;
}

/// K-th rooted power: k labelled copies of t glued along the root set.
/// Vertices: roots first (in root order, keeping their labels), then the
/// unrooted vertices of copy 0, copy 1, ... labelled "<label>#<copy>".
inline Graph power(const RootedTree& t, int k) {
    if (k < 1) throw parameter_error("power needs k >= 1");
    const int r = t.root_count(), a = t.unrooted_count();
    std::vector<int> slot(static_cast<std::size_t>(t.vertex_count()), -1);
    std::vector<std::string> labels;
    for (int i = 0; i < r; ++i) {
        slot[static_cast<std::size_t>(t.roots()[static_cast<std::size_t>(i)])] = i;
        labels.push_back(t.graph().label(t.roots()[static_cast<std::size_t>(i)]));
    }
    for (int i = 0; i < a; ++i) slot[static_cast<std::size_t>(t.unrooted()[static_cast<std::size_t>(i)])] = r + i;
    for (int c = 0; c < k; ++c)
        for (int v : t.unrooted()) labels.push_back(t.graph().label(v) + "#" + std::to_string(c));

    auto place = [&](int v, int c) {
        int s = slot[static_cast<std::size_t>(v)];
        return t.is_root(v) ? s : s + c * a;
    };
    std::vector<Edge> edges;
    for (int c = 0; c < k; ++c)
        for (const Edge& e : t.graph().edges()) edges.emplace_back(place(e.u, c), place(e.v, c));
    return Graph(r + k * a, std::move(edges), std::move(labels));
}

/// K_{s,t} with every edge subdivided once. Vertices: branch side
/// L_0..L_{s-1}, branch side R_0..R_{t-1}, then M_{i,j} at s + t + i*t + j.
inline Graph subdivision_kst(int s, int t) {
    if (s < 2 || t < s) throw parameter_error("K_{s,t}^sub needs 2 <= s <= t");
    std::vector<std::string> labels;
    for (int i = 0; i < s; ++i) labels.push_back("L" + std::to_string(i));
    for (int j = 0; j < t; ++j) labels.push_back("R" + std::to_string(j));
    std::vector<Edge> edges;
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < t; ++j) {
            const int mid = s + t + i * t + j;
            labels.push_back("M" + std::to_string(i) + "," + std::to_string(j));
            edges.emplace_back(i, mid);
            edges.emplace_back(mid, s + j);
        }
    return Graph(s + t + s * t, std::move(edges), std::move(labels));
}

/// Uniform labelled tree on n vertices (Pruefer decoding) with a random
/// independent root set holding at least one root and one unrooted vertex.
inline RootedTree random_rooted_tree(int n, rng& gen) {
    if (n < 2) throw parameter_error("random rooted tree needs n >= 2");
    std::vector<Edge> edges;
    if (n == 2) {
        edges.emplace_back(0, 1);
    } else {
        std::vector<int> code(static_cast<std::size_t>(n - 2));
        for (auto& c : code) c = static_cast<int>(gen.below(static_cast<std::uint64_t>(n)));
        std::vector<int> deg(static_cast<std::size_t>(n), 1);
        for (int c : code) ++deg[static_cast<std::size_t>(c)];
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
    }
    Graph g(n, std::move(edges));

    for (;;) {
        std::vector<int> order = gen.permutation(n);
        std::vector<char> blocked(static_cast<std::size_t>(n), 0);
        std::vector<int> roots;
        for (int v : order) {
            if (blocked[static_cast<std::size_t>(v)] || !gen.coin()) continue;
            roots.push_back(v);
            blocked[static_cast<std::size_t>(v)] = 1;
            for (int w : g.neighbours(v)) blocked[static_cast<std::size_t>(w)] = 1;
        }
        if (!roots.empty() && static_cast<int>(roots.size()) < n) return RootedTree(g, std::move(roots));
    }
}

/// Draws random rooted trees on n vertices until one is balanced.
inline RootedTree random_balanced_tree(int n, rng& gen, int max_attempts = 10000) {
    for (int i = 0; i < max_attempts; ++i) {
        RootedTree t = random_rooted_tree(n, gen);
        if (is_balanced(t).balanced) return t;
    }
    throw budget_error("no balanced tree found within the attempt budget");
}

/// Path with `length` edges, rooted at both leaves (root order: first leaf, last leaf).
inline RootedTree path_rooted_at_leaves(int length) {
    if (length < 2) throw parameter_error("a path rooted at both leaves needs length >= 2");
    std::vector<Edge> edges;
    for (int i = 0; i < length; ++i) edges.emplace_back(i, i + 1);
    return RootedTree(Graph(length + 1, std::move(edges)), {0, length});
}

// Tree JSON: {vertices: [labels], edges: [[u, v], ...], roots: [labels]}.

inline void to_json(nlohmann::json& j, const RootedTree& t) {
    to_json(j, t.graph());
    auto roots = nlohmann::json::array();
    for (int r : t.roots()) roots.push_back(t.graph().label(r));
    j["roots"] = roots;
}

inline RootedTree tree_from_json(const nlohmann::json& j) {
    Graph g = graph_from_json(j);
    try {
        detail::LabelIndex idx(j.at("vertices"));
        std::vector<int> roots;
        for (const auto& r : j.at("roots")) roots.push_back(idx.at(r));
        return RootedTree(std::move(g), std::move(roots));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed tree JSON: ") + e.what());
    } catch (const parameter_error& e) {
        throw parse_error(std::string("invalid tree: ") + e.what());
    }
}

} // namespace ciso
