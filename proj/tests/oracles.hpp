#pragma once

// Independent reference implementations used only by the tests. None of
// these call into the library code they are compared against.

#include <ciso/colouring.hpp>
#include <ciso/field_poly.hpp>
#include <ciso/graph.hpp>
#include <ciso/trees.hpp>

#include <array>
#include <cstdint>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

namespace oracle {

inline nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    return nlohmann::json::parse(in);
}

/// Term-by-term evaluation: x^e by repeated multiplication, no power tables.
inline std::uint64_t naive_eval(const ciso::MultiPoly& p, const std::vector<ciso::felem>& x) {
    const std::uint64_t q = p.field().modulus();
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::uint64_t term = p.coeffs()[i];
        auto e = p.basis().exponents(i);
        for (std::size_t v = 0; v < e.size(); ++v)
            for (int k = 0; k < e[v]; ++k) term = term * x[v] % q;
        sum = (sum + term) % q;
    }
    return sum;
}

/// Exponent vectors of total degree <= d, by odometer over [0, d]^nvars.
inline std::size_t enumerate_monomials(int nvars, int d) {
    std::vector<int> e(static_cast<std::size_t>(nvars), 0);
    std::size_t count = 0;
    for (;;) {
        int total = 0;
        for (int x : e) total += x;
        if (total <= d) ++count;
        int i = 0;
        while (i < nvars && e[static_cast<std::size_t>(i)] == d) e[static_cast<std::size_t>(i++)] = 0;
        if (i == nvars) break;
        ++e[static_cast<std::size_t>(i)];
    }
    return count;
}

/// Balancedness by walking subsets from the full set downwards, with set
/// membership and cross-multiplied integer comparisons.
inline bool balanced(const ciso::RootedTree& t) {
    const auto& un = t.unrooted();
    const int a = static_cast<int>(un.size());
    const std::int64_t b = static_cast<std::int64_t>(t.edge_count());
    for (std::uint64_t mask = (std::uint64_t{1} << a) - 1; mask >= 1; --mask) {
        std::set<int> s;
        for (int i = 0; i < a; ++i)
            if (mask >> i & 1) s.insert(un[static_cast<std::size_t>(i)]);
        std::int64_t meet = 0;
        for (const auto& e : t.graph().edges())
            if (s.count(e.u) || s.count(e.v)) ++meet;
        // meet / |S| < b / a
        if (meet * a < b * static_cast<std::int64_t>(s.size())) return false;
    }
    return true;
}

/// Edges of the relation as adjacency, closed by BFS: the class label of each edge.
inline std::map<ciso::Edge, int> closure(const std::vector<ciso::Edge>& nodes,
                                         const std::vector<std::pair<ciso::Edge, ciso::Edge>>& pairs) {
    std::map<ciso::Edge, std::vector<ciso::Edge>> adj;
    for (const auto& e : nodes) adj[e];
    for (const auto& [a, b] : pairs) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::map<ciso::Edge, int> label;
    int next = 0;
    for (const auto& [start, _] : adj) {
        if (label.count(start)) continue;
        std::deque<ciso::Edge> queue{start};
        label[start] = next;
        while (!queue.empty()) {
            auto cur = queue.front();
            queue.pop_front();
            for (const auto& w : adj[cur])
                if (!label.count(w)) label[w] = next, queue.push_back(w);
        }
        ++next;
    }
    return label;
}

inline bool same_partition(const std::map<ciso::Edge, int>& x, const std::map<ciso::Edge, int>& y) {
    if (x.size() != y.size()) return false;
    std::map<int, int> fwd, back;
    for (const auto& [e, l] : x) {
        auto it = y.find(e);
        if (it == y.end()) return false;
        auto [f, nf] = fwd.try_emplace(l, it->second);
        auto [g, ng] = back.try_emplace(it->second, l);
        if (f->second != it->second || g->second != l) return false;
    }
    return true;
}

/// Smallest number of generator pairs whose closure equals the closure of all
/// generators, by trying subsets in increasing size.
inline std::size_t min_generating_subset(const std::vector<std::pair<ciso::Edge, ciso::Edge>>& gens) {
    std::vector<ciso::Edge> nodes;
    for (const auto& [a, b] : gens) nodes.push_back(a), nodes.push_back(b);
    const auto full = closure(nodes, gens);
    const std::size_t g = gens.size();
    for (std::size_t size = 0; size <= g; ++size) {
        // All subsets of `size` generators via a combination index vector.
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        for (;;) {
            std::vector<std::pair<ciso::Edge, ciso::Edge>> chosen;
            for (auto i : idx) chosen.push_back(gens[i]);
            if (same_partition(closure(nodes, chosen), full)) return size;
            std::size_t i = size;
            while (i > 0 && idx[i - 1] == g - size + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return g;
}

/// Same-coloured vertex-disjoint edge pairs, by quadratic enumeration.
inline std::uint64_t mono_2matchings(const ciso::EdgeColouring& c) {
    std::vector<std::array<int, 2>> es;
    const int n = c.vertex_count();
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) es.push_back({u, v});
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j) {
            auto [a, b] = es[i];
            auto [x, y] = es[j];
            if (a == x || a == y || b == x || b == y) continue;
            if (c.colour(a, b) == c.colour(x, y)) ++count;
        }
    return count;
}

using AuxTuple = std::tuple<int, int, int, int>;  // (x1, x2, y1, y2)

/// Aux edges from mono 2-matchings: each same-coloured disjoint edge pair is
/// tried in all 8 orientations against the quarter roles of `ordering`.
inline std::set<AuxTuple> aux_edges(const ciso::EdgeColouring& c, const std::vector<int>& ordering) {
    const int n = c.vertex_count(), m = n / 4;
    std::vector<int> part(static_cast<std::size_t>(n), -1);
    for (int pos = 0; pos < 4 * m; ++pos) part[static_cast<std::size_t>(ordering[static_cast<std::size_t>(pos)])] = pos / m;
    std::set<AuxTuple> out;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y) {
                    if (x == y || x == a || x == b || y == a || y == b) continue;
                    if (c.colour(a, b) != c.colour(x, y)) continue;
                    // edge {a, b} plays (x1, y1), edge {x, y} plays (x2, y2)
                    if (part[static_cast<std::size_t>(a)] == 0 && part[static_cast<std::size_t>(b)] == 2 &&
                        part[static_cast<std::size_t>(x)] == 1 && part[static_cast<std::size_t>(y)] == 3)
                        out.emplace(a, x, b, y);
                }
        }
    return out;
}

} // namespace oracle
