#pragma once

// Witness finder for two colour-isomorphic disjoint copies of K_{s,t}^sub in
// a proper colouring, through the auxiliary graph of monochromatic
// 2-matchings: ordering -> aux graph -> almost-regular subgraph -> codegree
// red/blue classification -> red K_{s,t} -> greedy clean subdivision.

#include <ciso/checker.hpp>
#include <ciso/colouring.hpp>
#include <ciso/error.hpp>
#include <ciso/graph.hpp>
#include <ciso/rng.hpp>
#include <ciso/trees.hpp>
#include <ciso/witness_search.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ciso {

/// Underlying K_n vertices of an auxiliary vertex: (x1, x2) or (y1, y2).
using Shadow = std::array<int, 2>;

/// Bipartite graph with sides 0..left-1 and 0..right-1. Shadows are optional
/// (empty vectors) for graphs that do not come from a colouring.
class BipartiteGraph {
public:
    BipartiteGraph() = default;

    BipartiteGraph(int left, int right, std::vector<std::pair<int, int>> edges, std::vector<Shadow> left_shadow = {},
                   std::vector<Shadow> right_shadow = {})
        : left_(left), right_(right), edges_(std::move(edges)), left_shadow_(std::move(left_shadow)),
          right_shadow_(std::move(right_shadow)), ladj_(static_cast<std::size_t>(left)), radj_(static_cast<std::size_t>(right)) {
        if (left < 0 || right < 0) throw parameter_error("negative side size");
        if (!left_shadow_.empty() && left_shadow_.size() != static_cast<std::size_t>(left))
            throw parameter_error("left shadow count mismatch");
        if (!right_shadow_.empty() && right_shadow_.size() != static_cast<std::size_t>(right))
            throw parameter_error("right shadow count mismatch");
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        for (auto [a, b] : edges_) {
            if (a < 0 || a >= left || b < 0 || b >= right) throw parameter_error("bipartite edge out of range");
            ladj_[static_cast<std::size_t>(a)].push_back(b);
            radj_[static_cast<std::size_t>(b)].push_back(a);
        }
    }

    int left_count() const noexcept { return left_; }
    int right_count() const noexcept { return right_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
    const std::vector<int>& left_neighbours(int a) const { return ladj_[static_cast<std::size_t>(a)]; }
    const std::vector<int>& right_neighbours(int b) const { return radj_[static_cast<std::size_t>(b)]; }
    bool has_shadows() const noexcept { return !left_shadow_.empty() || left_ == 0; }
    const Shadow& left_shadow(int a) const { return left_shadow_.at(static_cast<std::size_t>(a)); }
    const Shadow& right_shadow(int b) const { return right_shadow_.at(static_cast<std::size_t>(b)); }
    const std::vector<Shadow>& left_shadows() const noexcept { return left_shadow_; }
    const std::vector<Shadow>& right_shadows() const noexcept { return right_shadow_; }

private:
    int left_ = 0, right_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<Shadow> left_shadow_, right_shadow_;
    std::vector<std::vector<int>> ladj_, radj_;
};

/// Sum over colour classes of C(|class|, 2). Requires a proper colouring.
inline std::uint64_t count_mono_2matchings(const EdgeColouring& c) {
    if (auto bad = is_proper(c))
        throw improper_colouring_error("colouring is not proper at vertex " + std::to_string(bad->vertex));
    std::uint64_t total = 0;
    for (const auto& [colour, edges] : c.classes()) {
        const std::uint64_t k = edges.size();
        total += k * (k - 1) / 2;
    }
    return total;
}

/// Positions 0..4m-1 of `ordering` split into X1, X2, Y1, Y2 of size
/// m = floor(n/4); trailing positions are dropped.
struct QuarterPartition {
    int part_size = 0;
    std::array<std::vector<int>, 4> parts;  // X1, X2, Y1, Y2 as host vertices

    static QuarterPartition from_ordering(const std::vector<int>& ordering) {
        QuarterPartition q;
        q.part_size = static_cast<int>(ordering.size()) / 4;
        for (int k = 0; k < 4; ++k)
            q.parts[static_cast<std::size_t>(k)].assign(ordering.begin() + k * q.part_size,
                                                        ordering.begin() + (k + 1) * q.part_size);
        return q;
    }
};

/// Left vertex i = (X1[i / m], X2[i % m]); right vertex j = (Y1[j / m], Y2[j % m]).
/// ((x1, x2), (y1, y2)) is an edge iff colour(x1, y1) == colour(x2, y2).
struct AuxGraph {
    QuarterPartition partition;
    BipartiteGraph graph;
};

inline AuxGraph build_aux_graph(const EdgeColouring& c, const std::vector<int>& ordering) {
    const int n = c.vertex_count();
    if (n < 8) throw size_error("auxiliary graph needs n >= 8");
    if (static_cast<int>(ordering.size()) != n) throw parameter_error("ordering must be a permutation of [n]");
    {
        std::vector<int> sorted(ordering);
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < n; ++i)
            if (sorted[static_cast<std::size_t>(i)] != i) throw parameter_error("ordering must be a permutation of [n]");
    }
    AuxGraph aux{QuarterPartition::from_ordering(ordering), {}};
    const int m = aux.partition.part_size;
    const auto& [X1, X2, Y1, Y2] = aux.partition.parts;

    // role[v] = (part, position) for the kept vertices.
    std::vector<std::pair<int, int>> role(static_cast<std::size_t>(n), {-1, -1});
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < m; ++i)
            role[static_cast<std::size_t>(aux.partition.parts[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)])] = {k, i};

    // Edges of each colour running between X2 and Y2, as (X2 position, Y2 position).
    std::unordered_map<colour_t, std::vector<std::pair<int, int>>> cross;
    for (int x : X2)
        for (int y : Y2) cross[c.colour(x, y)].emplace_back(role[static_cast<std::size_t>(x)].second, role[static_cast<std::size_t>(y)].second);

    std::vector<std::pair<int, int>> edges;
    for (int i1 = 0; i1 < m; ++i1)
        for (int j1 = 0; j1 < m; ++j1) {
            auto it = cross.find(c.colour(X1[static_cast<std::size_t>(i1)], Y1[static_cast<std::size_t>(j1)]));
            if (it == cross.end()) continue;
            for (auto [i2, j2] : it->second) edges.emplace_back(i1 * m + i2, j1 * m + j2);
        }

    std::vector<Shadow> ls, rs;
    for (int i1 = 0; i1 < m; ++i1)
        for (int i2 = 0; i2 < m; ++i2) {
            ls.push_back({X1[static_cast<std::size_t>(i1)], X2[static_cast<std::size_t>(i2)]});
            rs.push_back({Y1[static_cast<std::size_t>(i1)], Y2[static_cast<std::size_t>(i2)]});
        }
    aux.graph = BipartiteGraph(m * m, m * m, std::move(edges), std::move(ls), std::move(rs));
    return aux;
}

inline bool shadows_disjoint(const Shadow& a, const Shadow& b) {
    return a[0] != b[0] && a[0] != b[1] && a[1] != b[0] && a[1] != b[1];
}

/// Aux vertex reference: side 0 = left, 1 = right.
struct AuxVertex {
    int side = 0;
    int id = 0;
    friend auto operator<=>(const AuxVertex&, const AuxVertex&) = default;
};

struct ShadowViolation {
    AuxVertex centre, first, second;
};

struct ShadowReport {
    std::size_t checked = 0;
    std::vector<ShadowViolation> violations;
};

namespace detail {

inline const Shadow& shadow_of(const BipartiteGraph& g, AuxVertex v) {
    return v.side == 0 ? g.left_shadow(v.id) : g.right_shadow(v.id);
}

inline const std::vector<int>& nbrs_of(const BipartiteGraph& g, AuxVertex v) {
    return v.side == 0 ? g.left_neighbours(v.id) : g.right_neighbours(v.id);
}

inline bool triple_ok(const BipartiteGraph& g, AuxVertex e, AuxVertex f, AuxVertex f2) {
    const auto &se = shadow_of(g, e), &sf = shadow_of(g, f), &sf2 = shadow_of(g, f2);
    return shadows_disjoint(se, sf) && shadows_disjoint(se, sf2) && shadows_disjoint(sf, sf2);
}

} // namespace detail

/// Samples (e, f, f') with f != f' neighbours of e and checks that their
/// shadows are pairwise disjoint, which holds whenever the source colouring
/// is proper.
inline ShadowReport check_shadow_disjointness(const AuxGraph& f, std::size_t samples, seed_t seed) {
    const auto& g = f.graph;
    std::vector<AuxVertex> centres;
    for (int a = 0; a < g.left_count(); ++a)
        if (g.left_neighbours(a).size() >= 2) centres.push_back({0, a});
    for (int b = 0; b < g.right_count(); ++b)
        if (g.right_neighbours(b).size() >= 2) centres.push_back({1, b});
    ShadowReport rep;
    if (centres.empty()) return rep;
    rng gen(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        const AuxVertex e = centres[gen.below(centres.size())];
        const auto& nb = detail::nbrs_of(g, e);
        const std::size_t i = gen.below(nb.size());
        std::size_t j = gen.below(nb.size() - 1);
        if (j >= i) ++j;
        const AuxVertex a{1 - e.side, nb[i]}, b{1 - e.side, nb[j]};
        ++rep.checked;
        if (!detail::triple_ok(g, e, a, b)) rep.violations.push_back({e, a, b});
    }
    return rep;
}

/// Every (e, f, f') triple; for small n.
inline ShadowReport check_shadow_disjointness_exhaustive(const AuxGraph& f) {
    const auto& g = f.graph;
    ShadowReport rep;
    for (int side = 0; side < 2; ++side) {
        const int count = side == 0 ? g.left_count() : g.right_count();
        for (int id = 0; id < count; ++id) {
            const AuxVertex e{side, id};
            const auto& nb = detail::nbrs_of(g, e);
            for (std::size_t i = 0; i < nb.size(); ++i)
                for (std::size_t j = i + 1; j < nb.size(); ++j) {
                    const AuxVertex a{1 - side, nb[i]}, b{1 - side, nb[j]};
                    ++rep.checked;
                    if (!detail::triple_ok(g, e, a, b)) rep.violations.push_back({e, a, b});
                }
        }
    }
    return rep;
}

struct RegularizeOptions {
    double target_ratio = 4.0;  // stop once max degree <= target_ratio * min degree
    double max_side_ratio = 16.0;
    int min_side = 2;
    std::size_t min_edges = 1;
    int max_rounds = 64;
};

/// Almost-regular subgraph: sides A (kept left vertices) and B (kept right
/// vertices) with every degree in [delta, ratio * delta].
struct RegularizedGraph {
    std::vector<int> a_ids, b_ids;  // indices into the source graph's sides
    BipartiteGraph graph;           // on local indices, shadows carried over
    int delta = 0;
    int max_degree = 0;
    double ratio = 0.0;             // max_degree / delta
    int m = 0;                      // |A|
    double epsilon = 0.0;
    bool meets_exponent = false;    // delta >= m^epsilon
    int rounds = 0;
};

/// Constructive almost-regular extraction: peel vertices of degree below half
/// the average degree, then, while the degree band is wider than the target,
/// bucket each side dyadically by degree and keep the pair of buckets
/// spanning the most edges; repeat to a fixpoint.
inline RegularizedGraph regularize(const BipartiteGraph& g, double epsilon, RegularizeOptions opts = {}) {
    if (g.edge_count() < std::max<std::size_t>(opts.min_edges, 1))
        throw degenerate_input_error("graph has fewer edges than the configured minimum");
    std::vector<char> la(static_cast<std::size_t>(g.left_count()), 1), ra(static_cast<std::size_t>(g.right_count()), 1);
    std::vector<int> ld(la.size()), rd(ra.size());

    auto recount = [&] {
        std::fill(ld.begin(), ld.end(), 0);
        std::fill(rd.begin(), rd.end(), 0);
        std::size_t e = 0;
        for (auto [a, b] : g.edges())
            if (la[static_cast<std::size_t>(a)] && ra[static_cast<std::size_t>(b)]) {
                ++ld[static_cast<std::size_t>(a)];
                ++rd[static_cast<std::size_t>(b)];
                ++e;
            }
        return e;
    };
    auto alive = [&] {
        return std::count(la.begin(), la.end(), 1) + std::count(ra.begin(), ra.end(), 1);
    };

    int rounds = 0;
    for (; rounds < opts.max_rounds; ++rounds) {
        bool changed = false;
        // Peel below half the average degree: deg < e / v.
        std::size_t e = recount();
        const auto v = static_cast<std::size_t>(alive());
        if (e == 0 || v == 0) throw degenerate_output_error("regularization removed every edge");
        for (bool again = true; again;) {
            again = false;
            for (std::size_t a = 0; a < la.size(); ++a)
                if (la[a] && static_cast<std::size_t>(ld[a]) * v < e) la[a] = 0, again = changed = true;
            for (std::size_t b = 0; b < ra.size(); ++b)
                if (ra[b] && static_cast<std::size_t>(rd[b]) * v < e) ra[b] = 0, again = changed = true;
            if (again) recount();
        }
        if (recount() == 0) throw degenerate_output_error("regularization removed every edge");

        int mn = INT32_MAX, mx = 0;
        for (std::size_t a = 0; a < la.size(); ++a)
            if (la[a]) mn = std::min(mn, ld[a]), mx = std::max(mx, ld[a]);
        for (std::size_t b = 0; b < ra.size(); ++b)
            if (ra[b]) mn = std::min(mn, rd[b]), mx = std::max(mx, rd[b]);
        if (mx <= opts.target_ratio * mn) break;

        // Dyadic buckets relative to the current minimum degree.
        auto bucket = [&](int d) { return static_cast<int>(std::floor(std::log2(static_cast<double>(d) / mn))); };
        std::map<std::pair<int, int>, std::size_t> span;
        for (auto [a, b] : g.edges())
            if (la[static_cast<std::size_t>(a)] && ra[static_cast<std::size_t>(b)])
                ++span[{bucket(ld[static_cast<std::size_t>(a)]), bucket(rd[static_cast<std::size_t>(b)])}];
        auto best = std::max_element(span.begin(), span.end(),
                                     [](const auto& x, const auto& y) { return x.second < y.second; })->first;
        for (std::size_t a = 0; a < la.size(); ++a)
            if (la[a] && bucket(ld[a]) != best.first) la[a] = 0, changed = true;
        for (std::size_t b = 0; b < ra.size(); ++b)
            if (ra[b] && bucket(rd[b]) != best.second) ra[b] = 0, changed = true;
        if (!changed) break;
    }

    // Final cleanup of vertices left isolated by the last bucketing.
    recount();
    for (std::size_t a = 0; a < la.size(); ++a)
        if (la[a] && ld[a] == 0) la[a] = 0;
    for (std::size_t b = 0; b < ra.size(); ++b)
        if (ra[b] && rd[b] == 0) ra[b] = 0;

    RegularizedGraph out;
    out.rounds = rounds;
    out.epsilon = epsilon;
    std::vector<int> lpos(la.size(), -1), rpos(ra.size(), -1);
    for (std::size_t a = 0; a < la.size(); ++a)
        if (la[a]) lpos[a] = static_cast<int>(out.a_ids.size()), out.a_ids.push_back(static_cast<int>(a));
    for (std::size_t b = 0; b < ra.size(); ++b)
        if (ra[b]) rpos[b] = static_cast<int>(out.b_ids.size()), out.b_ids.push_back(static_cast<int>(b));
    const auto na = static_cast<int>(out.a_ids.size()), nb = static_cast<int>(out.b_ids.size());
    if (na < opts.min_side || nb < opts.min_side)
        throw degenerate_output_error("almost-regular subgraph has sides " + std::to_string(na) + " and " +
                                      std::to_string(nb) + ", below the floor of " + std::to_string(opts.min_side));
    if (nb > opts.max_side_ratio * na || na > opts.max_side_ratio * nb)
        throw degenerate_output_error("almost-regular subgraph is unbalanced: sides " + std::to_string(na) + " and " +
                                      std::to_string(nb));

    std::vector<std::pair<int, int>> edges;
    for (auto [a, b] : g.edges())
        if (la[static_cast<std::size_t>(a)] && ra[static_cast<std::size_t>(b)])
            edges.emplace_back(lpos[static_cast<std::size_t>(a)], rpos[static_cast<std::size_t>(b)]);
    std::vector<Shadow> ls, rs;
    if (g.has_shadows() && g.left_count() > 0) {
        for (int a : out.a_ids) ls.push_back(g.left_shadow(a));
        for (int b : out.b_ids) rs.push_back(g.right_shadow(b));
    }
    out.graph = BipartiteGraph(na, nb, std::move(edges), std::move(ls), std::move(rs));

    out.delta = INT32_MAX;
    for (int a = 0; a < na; ++a) {
        const int d = static_cast<int>(out.graph.left_neighbours(a).size());
        out.delta = std::min(out.delta, d);
        out.max_degree = std::max(out.max_degree, d);
    }
    for (int b = 0; b < nb; ++b) {
        const int d = static_cast<int>(out.graph.right_neighbours(b).size());
        out.delta = std::min(out.delta, d);
        out.max_degree = std::max(out.max_degree, d);
    }
    out.ratio = static_cast<double>(out.max_degree) / out.delta;
    out.m = na;
    out.meets_exponent = out.delta >= std::pow(static_cast<double>(na), epsilon);
    return out;
}

/// Red pair: common B-neighbourhood of size >= 2st; blue: size in [1, 2st-1].
struct CodegreeColouring {
    int s = 0, t = 0;
    int threshold = 0;  // 2st
    int a_count = 0;
    std::vector<int> codegree;  // a_count x a_count, symmetric, zero diagonal
    std::vector<std::pair<int, int>> red, blue;
    std::vector<std::vector<int>> red_adj, blue_adj;

    int codeg(int x, int y) const {
        return codegree[static_cast<std::size_t>(x) * static_cast<std::size_t>(a_count) + static_cast<std::size_t>(y)];
    }
    bool is_red(int x, int y) const { return x != y && codeg(x, y) >= threshold; }
};

/// Exact codegrees on A. Accepts 1 <= s <= t (s = t = 1 is a test-only degenerate case).
inline CodegreeColouring codegree_colouring(const RegularizedGraph& rg, int s, int t) {
    if (s < 1 || t < s) throw parameter_error("codegree colouring needs 1 <= s <= t");
    CodegreeColouring cc;
    cc.s = s;
    cc.t = t;
    cc.threshold = 2 * s * t;
    cc.a_count = rg.graph.left_count();
    const auto na = static_cast<std::size_t>(cc.a_count);
    cc.codegree.assign(na * na, 0);
    for (int b = 0; b < rg.graph.right_count(); ++b) {
        const auto& nb = rg.graph.right_neighbours(b);
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                ++cc.codegree[static_cast<std::size_t>(nb[i]) * na + static_cast<std::size_t>(nb[j])];
                ++cc.codegree[static_cast<std::size_t>(nb[j]) * na + static_cast<std::size_t>(nb[i])];
            }
    }
    cc.red_adj.assign(na, {});
    cc.blue_adj.assign(na, {});
    for (int x = 0; x < cc.a_count; ++x)
        for (int y = x + 1; y < cc.a_count; ++y) {
            const int d = cc.codeg(x, y);
            if (d >= cc.threshold) {
                cc.red.emplace_back(x, y);
                cc.red_adj[static_cast<std::size_t>(x)].push_back(y);
                cc.red_adj[static_cast<std::size_t>(y)].push_back(x);
            } else if (d >= 1) {
                cc.blue.emplace_back(x, y);
                cc.blue_adj[static_cast<std::size_t>(x)].push_back(y);
                cc.blue_adj[static_cast<std::size_t>(y)].push_back(x);
            }
        }
    return cc;
}

/// A-side copy of K_{s,t}: branch vertices `left` (s) and `right` (t), local A ids.
struct RedKst {
    std::vector<int> left, right;
};

/// Clean embedding of K_{s,t}^sub: branch vertices on A, the subdivision
/// vertex of pair (i, j) on B at middles[i * t + j].
struct CleanSubdivision {
    int s = 0, t = 0;
    std::vector<int> left, right;  // A ids
    std::vector<int> middles;      // B ids
    std::vector<int> exclusions;   // candidates skipped at each greedy step
};

/// True when the shadows of all given A and B vertices are pairwise disjoint.
inline bool is_clean(const BipartiteGraph& g, const std::vector<int>& a_ids, const std::vector<int>& b_ids) {
    std::set<int> seen;
    std::size_t expected = 0;
    for (int a : a_ids) {
        seen.insert(g.left_shadow(a).begin(), g.left_shadow(a).end());
        expected += 2;
    }
    for (int b : b_ids) {
        seen.insert(g.right_shadow(b).begin(), g.right_shadow(b).end());
        expected += 2;
    }
    return seen.size() == expected;
}

inline bool is_clean(const BipartiteGraph& g, const CleanSubdivision& sub) {
    std::vector<int> a(sub.left);
    a.insert(a.end(), sub.right.begin(), sub.right.end());
    return is_clean(g, a, sub.middles);
}

/// For each red pair in turn, pick a common neighbour in B whose shadow
/// avoids every earlier pick. At step k + 1 at most 2k candidates are
/// excluded, so a codegree of 2st always leaves a choice.
inline CleanSubdivision greedy_clean_embed(const RegularizedGraph& rg, const CodegreeColouring& cc, const RedKst& kst) {
    const auto& g = rg.graph;
    if (static_cast<int>(kst.left.size()) != cc.s || static_cast<int>(kst.right.size()) != cc.t)
        throw contract_error("red copy does not match (s, t)");
    std::vector<int> branch(kst.left);
    branch.insert(branch.end(), kst.right.begin(), kst.right.end());
    if (!is_clean(g, branch, {})) throw contract_error("red copy is not clean");
    for (int x : kst.left)
        for (int y : kst.right)
            if (cc.codeg(x, y) < cc.threshold)
                throw contract_error("pair with codegree " + std::to_string(cc.codeg(x, y)) + " < 2st");

    CleanSubdivision out{cc.s, cc.t, kst.left, kst.right, {}, {}};
    // Host vertices already taken. Branch shadows never meet a neighbour's
    // shadow in an auxiliary graph, so only earlier picks cause exclusions there.
    std::set<int> used;
    for (int a : branch) used.insert(g.left_shadow(a).begin(), g.left_shadow(a).end());
    for (int x : kst.left)
        for (int y : kst.right) {
            const auto& nx = g.left_neighbours(x);
            const auto& ny = g.left_neighbours(y);
            std::vector<int> common;
            std::set_intersection(nx.begin(), nx.end(), ny.begin(), ny.end(), std::back_inserter(common));
            int skipped = 0, pick = -1;
            for (int b : common) {
                const Shadow& sh = g.right_shadow(b);
                if (used.count(sh[0]) || used.count(sh[1])) {
                    ++skipped;
                    continue;
                }
                pick = b;
                break;
            }
            // Count every excluded candidate, not just the ones before the pick.
            if (pick >= 0)
                for (auto it = std::find(common.begin(), common.end(), pick) + 1; it != common.end(); ++it) {
                    const Shadow& sh = g.right_shadow(*it);
                    skipped += used.count(sh[0]) || used.count(sh[1]);
                }
            if (pick < 0) throw contract_error("no clean common neighbour left for a red pair");
            out.exclusions.push_back(skipped);
            out.middles.push_back(pick);
            used.insert(g.right_shadow(pick).begin(), g.right_shadow(pick).end());
        }
    return out;
}

/// Two copies of K_{s,t}^sub in K_n: copy i takes coordinate i of every shadow.
inline EmbeddedPair project_subdivision(const BipartiteGraph& g, const CleanSubdivision& sub) {
    EmbeddedPair p{subdivision_kst(sub.s, sub.t), {}, {}};
    const auto k = static_cast<std::size_t>(sub.s + sub.t + sub.s * sub.t);
    p.map1.assign(k, -1);
    p.map2.assign(k, -1);
    auto put = [&](std::size_t vertex, const Shadow& sh) {
        p.map1[vertex] = sh[0];
        p.map2[vertex] = sh[1];
    };
    for (int i = 0; i < sub.s; ++i) put(static_cast<std::size_t>(i), g.left_shadow(sub.left[static_cast<std::size_t>(i)]));
    for (int j = 0; j < sub.t; ++j)
        put(static_cast<std::size_t>(sub.s + j), g.left_shadow(sub.right[static_cast<std::size_t>(j)]));
    for (std::size_t m = 0; m < sub.middles.size(); ++m)
        put(static_cast<std::size_t>(sub.s + sub.t) + m, g.right_shadow(sub.middles[m]));
    return p;
}

struct RedSearchResult {
    std::optional<RedKst> kst;
    bool exhausted = false;  // node budget ran out
    std::uint64_t nodes = 0;
};

/// Backtracking for a clean red K_{s,t} on A: pick the s-side in increasing
/// order while the common red neighbourhood keeps >= t clean candidates,
/// then pick t pairwise-clean vertices from it.
inline RedSearchResult find_red_kst(const RegularizedGraph& rg, const CodegreeColouring& cc, std::uint64_t budget) {
    const auto& g = rg.graph;
    const int na = cc.a_count, s = cc.s, t = cc.t;
    RedSearchResult res;
    std::vector<int> left, right;
    std::set<int> used;

    auto clean_with = [&](int a) {
        const Shadow& sh = g.left_shadow(a);
        return !used.count(sh[0]) && !used.count(sh[1]);
    };
    auto take = [&](int a) { used.insert(g.left_shadow(a).begin(), g.left_shadow(a).end()); };
    auto drop = [&](int a) {
        used.erase(g.left_shadow(a)[0]);
        used.erase(g.left_shadow(a)[1]);
    };

    std::function<bool(const std::vector<int>&, std::size_t)> pick_right = [&](const std::vector<int>& cand,
                                                                                 std::size_t from) -> bool {
        if (static_cast<int>(right.size()) == t) return true;
        for (std::size_t i = from; i < cand.size(); ++i) {
            if (cand.size() - i < static_cast<std::size_t>(t) - right.size()) return false;
            if (!clean_with(cand[i])) continue;
            if (++res.nodes > budget) return res.exhausted = true, false;
            take(cand[i]);
            right.push_back(cand[i]);
            if (pick_right(cand, i + 1)) return true;
            right.pop_back();
            drop(cand[i]);
            if (res.exhausted) return false;
        }
        return false;
    };

    std::function<bool(int, const std::vector<int>&)> pick_left = [&](int from, const std::vector<int>& cand) -> bool {
        if (static_cast<int>(left.size()) == s) return pick_right(cand, 0);
        for (int a = from; a < na; ++a) {
            if (!clean_with(a)) continue;
            std::vector<int> next;
            const auto& ra = cc.red_adj[static_cast<std::size_t>(a)];
            if (left.empty()) {
                next = ra;
                std::sort(next.begin(), next.end());
            } else {
                std::vector<int> sorted(ra);
                std::sort(sorted.begin(), sorted.end());
                std::set_intersection(cand.begin(), cand.end(), sorted.begin(), sorted.end(), std::back_inserter(next));
            }
            take(a);
            std::erase_if(next, [&](int y) { return !clean_with(y); });
            drop(a);
            if (static_cast<int>(next.size()) < t) continue;
            if (++res.nodes > budget) return res.exhausted = true, false;
            take(a);
            left.push_back(a);
            if (pick_left(a + 1, next)) return true;
            left.pop_back();
            drop(a);
            if (res.exhausted) return false;
        }
        return false;
    };

    if (pick_left(0, {})) res.kst = RedKst{left, right};
    return res;
}

struct CleanSearchResult {
    std::optional<CleanSubdivision> sub;
    bool exhausted = false;
    std::uint64_t nodes = 0;
};

/// Direct backtracking for a clean K_{s,t}^sub in a shadowed bipartite graph
/// with branch vertices on the left side and subdivision vertices on the right.
inline CleanSearchResult find_clean_subdivision(const BipartiteGraph& g, int s, int t, std::uint64_t budget) {
    CleanSearchResult res;
    const Graph pattern = subdivision_kst(s, t);
    const int k = pattern.vertex_count();
    const int branch = s + t;  // pattern vertices < branch live on the left
    std::vector<int> image(static_cast<std::size_t>(k), -1);
    std::vector<int> used(static_cast<std::size_t>(std::max(1, [&] {
                              int mx = 0;
                              for (const auto& sh : g.left_shadows()) mx = std::max({mx, sh[0], sh[1]});
                              for (const auto& sh : g.right_shadows()) mx = std::max({mx, sh[0], sh[1]});
                              return mx + 1;
                          }())),
                          0);

    // Branch vertex L0 first, then alternate so every later vertex has a placed neighbour.
    std::vector<int> order;
    {
        std::vector<char> placed(static_cast<std::size_t>(k), 0);
        order.push_back(0);
        placed[0] = 1;
        while (static_cast<int>(order.size()) < k) {
            int best = -1, links = -1;
            for (int p = 0; p < k; ++p) {
                if (placed[static_cast<std::size_t>(p)]) continue;
                int l = 0;
                for (int w : pattern.neighbours(p)) l += placed[static_cast<std::size_t>(w)];
                if (l > links) best = p, links = l;
            }
            placed[static_cast<std::size_t>(best)] = 1;
            order.push_back(best);
        }
    }
    auto shadow = [&](int p, int v) -> const Shadow& { return p < branch ? g.left_shadow(v) : g.right_shadow(v); };
    auto adjacent = [&](int p, int v, int w, int wimg) {
        // p on one side with image v, w on the other with image wimg.
        const auto& nb = p < branch ? g.left_neighbours(v) : g.right_neighbours(v);
        (void)w;
        return std::binary_search(nb.begin(), nb.end(), wimg);
    };

    std::function<bool(std::size_t)> extend = [&](std::size_t depth) -> bool {
        if (depth == order.size()) return true;
        const int p = order[depth];
        std::vector<int> cands;
        int anchor = -1;
        for (int w : pattern.neighbours(p))
            if (image[static_cast<std::size_t>(w)] >= 0) {
                anchor = w;
                break;
            }
        if (anchor >= 0) {
            const int wimg = image[static_cast<std::size_t>(anchor)];
            cands = anchor < branch ? g.left_neighbours(wimg) : g.right_neighbours(wimg);
        } else {
            const int count = p < branch ? g.left_count() : g.right_count();
            for (int v = 0; v < count; ++v) cands.push_back(v);
        }
        for (int v : cands) {
            const Shadow& sh = shadow(p, v);
            if (used[static_cast<std::size_t>(sh[0])] || used[static_cast<std::size_t>(sh[1])]) continue;
            bool ok = true;
            for (int w : pattern.neighbours(p))
                if (image[static_cast<std::size_t>(w)] >= 0 && !adjacent(p, v, w, image[static_cast<std::size_t>(w)])) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            if (++res.nodes > budget) return res.exhausted = true, false;
            image[static_cast<std::size_t>(p)] = v;
            used[static_cast<std::size_t>(sh[0])] = used[static_cast<std::size_t>(sh[1])] = 1;
            if (extend(depth + 1)) return true;
            used[static_cast<std::size_t>(sh[0])] = used[static_cast<std::size_t>(sh[1])] = 0;
            image[static_cast<std::size_t>(p)] = -1;
            if (res.exhausted) return false;
        }
        return false;
    };

    if (g.edge_count() > 0 && extend(0)) {
        CleanSubdivision sub{s, t, {}, {}, {}, {}};
        for (int i = 0; i < s; ++i) sub.left.push_back(image[static_cast<std::size_t>(i)]);
        for (int j = 0; j < t; ++j) sub.right.push_back(image[static_cast<std::size_t>(s + j)]);
        for (int m = 0; m < s * t; ++m) sub.middles.push_back(image[static_cast<std::size_t>(branch + m)]);
        res.sub = sub;
    }
    return res;
}

enum class PipelineOutcome { found, not_found, inconclusive };

inline const char* to_string(PipelineOutcome o) {
    switch (o) {
    case PipelineOutcome::found: return "found";
    case PipelineOutcome::not_found: return "not_found";
    case PipelineOutcome::inconclusive: return "inconclusive";
    }
    return "?";
}

struct PipelineOptions {
    std::size_t orderings = 16;                   // seeded orderings sampled; the densest aux graph is kept
    std::vector<std::vector<int>> fixed_orderings; // when non-empty, used instead of sampling
    double epsilon = 0.5;
    RegularizeOptions regularize{};
    bool direct_fallback = true;                  // search the aux graph directly when no red K_{s,t} exists
    std::size_t blue_sample = 1000;               // s-sets sampled for the common blue neighbourhood
};

struct SizeStats {
    std::size_t count = 0;
    std::size_t min = 0, max = 0;
    double mean = 0.0;
};

struct PipelineResult {
    PipelineOutcome outcome = PipelineOutcome::not_found;
    std::string reason;
    std::string method;  // "red_embedding" or "aux_direct_search" when found
    seed_t ordering_seed = 0;
    std::size_t ordering_index = 0;
    std::size_t aux_edges = 0;
    std::optional<RegularizedGraph> regularized;
    std::size_t red_edges = 0, blue_edges = 0;
    SizeStats blue_neighbourhood;        // |N_b(A)| over A
    SizeStats common_blue_neighbourhood; // |N_b(E_1) n ... n N_b(E_s)| over sampled clean s-sets
    std::optional<EmbeddedPair> witness;
    bool witness_verified = false;
};

inline SizeStats size_stats(const std::vector<std::size_t>& v) {
    SizeStats s;
    s.count = v.size();
    if (v.empty()) return s;
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    double sum = 0;
    for (auto x : v) sum += static_cast<double>(x);
    s.mean = sum / static_cast<double>(v.size());
    return s;
}

/// Minimum n for which two disjoint copies of K_{s,t}^sub fit.
inline int pipeline_min_vertices(int s, int t) { return 2 * (s + t + s * t); }

inline PipelineResult find_clean_kst_sub(const EdgeColouring& c, int s, int t, seed_t seed, std::uint64_t budget,
                                         const PipelineOptions& opts = {}) {
    if (s < 2 || t < s) throw parameter_error("K_{s,t}^sub needs 2 <= s <= t");
    if (auto bad = is_proper(c))
        throw improper_colouring_error("colouring is not proper at vertex " + std::to_string(bad->vertex));
    PipelineResult res;
    const int n = c.vertex_count();
    if (n < std::max(8, pipeline_min_vertices(s, t))) {
        res.outcome = PipelineOutcome::inconclusive;
        res.reason = "n = " + std::to_string(n) + " is below the pipeline threshold " +
                     std::to_string(std::max(8, pipeline_min_vertices(s, t)));
        return res;
    }

    // Densest auxiliary graph over the candidate orderings.
    std::optional<AuxGraph> aux;
    const std::size_t tries = opts.fixed_orderings.empty() ? std::max<std::size_t>(opts.orderings, 1)
                                                           : opts.fixed_orderings.size();
    for (std::size_t k = 0; k < tries; ++k) {
        std::vector<int> ordering;
        seed_t sub_seed = 0;
        if (opts.fixed_orderings.empty()) {
            sub_seed = derive_seed(seed, k);
            rng gen(sub_seed);
            ordering = gen.permutation(n);
        } else {
            ordering = opts.fixed_orderings[k];
        }
        AuxGraph f = build_aux_graph(c, ordering);
        if (!aux || f.graph.edge_count() > aux->graph.edge_count()) {
            aux = std::move(f);
            res.ordering_seed = sub_seed;
            res.ordering_index = k;
        }
    }
    res.aux_edges = aux->graph.edge_count();
    if (res.aux_edges == 0) {
        res.outcome = PipelineOutcome::not_found;
        res.reason = "auxiliary graph has no edges";
        return res;
    }

    bool budget_hit = false;
    auto accept = [&](const BipartiteGraph& g, const CleanSubdivision& sub, const char* method) {
        res.witness = project_subdivision(g, sub);
        res.witness_verified = !check_colour_isomorphic_pair(c, res.witness->pattern, res.witness->map1,
                                                             res.witness->map2);
        res.method = method;
        res.outcome = res.witness_verified ? PipelineOutcome::found : PipelineOutcome::inconclusive;
        if (!res.witness_verified) res.reason = "projected witness failed verification";
    };

    try {
        RegularizedGraph rg = regularize(aux->graph, opts.epsilon, opts.regularize);
        const CodegreeColouring cc = codegree_colouring(rg, s, t);
        res.red_edges = cc.red.size();
        res.blue_edges = cc.blue.size();

        std::vector<std::size_t> nb;
        for (const auto& adj : cc.blue_adj) nb.push_back(adj.size());
        res.blue_neighbourhood = size_stats(nb);
        std::vector<std::size_t> common;
        if (cc.a_count >= s) {
            rng gen(derive_seed(seed, 0xb1e));
            for (std::size_t k = 0; k < opts.blue_sample; ++k) {
                std::vector<int> set;
                while (static_cast<int>(set.size()) < s) {
                    int a = static_cast<int>(gen.below(static_cast<std::uint64_t>(cc.a_count)));
                    if (std::find(set.begin(), set.end(), a) == set.end()) set.push_back(a);
                }
                if (!is_clean(rg.graph, set, {})) continue;
                std::vector<int> inter(cc.blue_adj[static_cast<std::size_t>(set[0])]);
                std::sort(inter.begin(), inter.end());
                for (int i = 1; i < s; ++i) {
                    std::vector<int> other(cc.blue_adj[static_cast<std::size_t>(set[static_cast<std::size_t>(i)])]);
                    std::sort(other.begin(), other.end());
                    std::vector<int> next;
                    std::set_intersection(inter.begin(), inter.end(), other.begin(), other.end(), std::back_inserter(next));
                    inter = std::move(next);
                }
                common.push_back(inter.size());
            }
        }
        res.common_blue_neighbourhood = size_stats(common);

        const RedSearchResult red = find_red_kst(rg, cc, budget);
        budget_hit |= red.exhausted;
        if (red.kst) {
            const CleanSubdivision sub = greedy_clean_embed(rg, cc, *red.kst);
            accept(rg.graph, sub, "red_embedding");
        }
        res.regularized = std::move(rg);
    } catch (const degenerate_output_error& e) {
        res.reason = std::string("regularization: ") + e.what();
    }

    if (!res.witness && opts.direct_fallback) {
        const CleanSearchResult direct = find_clean_subdivision(aux->graph, s, t, budget);
        budget_hit |= direct.exhausted;
        if (direct.sub) accept(aux->graph, *direct.sub, "aux_direct_search");
    }

    if (!res.witness) {
        res.outcome = budget_hit ? PipelineOutcome::inconclusive : PipelineOutcome::not_found;
        if (res.reason.empty())
            res.reason = budget_hit ? "node budget exhausted" : "no clean K_{s,t}^sub in the auxiliary graph";
    }
    return res;
}

inline nlohmann::json pipeline_to_json(const EdgeColouring& c, const PipelineResult& r) {
    auto stats = [](const SizeStats& s) {
        return nlohmann::json{{"count", s.count}, {"min", s.min}, {"max", s.max}, {"mean", s.mean}};
    };
    nlohmann::json j{{"ordering_seed", r.ordering_seed},
                     {"ordering_index", r.ordering_index},
                     {"aux_edges", r.aux_edges},
                     {"red_edges", r.red_edges},
                     {"blue_edges", r.blue_edges},
                     {"outcome", to_string(r.outcome)},
                     {"reason", r.reason},
                     {"blue_neighbourhood", stats(r.blue_neighbourhood)},
                     {"common_blue_neighbourhood", stats(r.common_blue_neighbourhood)}};
    if (r.regularized)
        j["regularized"] = {{"m", r.regularized->m},
                            {"b_size", r.regularized->b_ids.size()},
                            {"delta", r.regularized->delta},
                            {"Delta", r.regularized->ratio},
                            {"meets_exponent", r.regularized->meets_exponent}};
    else
        j["regularized"] = nullptr;
    if (r.witness) {
        j["witness"] = witness_to_json(c, *r.witness);
        j["witness_verified"] = r.witness_verified;
        j["method"] = r.method;
    }
    return j;
}

} // namespace ciso
