#pragma once

// Search for two vertex-disjoint colour-isomorphic copies of a pattern,
// enumeration of rooted collections C(X, Y), and the exact f_2 oracle for
// tiny complete graphs.

#include <ciso/colouring.hpp>
#include <ciso/error.hpp>
#include <ciso/graph.hpp>
#include <ciso/trees.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ciso {

struct EmbeddedPair {
    Graph pattern;
    std::vector<int> map1;
    std::vector<int> map2;

    /// Colour of each pattern edge (in pattern edge order) under map1.
    std::vector<colour_t> colour_trace(const EdgeColouring& c) const {
        std::vector<colour_t> out;
        for (const Edge& e : pattern.edges())
            out.push_back(c.colour(map1[static_cast<std::size_t>(e.u)], map1[static_cast<std::size_t>(e.v)]));
        return out;
    }
};

enum class SearchOutcome { found, none, budget_exhausted };

inline const char* to_string(SearchOutcome o) {
    switch (o) {
    case SearchOutcome::found: return "found";
    case SearchOutcome::none: return "none";
    case SearchOutcome::budget_exhausted: return "budget_exhausted";
    }
    return "?";
}

struct SearchResult {
    SearchOutcome outcome = SearchOutcome::none;
    std::optional<EmbeddedPair> pair;
    std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t unlimited_budget = std::numeric_limits<std::uint64_t>::max();

/// For each vertex, its neighbours grouped by edge colour.
class ColourIndex {
public:
    explicit ColourIndex(const EdgeColouring& c) : n_(c.vertex_count()), rows_(static_cast<std::size_t>(n_)) {
        for (int v = 0; v < n_; ++v) {
            auto& row = rows_[static_cast<std::size_t>(v)];
            for (int w = 0; w < n_; ++w)
                if (w != v) row.emplace_back(c.colour(v, w), w);
            std::sort(row.begin(), row.end());
        }
    }

    /// Neighbours w of v with colour(v, w) == col, as a contiguous range.
    std::pair<const std::pair<colour_t, int>*, const std::pair<colour_t, int>*> with_colour(int v, colour_t col) const {
        const auto& row = rows_[static_cast<std::size_t>(v)];
        auto lo = std::lower_bound(row.begin(), row.end(), std::make_pair(col, std::numeric_limits<int>::min()));
        auto hi = std::upper_bound(lo, row.end(), std::make_pair(col, std::numeric_limits<int>::max()));
        return {row.data() + (lo - row.begin()), row.data() + (hi - row.begin())};
    }

private:
    int n_;
    std::vector<std::vector<std::pair<colour_t, int>>> rows_;
};

/// Backtracking over simultaneous embeddings of a pattern: both maps are
/// extended in lockstep, one pattern vertex at a time, and a branch dies as
/// soon as a pattern edge receives different colours under the two maps.
class LockstepSearch {
public:
    LockstepSearch(const EdgeColouring& c, const Graph& pattern)
        : c_(c), index_(c), pattern_(pattern), map1_(static_cast<std::size_t>(pattern.vertex_count()), -1),
          map2_(map1_), owner_(static_cast<std::size_t>(c.vertex_count()), 0) {}

    /// Fix pattern vertex p to (x, y) before searching.
    void preassign(int p, int x, int y) {
        map1_[static_cast<std::size_t>(p)] = x;
        map2_[static_cast<std::size_t>(p)] = y;
        owner_[static_cast<std::size_t>(x)] = 1;
        owner_[static_cast<std::size_t>(y)] = 2;
    }

    /// Clears all placements; the plan is kept.
    void reset() {
        for (std::size_t p = 0; p < map1_.size(); ++p) {
            if (map1_[p] >= 0) owner_[static_cast<std::size_t>(map1_[p])] = 0;
            if (map2_[p] >= 0) owner_[static_cast<std::size_t>(map2_[p])] = 0;
            map1_[p] = map2_[p] = -1;
        }
    }

    /// Free vertices are ordered greedily: most already-placed neighbours
    /// first, then highest degree.
    void plan() {
        const int k = pattern_.vertex_count();
        std::vector<char> placed(static_cast<std::size_t>(k), 0);
        for (int p = 0; p < k; ++p) placed[static_cast<std::size_t>(p)] = map1_[static_cast<std::size_t>(p)] >= 0;
        order_.clear();
        anchors_.assign(static_cast<std::size_t>(k), {});
        for (;;) {
            int best = -1, best_links = -1, best_deg = -1;
            for (int p = 0; p < k; ++p) {
                if (placed[static_cast<std::size_t>(p)]) continue;
                int links = 0;
                for (int w : pattern_.neighbours(p)) links += placed[static_cast<std::size_t>(w)];
                if (links > best_links || (links == best_links && pattern_.degree(p) > best_deg)) {
                    best = p;
                    best_links = links;
                    best_deg = pattern_.degree(p);
                }
            }
            if (best < 0) break;
            for (int w : pattern_.neighbours(best))
                if (placed[static_cast<std::size_t>(w)]) anchors_[static_cast<std::size_t>(best)].push_back(w);
            placed[static_cast<std::size_t>(best)] = 1;
            order_.push_back(best);
        }
    }

    /// Calls visit(map1, map2) for every completion until it returns false.
    /// When `break_swap` is set, the first free vertex satisfies x < y, which
    /// removes the (map2, map1) mirror of each solution.
    /// Returns false if the node budget ran out.
    bool run(const std::function<bool(const std::vector<int>&, const std::vector<int>&)>& visit, std::uint64_t budget,
             bool break_swap = false) {
        visit_ = &visit;
        budget_ = budget;
        nodes_ = 0;
        stopped_ = false;
        exhausted_ = false;
        break_swap_ = break_swap;
        extend(0);
        return !exhausted_;
    }

    std::uint64_t nodes() const noexcept { return nodes_; }

private:
    bool try_place(std::size_t depth, int p, int x, int y) {
        if (x == y || owner_[static_cast<std::size_t>(x)] || owner_[static_cast<std::size_t>(y)]) return true;
        for (int w : anchors_[static_cast<std::size_t>(p)])
            if (c_.colour(x, map1_[static_cast<std::size_t>(w)]) != c_.colour(y, map2_[static_cast<std::size_t>(w)]))
                return true;
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return false;
        }
        map1_[static_cast<std::size_t>(p)] = x;
        map2_[static_cast<std::size_t>(p)] = y;
        owner_[static_cast<std::size_t>(x)] = 1;
        owner_[static_cast<std::size_t>(y)] = 2;
        extend(depth + 1);
        owner_[static_cast<std::size_t>(x)] = 0;
        owner_[static_cast<std::size_t>(y)] = 0;
        map1_[static_cast<std::size_t>(p)] = -1;
        map2_[static_cast<std::size_t>(p)] = -1;
        return !(stopped_ || exhausted_);
    }

    void extend(std::size_t depth) {
        if (stopped_ || exhausted_) return;
        if (depth == order_.size()) {
            if (!(*visit_)(map1_, map2_)) stopped_ = true;
            return;
        }
        const int p = order_[depth];
        const int n = c_.vertex_count();
        const auto& anchors = anchors_[static_cast<std::size_t>(p)];
        if (!anchors.empty()) {
            const int w = anchors.front();
            const int ax = map1_[static_cast<std::size_t>(w)], ay = map2_[static_cast<std::size_t>(w)];
            for (int x = 0; x < n; ++x) {
                if (x == ax || owner_[static_cast<std::size_t>(x)]) continue;
                auto [lo, hi] = index_.with_colour(ay, c_.colour(ax, x));
                for (auto it = lo; it != hi; ++it)
                    if (!try_place(depth, p, x, it->second)) return;
            }
            return;
        }
        const bool ordered = break_swap_ && depth == 0;
        for (int x = 0; x < n; ++x)
            for (int y = ordered ? x + 1 : 0; y < n; ++y)
                if (!try_place(depth, p, x, y)) return;
    }

    const EdgeColouring& c_;
    ColourIndex index_;
    Graph pattern_;
    std::vector<int> map1_, map2_;
    std::vector<char> owner_;
    std::vector<int> order_;
    std::vector<std::vector<int>> anchors_;

    const std::function<bool(const std::vector<int>&, const std::vector<int>&)>* visit_ = nullptr;
    std::uint64_t budget_ = 0, nodes_ = 0;
    bool stopped_ = false, exhausted_ = false, break_swap_ = false;
};

/// Two vertex-disjoint copies of h whose corresponding edges share colours.
/// `none` is only reported after the whole search space was explored.
inline SearchResult find_pair(const EdgeColouring& c, const Graph& h, std::uint64_t budget = unlimited_budget) {
    if (h.vertex_count() < 1) throw parameter_error("pattern has no vertices");
    SearchResult res;
    if (2 * h.vertex_count() > c.vertex_count()) return res;
    LockstepSearch search(c, h);
    search.plan();
    const bool complete = search.run(
        [&](const std::vector<int>& m1, const std::vector<int>& m2) {
            res.pair = EmbeddedPair{h, m1, m2};
            return false;
        },
        budget, true);
    res.nodes = search.nodes();
    res.outcome = res.pair ? SearchOutcome::found : complete ? SearchOutcome::none : SearchOutcome::budget_exhausted;
    return res;
}

struct RootedCollection {
    std::vector<int> x_roots, y_roots;
    std::vector<EmbeddedPair> members;
    std::size_t count = 0;   // members found (equals members.size() unless members are not kept)
    bool truncated = false;  // stopped at the cap
};

namespace detail {

inline void check_root_tuples(const EdgeColouring& c, const RootedTree& t, const std::vector<int>& x,
                              const std::vector<int>& y) {
    if (x.size() != static_cast<std::size_t>(t.root_count()) || y.size() != x.size())
        throw parameter_error("root tuples must have one entry per tree root");
    std::vector<int> all(x);
    all.insert(all.end(), y.begin(), y.end());
    for (int v : all)
        if (v < 0 || v >= c.vertex_count()) throw parameter_error("root outside K_n");
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
        throw parameter_error("root tuples must be pointwise disjoint with distinct entries");
}

} // namespace detail

/// All pairs (T1, T2) of vertex-disjoint colour-isomorphic labelled copies of
/// t with T1 rooted at X and T2 rooted at Y, up to `cap` members.
inline RootedCollection rooted_collection(const EdgeColouring& c, const RootedTree& t, const std::vector<int>& x,
                                          const std::vector<int>& y, std::size_t cap = 1'000'000,
                                          bool keep_members = true) {
    detail::check_root_tuples(c, t, x, y);
    RootedCollection out{x, y, {}, 0, false};
    LockstepSearch search(c, t.graph());
    for (std::size_t i = 0; i < x.size(); ++i) search.preassign(t.roots()[i], x[i], y[i]);
    search.plan();
    search.run(
        [&](const std::vector<int>& m1, const std::vector<int>& m2) {
            if (out.count == cap) {
                out.truncated = true;
                return false;
            }
            ++out.count;
            if (keep_members) out.members.push_back(EmbeddedPair{t.graph(), m1, m2});
            return true;
        },
        unlimited_budget);
    return out;
}

struct CollectionMaximum {
    std::size_t max_size = 0;
    std::vector<int> x_roots, y_roots;  // a maximizing root pair (empty when no root pair exists)
    std::uint64_t root_pairs = 0;       // root pairs enumerated (mirror images skipped)
};

inline constexpr double default_root_pair_limit = 2e8;

/// max |C(X, Y)| over all disjoint ordered root tuples. Uses
/// |C(X, Y)| = |C(Y, X)| to enumerate only pairs with X_0 < Y_0.
inline CollectionMaximum max_rooted_collection(const EdgeColouring& c, const RootedTree& t,
                                               double root_pair_limit = default_root_pair_limit) {
    const int n = c.vertex_count(), r = t.root_count();
    double pairs = 1;
    for (int i = 0; i < 2 * r; ++i) pairs *= std::max(0, n - i);
    if (pairs / 2 > root_pair_limit)
        throw size_error("exhaustive root enumeration over ~" + std::to_string(static_cast<long long>(pairs / 2)) +
                         " root pairs is infeasible");

    CollectionMaximum best;
    LockstepSearch search(c, t.graph());
    std::vector<int> tuple(static_cast<std::size_t>(2 * r));  // X then Y
    std::vector<char> used(static_cast<std::size_t>(n), 0);

    std::function<void(int)> choose = [&](int i) {
        if (i == 2 * r) {
            ++best.root_pairs;
            search.reset();
            for (int k = 0; k < r; ++k)
                search.preassign(t.roots()[static_cast<std::size_t>(k)], tuple[static_cast<std::size_t>(k)],
                                 tuple[static_cast<std::size_t>(r + k)]);
            if (best.root_pairs == 1 || r == 0) search.plan();
            std::size_t count = 0;
            search.run([&](const std::vector<int>&, const std::vector<int>&) { return ++count, true; },
                       unlimited_budget);
            if (best.root_pairs == 1 || count > best.max_size) {
                best.max_size = count;
                best.x_roots.assign(tuple.begin(), tuple.begin() + r);
                best.y_roots.assign(tuple.begin() + r, tuple.end());
            }
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[static_cast<std::size_t>(v)]) continue;
            if (r > 0 && i == r && v < tuple[0]) continue;  // mirror symmetry: X_0 < Y_0
            used[static_cast<std::size_t>(v)] = 1;
            tuple[static_cast<std::size_t>(i)] = v;
            choose(i + 1);
            used[static_cast<std::size_t>(v)] = 0;
        }
    };
    if (r == 0) {
        // Unrooted trees: a single "root pair", the empty one.
        ++best.root_pairs;
        search.plan();
        std::size_t count = 0;
        search.run([&](const std::vector<int>&, const std::vector<int>&) { return ++count, true; }, unlimited_budget);
        best.max_size = count;
        return best;
    }
    choose(0);
    return best;
}

struct PowerFreeCertificate {
    bool holds = false;          // max |C(X, Y)| < k0
    std::size_t k0 = 0;
    CollectionMaximum rooted;    // the exhaustive rooted enumeration
    SearchResult direct;         // find_pair on power(t, k0), unaligned copies, under budget
};

/// Rooted part: max |C(X, Y)| < k0 rules out colour-isomorphic disjoint
/// copies of t^{k0} whose isomorphism matches the roots. The direct search
/// over power(t, k0) covers copies that are not root-aligned, under budget.
inline PowerFreeCertificate certify_power_free(const EdgeColouring& c, const RootedTree& t, std::size_t k0,
                                               std::uint64_t budget, double root_pair_limit = default_root_pair_limit) {
    if (k0 < 1) throw parameter_error("k0 must be at least 1");
    PowerFreeCertificate cert;
    cert.k0 = k0;
    cert.rooted = max_rooted_collection(c, t, root_pair_limit);
    cert.holds = cert.rooted.max_size < k0;
    if (budget > 0) cert.direct = find_pair(c, power(t, static_cast<int>(k0)), budget);
    return cert;
}

struct F2Result {
    std::size_t value = 0;
    EdgeColouring colouring;  // an optimal pair-free proper colouring
};

/// Chromatic index of K_n.
inline std::size_t complete_chromatic_index(int n) {
    if (n < 2) return 0;
    return static_cast<std::size_t>(n % 2 == 0 ? n - 1 : n);
}

/// Exact f_2(n, h): fewest colours in a proper colouring of K_n without two
/// vertex-disjoint colour-isomorphic copies of h. Colourings are enumerated
/// as partitions of E(K_n) into matchings, canonical under relabelling of
/// colours, with branch-and-bound on the class count.
inline F2Result f2_exact(int n, const Graph& h) {
    if (n < 2 || n > 6) throw size_error("f2_exact supports 2 <= n <= 6 only");
    if (h.edge_count() == 0) throw parameter_error("pattern needs at least one edge");
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    const std::size_t m = edges.size();
    const std::size_t floor = complete_chromatic_index(n);

    // Uncoloured edges carry a unique placeholder colour that never repeats,
    // so any pair found uses coloured edges only and survives every completion.
    const colour_t placeholder = 1000;
    std::vector<colour_t> colours(m);
    for (std::size_t i = 0; i < m; ++i) colours[i] = placeholder + i;
    std::vector<std::uint32_t> class_mask;

    F2Result best{m, EdgeColouring(n, [&] {
                      std::vector<colour_t> c(m);
                      for (std::size_t i = 0; i < m; ++i) c[i] = i;
                      return c;
                  }())};

    std::function<void(std::size_t)> dfs = [&](std::size_t i) {
        if (best.value == floor) return;
        const std::size_t k = class_mask.size();
        if (k >= best.value) return;
        if (i == m) {
            best.value = k;
            best.colouring = EdgeColouring(n, colours);
            return;
        }
        const std::uint32_t ends = (1u << edges[i].u) | (1u << edges[i].v);
        const auto idx = EdgeColouring::edge_index(n, edges[i].u, edges[i].v);
        for (std::size_t j = 0; j < k; ++j) {
            if (class_mask[j] & ends) continue;
            colours[idx] = j;
            class_mask[j] |= ends;
            if (find_pair(EdgeColouring(n, colours), h).outcome == SearchOutcome::none) dfs(i + 1);
            class_mask[j] &= ~ends;
        }
        if (k + 1 < best.value) {
            colours[idx] = k;
            class_mask.push_back(ends);
            dfs(i + 1);
            class_mask.pop_back();
        }
        colours[idx] = placeholder + idx;
    };
    dfs(0);
    return best;
}

// Witness JSON: {pattern, map1, map2, colour_trace}.

inline nlohmann::json witness_to_json(const EdgeColouring& c, const EmbeddedPair& p) {
    nlohmann::json pattern;
    to_json(pattern, p.pattern);
    return nlohmann::json{{"pattern", pattern}, {"map1", p.map1}, {"map2", p.map2}, {"colour_trace", p.colour_trace(c)}};
}

inline EmbeddedPair witness_from_json(const nlohmann::json& j) {
    try {
        return EmbeddedPair{graph_from_json(j.at("pattern")), j.at("map1").get<std::vector<int>>(),
                            j.at("map2").get<std::vector<int>>()};
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed witness JSON: ") + e.what());
    }
}

} // namespace ciso
