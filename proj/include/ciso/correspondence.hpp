#pragma once

// Glued pairs (H1, H2) built from p pairs of rooted tree copies, the edge
// correspondence they induce, and its constraint number.

#include <ciso/error.hpp>
#include <ciso/graph.hpp>
#include <ciso/rng.hpp>
#include <ciso/trees.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ciso {

/// Disjoint-set forest with path compression and union by size.
class UnionFind {
public:
    explicit UnionFind(std::size_t n = 0) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t add() {
        parent_.push_back(parent_.size());
        size_.push_back(1);
        return parent_.size() - 1;
    }

    std::size_t find(std::size_t x) {
        std::size_t root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) x = std::exchange(parent_[x], root);
        return root;
    }

    /// Returns true when the two elements were in different classes.
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        ++merges_;
        return true;
    }

    std::size_t size() const noexcept { return parent_.size(); }
    std::size_t classes() const noexcept { return parent_.size() - merges_; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
    std::size_t merges_ = 0;
};

/// Injective map from tree vertices to host vertices.
struct LabelledCopy {
    std::vector<int> embedding;
};

/// (H1, H2) with the generating pairs of the edge correspondence. Edges are
/// host-vertex pairs, so an edge lying in both H1 and H2 is a single node of
/// the relation.
class CorrespondenceSystem {
public:
    using Generator = std::pair<Edge, Edge>;

    CorrespondenceSystem(std::vector<Edge> h1, std::vector<Edge> h2, std::vector<int> x, std::vector<int> y,
                         std::vector<Generator> generators)
        : h1_(std::move(h1)), h2_(std::move(h2)), x_(std::move(x)), y_(std::move(y)), gens_(std::move(generators)) {
        normalize(h1_);
        normalize(h2_);
        if (x_.size() != y_.size()) throw parameter_error("root tuples differ in size");
        for (int a : x_)
            if (std::find(y_.begin(), y_.end(), a) != y_.end())
                throw parameter_error("root tuples X and Y are not disjoint");
        std::set<Edge> seen1, seen2;
        for (const auto& [e1, e2] : gens_) {
            if (!std::binary_search(h1_.begin(), h1_.end(), e1)) throw parameter_error("generator edge not in H1");
            if (!std::binary_search(h2_.begin(), h2_.end(), e2)) throw parameter_error("generator edge not in H2");
            seen1.insert(e1);
            seen2.insert(e2);
        }
        if (seen1.size() != h1_.size() || seen2.size() != h2_.size())
            throw parameter_error("an edge of H1 or H2 appears in no generator");
    }

    const std::vector<Edge>& h1_edges() const noexcept { return h1_; }
    const std::vector<Edge>& h2_edges() const noexcept { return h2_; }
    const std::vector<int>& x_roots() const noexcept { return x_; }
    const std::vector<int>& y_roots() const noexcept { return y_; }
    const std::vector<Generator>& generators() const noexcept { return gens_; }

    /// Distinct edges occurring in any generator (the nodes of the relation).
    std::vector<Edge> support() const {
        std::vector<Edge> s;
        for (const auto& [a, b] : gens_) {
            s.push_back(a);
            s.push_back(b);
        }
        normalize(s);
        return s;
    }

    /// v(H1 u H2), counting the roots.
    std::size_t union_vertex_count() const {
        std::set<int> v(x_.begin(), x_.end());
        v.insert(y_.begin(), y_.end());
        for (const auto* es : {&h1_, &h2_})
            for (const Edge& e : *es) {
                v.insert(e.u);
                v.insert(e.v);
            }
        return v.size();
    }

private:
    static void normalize(std::vector<Edge>& es) {
        std::sort(es.begin(), es.end());
        es.erase(std::unique(es.begin(), es.end()), es.end());
    }

    std::vector<Edge> h1_, h2_;
    std::vector<int> x_, y_;
    std::vector<Generator> gens_;
};

namespace detail {

inline void check_copy(const RootedTree& t, const LabelledCopy& c, const std::vector<int>& roots, const char* side) {
    if (c.embedding.size() != static_cast<std::size_t>(t.vertex_count()))
        throw parameter_error(std::string("copy rooted at ") + side + " does not embed every tree vertex");
    std::set<int> image(c.embedding.begin(), c.embedding.end());
    if (image.size() != c.embedding.size()) throw parameter_error(std::string("copy rooted at ") + side + " is not injective");
    for (std::size_t i = 0; i < roots.size(); ++i)
        if (c.embedding[static_cast<std::size_t>(t.roots()[i])] != roots[i])
            throw parameter_error(std::string("root mismatch: copy is not rooted at ") + side);
}

} // namespace detail

/// Unions of the first and second copies of each pair; one generator per
/// (pair, tree edge), in pair order then tree-edge order.
inline CorrespondenceSystem glue(const RootedTree& t, const std::vector<std::pair<LabelledCopy, LabelledCopy>>& pairs,
                                 const std::vector<int>& x, const std::vector<int>& y) {
    if (pairs.empty()) throw parameter_error("glue needs at least one pair");
    if (x.size() != static_cast<std::size_t>(t.root_count()) || y.size() != x.size())
        throw parameter_error("root tuples must have one entry per tree root");
    std::vector<Edge> h1, h2;
    std::vector<CorrespondenceSystem::Generator> gens;
    for (const auto& [c1, c2] : pairs) {
        detail::check_copy(t, c1, x, "X");
        detail::check_copy(t, c2, y, "Y");
        for (int v : c1.embedding)
            if (std::find(c2.embedding.begin(), c2.embedding.end(), v) != c2.embedding.end())
                throw parameter_error("copies of a pair are not vertex-disjoint");
        for (const Edge& e : t.graph().edges()) {
            Edge e1(c1.embedding[static_cast<std::size_t>(e.u)], c1.embedding[static_cast<std::size_t>(e.v)]);
            Edge e2(c2.embedding[static_cast<std::size_t>(e.u)], c2.embedding[static_cast<std::size_t>(e.v)]);
            h1.push_back(e1);
            h2.push_back(e2);
            gens.emplace_back(e1, e2);
        }
    }
    return CorrespondenceSystem(std::move(h1), std::move(h2), x, y, std::move(gens));
}

/// Minimum number of generator pairs expressing the whole relation: the size
/// of a spanning forest of the generator graph, i.e. support - classes.
inline std::size_t constraint_number(const CorrespondenceSystem& sys) {
    std::map<Edge, std::size_t> id;
    UnionFind uf;
    auto node = [&](const Edge& e) {
        auto [it, fresh] = id.try_emplace(e, 0);
        if (fresh) it->second = uf.add();
        return it->second;
    };
    for (const auto& [a, b] : sys.generators()) uf.unite(node(a), node(b));
    return uf.size() - uf.classes();
}

struct BalanceTrialReport {
    std::size_t trials = 0;
    std::size_t violations = 0;
    std::optional<rational> tightest_ratio;  // min of 2k / (rho (v - 2r)) over trials with v > 2r
    std::size_t extension_steps = 0;
    std::size_t extension_violations = 0;
    std::size_t rejected_draws = 0;
};

struct BalanceTrialOptions {
    std::size_t max_rejections_per_pair = 1'000'000;
};

/// Samples `trials` glued systems of p pairs each, embedded into host
/// vertices [0, host_size) with X = (0..r-1), Y = (r..2r-1), and checks
/// 2k >= rho_T (v(H1 u H2) - 2r) exactly. Along the way each prefix
/// extension is checked against k(H) >= k(H') + max{e(S1), e(S2)}.
inline BalanceTrialReport check_balance_inequality(const RootedTree& t, int p, std::size_t trials, int host_size,
                                                   seed_t seed, BalanceTrialOptions opts = {}) {
    if (p < 1) throw parameter_error("p must be positive");
    const BalanceResult bal = is_balanced(t);
    if (!bal.balanced) throw parameter_error("tree is not balanced");
    const int r = t.root_count(), a = t.unrooted_count();
    if (host_size < 2 * r + 2 * a) throw parameter_error("host too small for a vertex-disjoint pair");
    const rational rho = density(t);

    std::vector<int> x(static_cast<std::size_t>(r)), y(static_cast<std::size_t>(r));
    std::iota(x.begin(), x.end(), 0);
    std::iota(y.begin(), y.end(), r);
    std::vector<int> free_vertices;
    for (int v = 2 * r; v < host_size; ++v) free_vertices.push_back(v);

    rng gen(seed);
    // Two independent uniform injections of the unrooted vertices into the
    // free host vertices; the draw is rejected when the copies intersect.
    auto draw_pair = [&](BalanceTrialReport& rep) {
        for (std::size_t attempt = 0; attempt < opts.max_rejections_per_pair; ++attempt) {
            LabelledCopy c1{std::vector<int>(static_cast<std::size_t>(t.vertex_count()))};
            LabelledCopy c2{c1.embedding};
            for (int i = 0; i < r; ++i) {
                c1.embedding[static_cast<std::size_t>(t.roots()[static_cast<std::size_t>(i)])] = x[static_cast<std::size_t>(i)];
                c2.embedding[static_cast<std::size_t>(t.roots()[static_cast<std::size_t>(i)])] = y[static_cast<std::size_t>(i)];
            }
            auto p1 = free_vertices, p2 = free_vertices;
            gen.shuffle(p1);
            gen.shuffle(p2);
            std::set<int> used1;
            for (int i = 0; i < a; ++i) {
                c1.embedding[static_cast<std::size_t>(t.unrooted()[static_cast<std::size_t>(i)])] = p1[static_cast<std::size_t>(i)];
                c2.embedding[static_cast<std::size_t>(t.unrooted()[static_cast<std::size_t>(i)])] = p2[static_cast<std::size_t>(i)];
                used1.insert(p1[static_cast<std::size_t>(i)]);
            }
            bool clash = false;
            for (int i = 0; i < a && !clash; ++i) clash = used1.count(p2[static_cast<std::size_t>(i)]) > 0;
            if (!clash) return std::make_pair(std::move(c1), std::move(c2));
            ++rep.rejected_draws;
        }
        throw budget_error("could not draw a vertex-disjoint pair within the rejection budget");
    };

    BalanceTrialReport rep;
    rep.trials = trials;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::vector<std::pair<LabelledCopy, LabelledCopy>> pairs;
        std::size_t prev_k = 0;
        std::set<int> prev_vertices;
        for (int j = 0; j < p; ++j) {
            pairs.push_back(draw_pair(rep));
            const auto sys = glue(t, pairs, x, y);
            const std::size_t k = constraint_number(sys);

            // S_i = V(T_i) \ V(H1' u H2'); e(S_i) = edges of T_i meeting S_i.
            const auto& [c1, c2] = pairs.back();
            auto new_edges = [&](const LabelledCopy& c) {
                std::vector<int> s;
                for (int v = 0; v < t.vertex_count(); ++v)
                    if (!prev_vertices.count(c.embedding[static_cast<std::size_t>(v)])) s.push_back(v);
                return static_cast<std::size_t>(edges_meeting(t, s));
            };
            ++rep.extension_steps;
            if (k < prev_k + std::max(new_edges(c1), new_edges(c2))) ++rep.extension_violations;
            prev_k = k;
            for (const auto* c : {&c1, &c2}) prev_vertices.insert(c->embedding.begin(), c->embedding.end());
        }

        const auto sys = glue(t, pairs, x, y);
        const auto k = static_cast<std::int64_t>(constraint_number(sys));
        const auto excess = static_cast<std::int64_t>(sys.union_vertex_count()) - 2 * r;
        const rational rhs = rho * excess;
        if (rational(2 * k) < rhs) ++rep.violations;
        if (excess > 0) {
            const rational ratio = rational(2 * k) / rhs;
            if (!rep.tightest_ratio || ratio < *rep.tightest_ratio) rep.tightest_ratio = ratio;
        }
    }
    return rep;
}

// System JSON: {h1_edges, h2_edges, roots: {X, Y}, generators: [[[u,v],[u,v]], ...]}
// over integer host vertices.

inline void to_json(nlohmann::json& j, const CorrespondenceSystem& s) {
    auto edges = [](const std::vector<Edge>& es) {
        auto a = nlohmann::json::array();
        for (const Edge& e : es) a.push_back({e.u, e.v});
        return a;
    };
    auto gens = nlohmann::json::array();
    for (const auto& [e1, e2] : s.generators()) gens.push_back({{e1.u, e1.v}, {e2.u, e2.v}});
    j = nlohmann::json{{"h1_edges", edges(s.h1_edges())},
                       {"h2_edges", edges(s.h2_edges())},
                       {"roots", {{"X", s.x_roots()}, {"Y", s.y_roots()}}},
                       {"generators", gens}};
}

inline CorrespondenceSystem system_from_json(const nlohmann::json& j) {
    try {
        auto edge = [](const nlohmann::json& e) {
            if (!e.is_array() || e.size() != 2) throw parse_error("edge must be a pair of vertices");
            return Edge(e[0].get<int>(), e[1].get<int>());
        };
        std::vector<Edge> h1, h2;
        for (const auto& e : j.at("h1_edges")) h1.push_back(edge(e));
        for (const auto& e : j.at("h2_edges")) h2.push_back(edge(e));
        std::vector<CorrespondenceSystem::Generator> gens;
        for (const auto& g : j.at("generators")) {
            if (!g.is_array() || g.size() != 2) throw parse_error("generator must be a pair of edges");
            gens.emplace_back(edge(g[0]), edge(g[1]));
        }
        return CorrespondenceSystem(std::move(h1), std::move(h2), j.at("roots").at("X").get<std::vector<int>>(),
                                    j.at("roots").at("Y").get<std::vector<int>>(), std::move(gens));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed system JSON: ") + e.what());
    } catch (const parameter_error& e) {
        throw parse_error(std::string("invalid system: ") + e.what());
    }
}

} // namespace ciso
