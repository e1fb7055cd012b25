#pragma once

#include <ciso/error.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ciso {

/// Unordered vertex pair, stored with first < second.
struct Edge {
    int u = 0;
    int v = 0;

    Edge() = default;
    Edge(int a, int b) : u(std::min(a, b)), v(std::max(a, b)) {}

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph on vertices 0..n-1 with optional string labels.
class Graph {
public:
    Graph() = default;

    Graph(int vertex_count, std::vector<Edge> edges, std::vector<std::string> labels = {})
        : n_(vertex_count), edges_(std::move(edges)), labels_(std::move(labels)), adj_(static_cast<std::size_t>(n_)) {
        if (n_ < 0) throw parameter_error("negative vertex count");
        if (labels_.empty())
            for (int i = 0; i < n_; ++i) labels_.push_back(std::to_string(i));
        if (labels_.size() != static_cast<std::size_t>(n_)) throw parameter_error("label count differs from vertex count");
        std::sort(edges_.begin(), edges_.end());
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const Edge& e = edges_[i];
            if (e.u == e.v) throw parameter_error("loop at vertex " + std::to_string(e.u));
            if (e.u < 0 || e.v >= n_) throw parameter_error("edge endpoint out of range");
            if (i > 0 && edges_[i - 1] == e)
                throw parameter_error("parallel edge " + std::to_string(e.u) + "-" + std::to_string(e.v));
            adj_[static_cast<std::size_t>(e.u)].push_back(e.v);
            adj_[static_cast<std::size_t>(e.v)].push_back(e.u);
        }
    }

    int vertex_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<int>& neighbours(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }
    const std::string& label(int v) const { return labels_[static_cast<std::size_t>(v)]; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    bool has_edge(int a, int b) const { return std::binary_search(edges_.begin(), edges_.end(), Edge(a, b)); }

    bool is_connected() const {
        if (n_ == 0) return true;
        std::vector<char> seen(static_cast<std::size_t>(n_), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int y : neighbours(x))
                if (!seen[static_cast<std::size_t>(y)]) {
                    seen[static_cast<std::size_t>(y)] = 1;
                    ++count;
                    stack.push_back(y);
                }
        }
        return count == n_;
    }

    /// Subgraph keeping the given edges (must be a subset) on the same vertex set.
    Graph edge_subgraph(const std::vector<Edge>& keep) const {
        for (const Edge& e : keep)
            if (!has_edge(e.u, e.v)) throw parameter_error("edge_subgraph: edge not in graph");
        return Graph(n_, keep, labels_);
    }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::string> labels_;
    std::vector<std::vector<int>> adj_;
};

namespace detail {

inline std::string label_of(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw parse_error("vertex label must be a string or an integer");
}

/// Resolves labels to indices, rejecting duplicates and unknown labels.
struct LabelIndex {
    std::vector<std::string> labels;
    std::map<std::string, int> index;

    explicit LabelIndex(const nlohmann::json& vertices) {
        for (const auto& v : vertices) {
            auto l = label_of(v);
            if (!index.emplace(l, static_cast<int>(labels.size())).second) throw parse_error("duplicate vertex label " + l);
            labels.push_back(l);
        }
    }

    int at(const nlohmann::json& v) const {
        auto l = label_of(v);
        auto it = index.find(l);
        if (it == index.end()) throw parse_error("unknown vertex label " + l);
        return it->second;
    }
};

} // namespace detail

// Graph JSON: {vertices: [labels], edges: [[u, v], ...]} with edges given by label.

inline void to_json(nlohmann::json& j, const Graph& g) {
    auto edges = nlohmann::json::array();
    for (const Edge& e : g.edges()) edges.push_back({g.label(e.u), g.label(e.v)});
    j = nlohmann::json{{"vertices", g.labels()}, {"edges", edges}};
}

inline Graph graph_from_json(const nlohmann::json& j) {
    try {
        detail::LabelIndex idx(j.at("vertices"));
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw parse_error("edge must be a pair of labels");
            edges.emplace_back(idx.at(e[0]), idx.at(e[1]));
        }
        return Graph(static_cast<int>(idx.labels.size()), std::move(edges), idx.labels);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed graph JSON: ") + e.what());
    } catch (const parameter_error& e) {
        throw parse_error(std::string("invalid graph: ") + e.what());
    }
}

/// Named small patterns: K2, K3, P3 (path on 3 vertices), P4, C4, 2K2.
inline Graph named_pattern(const std::string& name) {
    if (name == "K2") return Graph(2, {{0, 1}});
    if (name == "K3") return Graph(3, {{0, 1}, {1, 2}, {0, 2}});
    if (name == "P3") return Graph(3, {{0, 1}, {1, 2}});
    if (name == "P4") return Graph(4, {{0, 1}, {1, 2}, {2, 3}});
    if (name == "C4") return Graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    if (name == "2K2") return Graph(4, {{0, 1}, {2, 3}});
    throw parameter_error("unknown pattern '" + name + "'");
}

} // namespace ciso
