#pragma once

// Bounded-to-proper transformation: every colour class (max degree <= C) is
// edge-coloured with at most C + 1 indices by the Misra-Gries form of
// Vizing's theorem; the refined colour is the pair (original, index).

#include <ciso/colouring.hpp>
#include <ciso/error.hpp>
#include <ciso/graph.hpp>

#include <algorithm>
#include <limits>
#include <map>
#include <vector>

namespace ciso {

/// Proper edge colouring of a simple graph with at most maxdeg + 1 colours.
/// Returns one colour index per edge of `g.edges()`.
inline std::vector<int> misra_gries_edge_colouring(const Graph& g) {
    const int n = g.vertex_count();
    int maxdeg = 0;
    for (int v = 0; v < n; ++v) maxdeg = std::max(maxdeg, g.degree(v));
    const int k = maxdeg + 1;
    const auto N = static_cast<std::size_t>(n);
    const auto K = static_cast<std::size_t>(k);

    std::vector<int> col(N * N, -1);  // colour of (u, v) or -1
    std::vector<int> at(N * K, -1);   // neighbour of v along colour c or -1

    auto get = [&](int u, int v) { return col[static_cast<std::size_t>(u) * N + static_cast<std::size_t>(v)]; };
    auto is_free = [&](int v, int c) { return at[static_cast<std::size_t>(v) * K + static_cast<std::size_t>(c)] < 0; };
    auto set = [&](int u, int v, int c) {
        col[static_cast<std::size_t>(u) * N + static_cast<std::size_t>(v)] = c;
        col[static_cast<std::size_t>(v) * N + static_cast<std::size_t>(u)] = c;
        at[static_cast<std::size_t>(u) * K + static_cast<std::size_t>(c)] = v;
        at[static_cast<std::size_t>(v) * K + static_cast<std::size_t>(c)] = u;
    };
    auto clear = [&](int u, int v) {
        const int c = get(u, v);
        if (c < 0) return;
        at[static_cast<std::size_t>(u) * K + static_cast<std::size_t>(c)] = -1;
        at[static_cast<std::size_t>(v) * K + static_cast<std::size_t>(c)] = -1;
        col[static_cast<std::size_t>(u) * N + static_cast<std::size_t>(v)] = -1;
        col[static_cast<std::size_t>(v) * N + static_cast<std::size_t>(u)] = -1;
    };
    auto free_colour = [&](int v) {
        for (int c = 0; c < k; ++c)
            if (is_free(v, c)) return c;
        throw contract_error("vertex without a free colour");
    };

    std::vector<int> fan;
    std::vector<char> in_fan(N, 0);
    for (const Edge& e : g.edges()) {
        const int u = e.u;
        fan.assign(1, e.v);
        in_fan[static_cast<std::size_t>(e.v)] = 1;
        // Maximal fan at u: colour of (u, fan[i+1]) is free on fan[i].
        for (bool grown = true; grown;) {
            grown = false;
            for (int w : g.neighbours(u)) {
                const int c = get(u, w);
                if (in_fan[static_cast<std::size_t>(w)] || c < 0 || !is_free(fan.back(), c)) continue;
                fan.push_back(w);
                in_fan[static_cast<std::size_t>(w)] = 1;
                grown = true;
                break;
            }
        }
        const int c = free_colour(u);
        const int d = free_colour(fan.back());

        // Swap c and d along the alternating path leaving u on colour d.
        if (c != d) {
            struct Step {
                int x, y, colour;
            };
            std::vector<Step> path;
            int x = u, cur = d;
            while (!is_free(x, cur)) {
                const int y = at[static_cast<std::size_t>(x) * K + static_cast<std::size_t>(cur)];
                path.push_back({x, y, cur});
                x = y;
                cur = cur == d ? c : d;
            }
            for (const Step& s : path) clear(s.x, s.y);
            for (const Step& s : path) set(s.x, s.y, s.colour == d ? c : d);
        }

        // Longest valid fan prefix ending at a vertex where d is free.
        int w = -1;
        for (std::size_t i = 0; i < fan.size(); ++i) {
            if (i > 0) {
                const int ci = get(u, fan[i]);
                if (ci < 0 || !is_free(fan[i - 1], ci)) break;
            }
            if (is_free(fan[i], d)) {
                w = static_cast<int>(i);
                break;
            }
        }
        if (w < 0) throw contract_error("Misra-Gries: no fan prefix ends in a d-free vertex");

        for (int i = 0; i < w; ++i) {
            const int shifted = get(u, fan[static_cast<std::size_t>(i) + 1]);
            clear(u, fan[static_cast<std::size_t>(i) + 1]);
            set(u, fan[static_cast<std::size_t>(i)], shifted);
        }
        set(u, fan[static_cast<std::size_t>(w)], d);

        for (int v : fan) in_fan[static_cast<std::size_t>(v)] = 0;
    }

    std::vector<int> out;
    out.reserve(g.edge_count());
    for (const Edge& e : g.edges()) out.push_back(get(e.u, e.v));
    return out;
}

/// Refined colour of (original, index) for a C-bounded source.
inline colour_t refined_colour(colour_t original, int index, int bound) {
    return original * static_cast<colour_t>(bound + 1) + static_cast<colour_t>(index);
}

/// Original colour of a refined colour.
inline colour_t refined_source(colour_t refined, int bound) { return refined / static_cast<colour_t>(bound + 1); }

/// Proper colouring refining `c`: equal output colours imply equal input
/// colours, and at most (C + 1) |palette(c)| colours are used.
inline EdgeColouring vizing_properize(const EdgeColouring& c) {
    const int bound = boundedness(c);
    const int n = c.vertex_count();
    if (n < 2) return c;
    const auto pal = c.palette();
    if (pal.back() > (std::numeric_limits<colour_t>::max() - static_cast<colour_t>(bound)) / static_cast<colour_t>(bound + 1))
        throw budget_error("refined colours overflow 64 bits");

    std::vector<colour_t> out(c.edge_count());
    for (const auto& [colour, edges] : c.classes()) {
        // Compress the class onto its own vertex set.
        std::map<int, int> local;
        for (const Edge& e : edges) {
            local.try_emplace(e.u, static_cast<int>(local.size()));
            local.try_emplace(e.v, static_cast<int>(local.size()));
        }
        std::vector<Edge> local_edges;
        std::vector<int> back(local.size());
        for (auto [v, i] : local) back[static_cast<std::size_t>(i)] = v;
        for (const Edge& e : edges) local_edges.emplace_back(local.at(e.u), local.at(e.v));
        const Graph g(static_cast<int>(local.size()), local_edges);
        const auto index = misra_gries_edge_colouring(g);
        for (std::size_t i = 0; i < g.edges().size(); ++i) {
            const Edge& le = g.edges()[i];
            out[EdgeColouring::edge_index(n, back[static_cast<std::size_t>(le.u)], back[static_cast<std::size_t>(le.v)])] =
                refined_colour(colour, index[i], bound);
        }
    }
    return EdgeColouring(n, std::move(out));
}

} // namespace ciso
