#pragma once

// Stand-alone verification of a claimed colour-isomorphic disjoint pair.
// Deliberately self-contained: it uses only the colour lookup of the colouring.

#include <ciso/colouring.hpp>
#include <ciso/graph.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ciso {

/// nullopt when (map1, map2) are injective maps of `pattern` into K_n with
/// disjoint images and every pattern edge gets the same colour under both
/// maps; otherwise a description of the first failure.
inline std::optional<std::string> check_colour_isomorphic_pair(const EdgeColouring& c, const Graph& pattern,
                                                               const std::vector<int>& map1,
                                                               const std::vector<int>& map2) {
    const auto k = static_cast<std::size_t>(pattern.vertex_count());
    if (map1.size() != k || map2.size() != k) return "maps do not cover the pattern";
    std::set<int> image1, image2;
    for (std::size_t i = 0; i < k; ++i) {
        for (int x : {map1[i], map2[i]})
            if (x < 0 || x >= c.vertex_count()) return "image vertex " + std::to_string(x) + " outside K_n";
        image1.insert(map1[i]);
        image2.insert(map2[i]);
    }
    if (image1.size() != k) return "first map is not injective";
    if (image2.size() != k) return "second map is not injective";
    for (int x : image1)
        if (image2.count(x)) return "copies share vertex " + std::to_string(x);
    for (const Edge& e : pattern.edges()) {
        const auto a = c.colour(map1[static_cast<std::size_t>(e.u)], map1[static_cast<std::size_t>(e.v)]);
        const auto b = c.colour(map2[static_cast<std::size_t>(e.u)], map2[static_cast<std::size_t>(e.v)]);
        if (a != b)
            return "pattern edge " + pattern.label(e.u) + "-" + pattern.label(e.v) + " has colours " + std::to_string(a) +
                   " and " + std::to_string(b);
    }
    return std::nullopt;
}

} // namespace ciso
