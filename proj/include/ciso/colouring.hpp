#pragma once

// Edge colourings of K_n: the random-polynomial construction, properness and
// boundedness, standard fixtures, and the CSV file format.

#include <ciso/error.hpp>
#include <ciso/field_poly.hpp>
#include <ciso/graph.hpp>
#include <ciso/rng.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace ciso {

using colour_t = std::uint64_t;

/// Total colour map on the edges of K_n, vertices 0..n-1.
class EdgeColouring {
public:
    EdgeColouring() = default;

    EdgeColouring(int n, std::vector<colour_t> colours) : n_(n), colours_(std::move(colours)) {
        if (n < 0) throw parameter_error("negative vertex count");
        if (colours_.size() != pair_count(n))
            throw parameter_error("colouring of K_" + std::to_string(n) + " needs " + std::to_string(pair_count(n)) +
                                  " colours, got " + std::to_string(colours_.size()));
    }

    static std::size_t pair_count(int n) { return n < 2 ? 0 : static_cast<std::size_t>(n) * (n - 1) / 2; }

    /// Row-major index of {u, v} among the pairs of K_n.
    static std::size_t edge_index(int n, int u, int v) {
        if (u > v) std::swap(u, v);
        const auto uu = static_cast<std::size_t>(u);
        return uu * static_cast<std::size_t>(n) - uu * (uu + 1) / 2 + static_cast<std::size_t>(v - u - 1);
    }

    int vertex_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return colours_.size(); }
    const std::vector<colour_t>& colours() const noexcept { return colours_; }

    colour_t colour(int u, int v) const {
        if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_) throw parameter_error("not an edge of K_n");
        return colours_[edge_index(n_, u, v)];
    }
    colour_t colour(const Edge& e) const { return colour(e.u, e.v); }

    /// Sorted distinct colours.
    std::vector<colour_t> palette() const {
        std::vector<colour_t> p = colours_;
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
        return p;
    }

    /// Colour -> edges of that colour, each list in (u, v) order.
    std::map<colour_t, std::vector<Edge>> classes() const {
        std::map<colour_t, std::vector<Edge>> out;
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v) out[colour(u, v)].emplace_back(u, v);
        return out;
    }

    friend bool operator==(const EdgeColouring&, const EdgeColouring&) = default;

private:
    int n_ = 0;
    std::vector<colour_t> colours_;
};

/// Every edge its own colour (colour = edge index).
inline EdgeColouring rainbow_colouring(int n) {
    std::vector<colour_t> c(EdgeColouring::pair_count(n));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = i;
    return EdgeColouring(n, std::move(c));
}

/// Round-robin 1-factorization: n-1 perfect matchings for even n; for odd n
/// the same on n+1 vertices with the phantom vertex removed (n colours).
inline EdgeColouring round_robin_colouring(int n) {
    if (n < 2) return EdgeColouring(n, {});
    const int m = n % 2 == 0 ? n : n + 1;
    std::vector<colour_t> c(EdgeColouring::pair_count(n));
    for (int round = 0; round < m - 1; ++round) {
        auto put = [&](int u, int v) {
            if (u < n && v < n) c[EdgeColouring::edge_index(n, u, v)] = static_cast<colour_t>(round);
        };
        put(round, m - 1);
        for (int i = 1; i < m / 2; ++i) put((round + i) % (m - 1), (round - i + m - 1) % (m - 1));
    }
    return EdgeColouring(n, std::move(c));
}

struct ProperViolation {
    int vertex;
    Edge first;
    Edge second;
};

/// First vertex (in order) carrying two incident edges of one colour.
inline std::optional<ProperViolation> is_proper(const EdgeColouring& c) {
    const int n = c.vertex_count();
    std::vector<std::pair<colour_t, int>> inc;
    for (int v = 0; v < n; ++v) {
        inc.clear();
        for (int w = 0; w < n; ++w)
            if (w != v) inc.emplace_back(c.colour(v, w), w);
        std::sort(inc.begin(), inc.end());
        for (std::size_t i = 1; i < inc.size(); ++i)
            if (inc[i].first == inc[i - 1].first) return ProperViolation{v, Edge(v, inc[i - 1].second), Edge(v, inc[i].second)};
    }
    return std::nullopt;
}

/// Smallest C such that every colour class has maximum degree <= C
/// (0 for a colouring without edges).
inline int boundedness(const EdgeColouring& c) {
    const int n = c.vertex_count();
    int best = 0;
    std::vector<colour_t> inc;
    for (int v = 0; v < n; ++v) {
        inc.clear();
        for (int w = 0; w < n; ++w)
            if (w != v) inc.push_back(c.colour(v, w));
        std::sort(inc.begin(), inc.end());
        int run = 0;
        for (std::size_t i = 0; i < inc.size(); ++i) {
            run = (i > 0 && inc[i] == inc[i - 1]) ? run + 1 : 1;
            best = std::max(best, run);
        }
    }
    return best;
}

/// Base-q digits of i, most significant first: vertex i of K_n as a point of F_q^b.
inline std::vector<std::vector<felem>> phi_embed(std::int64_t n, std::uint64_t q, int b) {
    if (b < 1 || q < 2) throw parameter_error("phi_embed needs b >= 1 and q >= 2");
    unsigned __int128 cap = 1;
    for (int i = 0; i < b && cap <= static_cast<unsigned __int128>(n); ++i) cap *= q;
    if (n < 0 || static_cast<unsigned __int128>(n) > cap)
        throw size_error("n = " + std::to_string(n) + " exceeds q^b");
    std::vector<std::vector<felem>> out(static_cast<std::size_t>(n), std::vector<felem>(static_cast<std::size_t>(b)));
    for (std::int64_t i = 0; i < n; ++i) {
        auto x = static_cast<std::uint64_t>(i);
        for (int k = b - 1; k >= 0; --k) {
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = static_cast<felem>(x % q);
            x /= q;
        }
    }
    return out;
}

struct ConstructionParams {
    int tree_a = 1;  // unrooted vertices of the target tree: F has 2a components
    int tree_b = 2;  // edges of the target tree: vertices live in F_q^b
    int tree_r = 2;  // roots; only used for the default degree bound
    std::uint64_t q = 5;
    std::optional<int> degree;  // unset: default_degree()
    seed_t seed = 0;
    std::optional<int> n;       // unset: q^b
    std::size_t max_monomials = std::size_t{1} << 16;
    int max_vertices = 4096;

    /// 2 r b^2 + b + 1, lowered to the largest d whose dense basis in 2b
    /// variables fits `max_monomials`.
    int default_degree() const {
        int d = 2 * tree_r * tree_b * tree_b + tree_b + 1;
        while (d > 1 && monomial_count(2 * tree_b, d) > max_monomials) --d;
        return d;
    }
};

struct Construction {
    ConstructionParams params;  // with degree and n resolved
    VectorPoly polynomials;
    EdgeColouring colouring;
};

/// Colour of {i, j}, i < j, is F(phi(i), phi(j)) in F_q^{2a}, encoded
/// big-endian in base q.
inline colour_t encode_colour(std::span<const felem> tuple, std::uint64_t q) {
    colour_t c = 0;
    for (felem x : tuple) c = c * q + x;
    return c;
}

inline std::vector<felem> decode_colour(colour_t c, std::uint64_t q, std::size_t width) {
    std::vector<felem> out(width);
    for (std::size_t k = width; k-- > 0;) {
        out[k] = static_cast<felem>(c % q);
        c /= q;
    }
    return out;
}

/// Colour of the pair {i, j} under F, recomputed from the polynomials.
inline colour_t polynomial_colour(const VectorPoly& f, const std::vector<std::vector<felem>>& phi, int i, int j) {
    if (i > j) std::swap(i, j);
    std::vector<felem> point(phi[static_cast<std::size_t>(i)]);
    point.insert(point.end(), phi[static_cast<std::size_t>(j)].begin(), phi[static_cast<std::size_t>(j)].end());
    auto values = f.evaluate(point);
    return encode_colour(values, f.field().modulus());
}

inline Construction construct_random_colouring(ConstructionParams params) {
    if (params.tree_a < 1 || params.tree_b < 1) throw parameter_error("tree sizes a, b must be positive");
    PrimeField field(params.q);
    unsigned __int128 qb = 1, palette = 1;
    for (int i = 0; i < params.tree_b; ++i) qb = std::min<unsigned __int128>(qb * params.q, UINT64_MAX);
    for (int i = 0; i < 2 * params.tree_a; ++i) palette = std::min<unsigned __int128>(palette * params.q, UINT64_MAX);
    if (palette >= (static_cast<unsigned __int128>(1) << 63)) throw budget_error("q^{2a} colours do not fit in 63 bits");
    if (!params.n) {
        if (qb > static_cast<unsigned __int128>(params.max_vertices))
            throw budget_error("n = q^b exceeds the vertex budget of " + std::to_string(params.max_vertices));
        params.n = static_cast<int>(qb);
    }
    if (*params.n < 1 || static_cast<unsigned __int128>(*params.n) > qb)
        throw size_error("n must lie in [1, q^b]");
    if (*params.n > params.max_vertices) throw budget_error("n exceeds the vertex budget");
    if (!params.degree) params.degree = params.default_degree();
    if (*params.degree < 1) throw parameter_error("degree bound must be at least 1");

    VectorPoly f = VectorPoly::sample(field, static_cast<std::size_t>(2 * params.tree_a), 2 * params.tree_b,
                                      *params.degree, params.seed, params.max_monomials);
    const auto phi = phi_embed(*params.n, params.q, params.tree_b);
    const int n = *params.n;
    std::vector<colour_t> colours(EdgeColouring::pair_count(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) colours[EdgeColouring::edge_index(n, i, j)] = polynomial_colour(f, phi, i, j);
    return Construction{params, std::move(f), EdgeColouring(n, std::move(colours))};
}

// CSV: header "u,v,colour", one row per edge with u < v, vertices 0-based,
// colours as unsigned decimal integers. Rows are written in (u, v) order.

inline void write_colouring_csv(std::ostream& out, const EdgeColouring& c) {
    out << "u,v,colour\n";
    const int n = c.vertex_count();
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) out << u << ',' << v << ',' << c.colour(u, v) << '\n';
}

inline EdgeColouring read_colouring_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto strip = [](std::string& s) {
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    };
    if (!std::getline(in, line)) throw parse_error("empty colouring file", 1);
    ++line_no;
    strip(line);
    if (line != "u,v,colour") throw parse_error("expected header 'u,v,colour'", line_no);

    auto number = [&](std::string_view field, const char* what) {
        std::uint64_t x = 0;
        auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
        if (field.empty() || ec != std::errc() || p != field.data() + field.size())
            throw parse_error(std::string("invalid ") + what + " '" + std::string(field) + "'", line_no);
        return x;
    };

    std::map<std::pair<std::uint64_t, std::uint64_t>, colour_t> rows;
    std::uint64_t max_vertex = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip(line);
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        for (;;) {
            auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != 3)
            throw parse_error("expected 3 fields, found " + std::to_string(fields.size()), line_no);
        const auto u = number(fields[0], "vertex"), v = number(fields[1], "vertex");
        const colour_t col = number(fields[2], "colour");
        if (u >= v) throw parse_error("row must satisfy u < v", line_no);
        if (v > 1'000'000) throw parse_error("vertex index too large", line_no);
        if (!rows.emplace(std::make_pair(u, v), col).second)
            throw parse_error("duplicate edge " + std::to_string(u) + "," + std::to_string(v), line_no);
        max_vertex = std::max(max_vertex, v);
    }
    const int n = rows.empty() ? 0 : static_cast<int>(max_vertex) + 1;
    std::vector<colour_t> colours(EdgeColouring::pair_count(n));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            auto it = rows.find({static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(v)});
            if (it == rows.end())
                throw parse_error("missing edge " + std::to_string(u) + "," + std::to_string(v) + " (file ends early?)",
                                  line_no + 1);
            colours[EdgeColouring::edge_index(n, u, v)] = it->second;
        }
    return EdgeColouring(n, std::move(colours));
}

inline std::string colouring_to_csv(const EdgeColouring& c) {
    std::ostringstream s;
    write_colouring_csv(s, c);
    return s.str();
}

inline EdgeColouring colouring_from_csv(const std::string& text) {
    std::istringstream s(text);
    return read_colouring_csv(s);
}

} // namespace ciso
