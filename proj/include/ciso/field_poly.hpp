#pragma once

// Prime-field arithmetic and dense multivariate polynomials of bounded total
// degree. These are the random objects behind the polynomial edge colouring.

#include <ciso/error.hpp>
#include <ciso/rng.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ciso {

using felem = std::uint32_t;

class PrimeField {
public:
    explicit PrimeField(std::uint64_t q) : q_(static_cast<felem>(q)) {
        if (q < 2 || q > std::numeric_limits<std::int32_t>::max() || !is_prime(q))
            throw invalid_field_error("modulus " + std::to_string(q) + " is not a prime");
    }

    felem modulus() const noexcept { return q_; }

    felem add(felem a, felem b) const noexcept {
        std::uint64_t s = std::uint64_t{a} + b;
        return static_cast<felem>(s >= q_ ? s - q_ : s);
    }
    felem sub(felem a, felem b) const noexcept { return a >= b ? a - b : static_cast<felem>(a + q_ - b); }
    felem mul(felem a, felem b) const noexcept {
        return static_cast<felem>(std::uint64_t{a} * b % q_);
    }
    felem pow(felem base, std::uint64_t e) const noexcept {
        felem r = 1 % q_;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }
    bool contains(std::uint64_t v) const noexcept { return v < q_; }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

    /// Deterministic trial division; moduli here are small.
    static bool is_prime(std::uint64_t n) noexcept {
        if (n < 2) return false;
        if (n % 2 == 0) return n == 2;
        for (std::uint64_t d = 3; d * d <= n; d += 2)
            if (n % d == 0) return false;
        return true;
    }

private:
    felem q_;
};

inline constexpr std::size_t default_monomial_budget = std::size_t{1} << 22;

/// C(nvars + degree, degree), or max size_t on overflow.
inline std::size_t monomial_count(int nvars, int degree) {
    if (nvars < 0 || degree < 0) return 0;
    // C(n+d, d) built incrementally as C(n+i, i); each step divides exactly.
    unsigned __int128 c = 1;
    for (int i = 1; i <= degree; ++i) {
        c = c * static_cast<unsigned>(nvars + i) / static_cast<unsigned>(i);
        if (c > std::numeric_limits<std::size_t>::max()) return std::numeric_limits<std::size_t>::max();
    }
    return static_cast<std::size_t>(c);
}

/// Exponent vectors of total degree <= degree in graded-lexicographic order:
/// by total degree ascending, then lexicographically descending on
/// (e_1, ..., e_nvars) so x1^k precedes x2^k.
class MonomialBasis {
public:
    MonomialBasis(int nvars, int degree) : nvars_(nvars), degree_(degree) {
        std::vector<int> e(static_cast<std::size_t>(nvars), 0);
        for (int total = 0; total <= degree; ++total) fill(e, 0, total);
    }

    int nvars() const noexcept { return nvars_; }
    int degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return nvars_ == 0 ? 0 : exps_.size() / static_cast<std::size_t>(nvars_); }

    std::span<const std::uint16_t> exponents(std::size_t i) const {
        return {exps_.data() + i * static_cast<std::size_t>(nvars_), static_cast<std::size_t>(nvars_)};
    }

    static std::shared_ptr<const MonomialBasis> make(int nvars, int degree) {
        return std::make_shared<const MonomialBasis>(nvars, degree);
    }

private:
    void fill(std::vector<int>& e, int var, int remaining) {
        if (var == nvars_ - 1) {
            e[static_cast<std::size_t>(var)] = remaining;
            for (int x : e) exps_.push_back(static_cast<std::uint16_t>(x));
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            e[static_cast<std::size_t>(var)] = k;
            fill(e, var + 1, remaining - k);
        }
        e[static_cast<std::size_t>(var)] = 0;
    }

    int nvars_;
    int degree_;
    std::vector<std::uint16_t> exps_;
};

/// Dense polynomial over F_q in `nvars` variables, total degree <= degree.
/// Coefficient i belongs to monomial i of the graded-lex basis.
class MultiPoly {
public:
    MultiPoly(PrimeField field, std::shared_ptr<const MonomialBasis> basis, std::vector<felem> coeffs)
        : field_(field), basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != basis_->size())
            throw dimension_error("coefficient count " + std::to_string(coeffs_.size()) + " does not match basis size " +
                                  std::to_string(basis_->size()));
        for (felem c : coeffs_)
            if (!field_.contains(c)) throw parameter_error("coefficient outside [0, q)");
    }

    static MultiPoly zero(PrimeField field, int nvars, int degree,
                          std::size_t max_monomials = default_monomial_budget) {
        auto basis = checked_basis(nvars, degree, max_monomials);
        std::vector<felem> c(basis->size(), 0);
        return MultiPoly(field, std::move(basis), std::move(c));
    }

    const PrimeField& field() const noexcept { return field_; }
    int nvars() const noexcept { return basis_->nvars(); }
    int degree() const noexcept { return basis_->degree(); }
    const MonomialBasis& basis() const noexcept { return *basis_; }
    const std::shared_ptr<const MonomialBasis>& shared_basis() const noexcept { return basis_; }
    std::span<const felem> coeffs() const noexcept { return coeffs_; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](felem c) { return c == 0; });
    }

    /// Sum over monomials of coeff * prod x_i^{e_i}, with per-variable power tables.
    felem evaluate(std::span<const felem> point) const {
        const int nv = nvars();
        if (point.size() != static_cast<std::size_t>(nv))
            throw dimension_error("point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                                  std::to_string(nv) + " variables");
        for (felem x : point)
            if (!field_.contains(x)) throw parameter_error("point coordinate outside [0, q)");

        const auto d = static_cast<std::size_t>(degree()) + 1;
        std::vector<felem> powers(static_cast<std::size_t>(nv) * d);
        for (std::size_t v = 0; v < static_cast<std::size_t>(nv); ++v) {
            powers[v * d] = 1 % field_.modulus();
            for (std::size_t e = 1; e < d; ++e) powers[v * d + e] = field_.mul(powers[v * d + e - 1], point[v]);
        }

        const std::uint64_t q = field_.modulus();
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == 0) continue;
            auto e = basis_->exponents(i);
            std::uint64_t term = coeffs_[i];
            for (std::size_t v = 0; v < e.size(); ++v)
                if (e[v]) term = term * powers[v * d + e[v]] % q;
            acc += term;
            if (acc >= q) acc -= q;
        }
        return static_cast<felem>(acc);
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
        if (!(a.field_ == b.field_) || a.nvars() != b.nvars() || a.degree() != b.degree())
            throw dimension_error("adding polynomials of different shape");
        std::vector<felem> c(a.coeffs_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.field_.add(a.coeffs_[i], b.coeffs_[i]);
        return MultiPoly(a.field_, a.basis_, std::move(c));
    }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.field_ == b.field_ && a.nvars() == b.nvars() && a.degree() == b.degree() && a.coeffs_ == b.coeffs_;
    }

    static std::shared_ptr<const MonomialBasis> checked_basis(int nvars, int degree, std::size_t max_monomials) {
        if (nvars < 1) throw parameter_error("polynomial needs at least one variable");
        if (degree < 0) throw parameter_error("negative degree bound");
        if (degree > std::numeric_limits<std::uint16_t>::max()) throw budget_error("degree bound too large");
        const std::size_t count = monomial_count(nvars, degree);
        if (count > max_monomials)
            throw budget_error("C(" + std::to_string(nvars + degree) + ", " + std::to_string(degree) +
                               ") monomials exceed the budget of " + std::to_string(max_monomials));
        return MonomialBasis::make(nvars, degree);
    }

private:
    PrimeField field_;
    std::shared_ptr<const MonomialBasis> basis_;
    std::vector<felem> coeffs_;
};

/// Uniformly random element of P_d: every coefficient independent and
/// uniform on [0, q). Deterministic in `seed`.
inline MultiPoly sample_poly(PrimeField field, int nvars, int degree, seed_t seed,
                             std::size_t max_monomials = default_monomial_budget) {
    auto basis = MultiPoly::checked_basis(nvars, degree, max_monomials);
    rng gen(seed);
    std::vector<felem> c(basis->size());
    for (auto& x : c) x = static_cast<felem>(gen.below(field.modulus()));
    return MultiPoly(field, std::move(basis), std::move(c));
}

/// F = (f_1, ..., f_k), all components sharing field, arity and degree bound.
class VectorPoly {
public:
    explicit VectorPoly(std::vector<MultiPoly> components) : components_(std::move(components)) {
        if (components_.empty()) throw parameter_error("vector polynomial needs at least one component");
        const auto& f = components_.front();
        for (const auto& g : components_)
            if (!(g.field() == f.field()) || g.nvars() != f.nvars() || g.degree() != f.degree())
                throw dimension_error("vector polynomial components disagree on (q, nvars, d)");
    }

    /// Component i sampled with sub-seed derive_seed(seed, i).
    static VectorPoly sample(PrimeField field, std::size_t count, int nvars, int degree, seed_t seed,
                             std::size_t max_monomials = default_monomial_budget) {
        std::vector<MultiPoly> comps;
        comps.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
            comps.push_back(sample_poly(field, nvars, degree, derive_seed(seed, i), max_monomials));
        return VectorPoly(std::move(comps));
    }

    std::size_t size() const noexcept { return components_.size(); }
    const MultiPoly& operator[](std::size_t i) const { return components_[i]; }
    const std::vector<MultiPoly>& components() const noexcept { return components_; }
    const PrimeField& field() const noexcept { return components_.front().field(); }
    int nvars() const noexcept { return components_.front().nvars(); }
    int degree() const noexcept { return components_.front().degree(); }

    std::vector<felem> evaluate(std::span<const felem> point) const {
        std::vector<felem> out;
        out.reserve(components_.size());
        for (const auto& f : components_) out.push_back(f.evaluate(point));
        return out;
    }

private:
    std::vector<MultiPoly> components_;
};

struct VanishingEstimate {
    std::size_t hits = 0;
    std::size_t trials = 0;
    double estimate = 0.0;
    double expected = 0.0;  // q^{-m}
    double sigma = 0.0;     // binomial standard error at `expected`
};

/// Fraction of uniformly sampled f in P_d vanishing on every given point.
/// Requires pairwise distinct points and d >= m - 1.
inline VanishingEstimate vanishing_probability_trial(PrimeField field, const std::vector<std::vector<felem>>& points,
                                                     int degree, std::size_t trials, seed_t seed) {
    const std::size_t m = points.size();
    if (m == 0) throw degenerate_input_error("no points given");
    if (trials == 0) throw parameter_error("trials must be positive");
    if (degree < static_cast<int>(m) - 1)
        throw degenerate_input_error("degree " + std::to_string(degree) + " < m - 1 = " + std::to_string(m - 1));
    const std::size_t nvars = points.front().size();
    for (std::size_t i = 0; i < m; ++i) {
        if (points[i].size() != nvars) throw dimension_error("points have different dimensions");
        for (felem x : points[i])
            if (!field.contains(x)) throw parameter_error("point coordinate outside [0, q)");
        for (std::size_t j = 0; j < i; ++j)
            if (points[i] == points[j]) throw degenerate_input_error("points are not pairwise distinct");
    }

    auto basis = MultiPoly::checked_basis(static_cast<int>(nvars), degree, default_monomial_budget);
    // Monomial values at each point; f(X_i) is then a dot product with the coefficients.
    std::vector<std::vector<felem>> mono(m, std::vector<felem>(basis->size()));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < basis->size(); ++k) {
            auto e = basis->exponents(k);
            felem v = 1 % field.modulus();
            for (std::size_t t = 0; t < nvars; ++t) v = field.mul(v, field.pow(points[i][t], e[t]));
            mono[i][k] = v;
        }

    const std::uint64_t q = field.modulus();
    rng gen(seed);
    std::vector<felem> coeffs(basis->size());
    VanishingEstimate out;
    out.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        for (auto& c : coeffs) c = static_cast<felem>(gen.below(q));
        bool all_zero = true;
        for (std::size_t i = 0; i < m && all_zero; ++i) {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < coeffs.size(); ++k) acc = (acc + std::uint64_t{coeffs[k]} * mono[i][k]) % q;
            all_zero = acc == 0;
        }
        if (all_zero) ++out.hits;
    }
    out.estimate = static_cast<double>(out.hits) / static_cast<double>(trials);
    double p = 1.0;
    for (std::size_t i = 0; i < m; ++i) p /= static_cast<double>(q);
    out.expected = p;
    out.sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return out;
}

// JSON: {q, nvars, d, coeffs: [[exponent-vector, value], ...]} listing every
// monomial of the dense basis in graded-lex order.

inline void to_json(nlohmann::json& j, const MultiPoly& p) {
    auto coeffs = nlohmann::json::array();
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto e = p.basis().exponents(i);
        coeffs.push_back({std::vector<int>(e.begin(), e.end()), p.coeffs()[i]});
    }
    j = nlohmann::json{{"q", p.field().modulus()}, {"nvars", p.nvars()}, {"d", p.degree()}, {"coeffs", coeffs}};
}

inline MultiPoly multipoly_from_json(const nlohmann::json& j) {
    try {
        PrimeField field(j.at("q").get<std::uint64_t>());
        const int nvars = j.at("nvars").get<int>();
        const int d = j.at("d").get<int>();
        auto basis = MultiPoly::checked_basis(nvars, d, default_monomial_budget);
        std::vector<felem> c(basis->size(), 0);
        std::vector<bool> seen(basis->size(), false);
        // Index exponent vectors so entries may come in any order and zeros may be omitted.
        std::vector<std::vector<std::uint16_t>> keys(basis->size());
        for (std::size_t i = 0; i < basis->size(); ++i) {
            auto e = basis->exponents(i);
            keys[i].assign(e.begin(), e.end());
        }
        std::vector<std::size_t> order(basis->size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
        for (const auto& entry : j.at("coeffs")) {
            auto e = entry.at(0).get<std::vector<std::uint16_t>>();
            auto v = entry.at(1).get<std::uint64_t>();
            if (e.size() != static_cast<std::size_t>(nvars)) throw dimension_error("exponent vector of wrong length");
            auto it = std::lower_bound(order.begin(), order.end(), e,
                                       [&](std::size_t idx, const auto& key) { return keys[idx] < key; });
            if (it == order.end() || keys[*it] != e) throw parameter_error("exponent vector exceeds degree bound");
            if (seen[*it]) throw parameter_error("duplicate exponent vector");
            if (!field.contains(v)) throw parameter_error("coefficient outside [0, q)");
            seen[*it] = true;
            c[*it] = static_cast<felem>(v);
        }
        return MultiPoly(field, std::move(basis), std::move(c));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed polynomial JSON: ") + e.what());
    }
}

} // namespace ciso
