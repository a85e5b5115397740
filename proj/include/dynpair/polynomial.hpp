#pragma once

#include <dynpair/rational.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace dynpair {

namespace config {
/// Hard cap on stored terms per polynomial; symbolic iterate growth is
/// doubly exponential in the worst case and must fail cleanly.
inline std::size_t term_budget = 1'000'000;
}  // namespace config

struct term_budget_error : std::runtime_error {
    term_budget_error() : std::runtime_error("polynomial term budget exceeded") {}
};

struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Exponent vector; lexicographic std::vector order keeps term maps
/// deterministic across runs.
using Monomial = std::vector<std::uint32_t>;

inline unsigned long total_degree(const Monomial& m) {
    return std::accumulate(m.begin(), m.end(), 0ul);
}

/// Sparse multivariate polynomial with exact coefficients over a field C.
template <class C>
struct MultiPoly {
    std::size_t n_vars = 0;
    std::map<Monomial, C> terms;  // invariant: no zero coefficients stored

    MultiPoly() = default;
    explicit MultiPoly(std::size_t n) : n_vars(n) {}

    static MultiPoly constant(std::size_t n, const C& c) {
        MultiPoly p(n);
        if (!(c == C(0)))
            p.terms.emplace(Monomial(n, 0), c);
        return p;
    }

    static MultiPoly variable(std::size_t n, std::size_t i, const C& coeff = C(1)) {
        if (i >= n)
            throw dimension_error("variable index out of range");
        MultiPoly p(n);
        Monomial m(n, 0);
        m[i] = 1;
        if (!(coeff == C(0)))
            p.terms.emplace(std::move(m), coeff);
        return p;
    }

    bool is_zero() const { return terms.empty(); }

    /// Total degree; -1 for the zero polynomial.
    long degree() const {
        long d = -1;
        for (const auto& [m, c] : terms)
            d = std::max(d, static_cast<long>(total_degree(m)));
        return d;
    }

    bool operator==(const MultiPoly& o) const {
        return n_vars == o.n_vars && terms == o.terms;
    }

    void add_term(const Monomial& m, const C& c) {
        if (c == C(0))
            return;
        auto [it, fresh] = terms.emplace(m, c);
        if (!fresh) {
            it->second = it->second + c;
            if (it->second == C(0))
                terms.erase(it);
        }
        if (terms.size() > config::term_budget)
            throw term_budget_error();
    }

    MultiPoly operator+(const MultiPoly& o) const {
        require_same(o);
        MultiPoly r = *this;
        for (const auto& [m, c] : o.terms)
            r.add_term(m, c);
        return r;
    }

    MultiPoly operator-() const {
        MultiPoly r = *this;
        for (auto& [m, c] : r.terms)
            c = C(0) - c;
        return r;
    }

    MultiPoly operator-(const MultiPoly& o) const { return *this + (-o); }

    MultiPoly operator*(const MultiPoly& o) const {
        require_same(o);
        MultiPoly r(n_vars);
        Monomial m(n_vars);
        for (const auto& [ma, ca] : terms)
            for (const auto& [mb, cb] : o.terms) {
                for (std::size_t k = 0; k < n_vars; ++k)
                    m[k] = ma[k] + mb[k];
                r.add_term(m, ca * cb);
            }
        return r;
    }

    MultiPoly scaled(const C& c) const {
        MultiPoly r(n_vars);
        if (c == C(0))
            return r;
        for (const auto& [m, v] : terms)
            r.terms.emplace(m, v * c);
        return r;
    }

    MultiPoly pow(unsigned long e) const {
        MultiPoly r = constant(n_vars, C(1));
        MultiPoly b = *this;
        while (e) {
            if (e & 1)
                r = r * b;
            e >>= 1;
            if (e)
                b = b * b;
        }
        return r;
    }

    /// Evaluate with values of any ring type T; conv maps coefficients
    /// into T. Powers of each value are cached.
    template <class T, class Conv>
    T evaluate(const std::vector<T>& point, Conv conv, const T& zero, const T& one) const {
        if (point.size() != n_vars)
            throw dimension_error("evaluation point has wrong dimension");
        std::vector<std::vector<T>> powers(n_vars);
        for (std::size_t i = 0; i < n_vars; ++i)
            powers[i].push_back(one);
        T acc = zero;
        for (const auto& [m, c] : terms) {
            T t = conv(c);
            for (std::size_t i = 0; i < n_vars; ++i) {
                auto& pw = powers[i];
                while (pw.size() <= m[i])
                    pw.push_back(pw.back() * point[i]);
                if (m[i])
                    t = t * pw[m[i]];
            }
            acc = acc + t;
        }
        return acc;
    }

    void require_same(const MultiPoly& o) const {
        if (n_vars != o.n_vars)
            throw dimension_error("polynomial arity mismatch");
    }
};

using QPoly = MultiPoly<Rat>;

inline Rat evaluate_exact(const QPoly& p, const std::vector<Rat>& point) {
    return p.evaluate<Rat>(
        point, [](const Rat& c) { return c; }, Rat(0), Rat(1));
}

/// Degree-d part of p (the top form when d = degree of p).
template <class C>
MultiPoly<C> homogeneous_part(const MultiPoly<C>& p, unsigned long d) {
    MultiPoly<C> r(p.n_vars);
    for (const auto& [m, c] : p.terms)
        if (total_degree(m) == d)
            r.terms.emplace(m, c);
    return r;
}

/// Map every coefficient through conv, dropping terms that land on zero
/// (e.g. reduction mod p).
template <class C2, class C, class Conv>
MultiPoly<C2> convert_coefficients(const MultiPoly<C>& p, Conv conv) {
    MultiPoly<C2> r(p.n_vars);
    for (const auto& [m, c] : p.terms)
        r.add_term(m, conv(c));
    return r;
}

}  // namespace dynpair
