#pragma once

#include <dynpair/polynomial.hpp>

#include <string>
#include <vector>

namespace dynpair {

/// Affine polynomial self-map of A^n given by n components in n variables.
struct PolyMap {
    std::size_t n = 0;
    std::vector<QPoly> components;

    PolyMap() = default;
    PolyMap(std::size_t dim, std::vector<QPoly> comps)
        : n(dim), components(std::move(comps)) {
        for (const auto& c : components)
            if (c.n_vars != n)
                throw dimension_error("map component arity mismatch");
        if (components.size() != n)
            throw dimension_error("map needs n components");
    }

    static PolyMap identity(std::size_t n) {
        std::vector<QPoly> comps;
        comps.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            comps.push_back(QPoly::variable(n, i));
        return PolyMap(n, std::move(comps));
    }

    /// Max total degree of the components (>= 1 for maps of interest).
    long degree() const {
        long d = -1;
        for (const auto& c : components)
            d = std::max(d, c.degree());
        return d;
    }

    bool operator==(const PolyMap& o) const {
        return n == o.n && components == o.components;
    }
};

inline std::vector<Rat> evaluate_exact(const PolyMap& f, const std::vector<Rat>& X) {
    std::vector<Rat> out;
    out.reserve(f.n);
    for (const auto& c : f.components)
        out.push_back(evaluate_exact(c, X));
    return out;
}

/// Exact symbolic composition outer(inner(X)).
inline PolyMap compose(const PolyMap& outer, const PolyMap& inner) {
    if (outer.n != inner.n)
        throw dimension_error("composition dimension mismatch");
    std::vector<QPoly> comps;
    comps.reserve(outer.n);
    const QPoly zero(outer.n), one = QPoly::constant(outer.n, Rat(1));
    for (const auto& c : outer.components)
        comps.push_back(c.evaluate<QPoly>(
            inner.components,
            [&](const Rat& q) { return QPoly::constant(outer.n, q); }, zero, one));
    return PolyMap(outer.n, std::move(comps));
}

inline PolyMap pow_map(const PolyMap& f, unsigned long e) {
    PolyMap r = PolyMap::identity(f.n);
    for (unsigned long k = 0; k < e; ++k)
        r = compose(f, r);
    return r;
}

/// Degrees of f, f^2, ..., f^m_max; stops early (partial result) if the
/// term budget is exhausted by a composition.
inline std::vector<long> degree_sequence(const PolyMap& f, unsigned m_max) {
    std::vector<long> degs;
    PolyMap it = f;
    for (unsigned m = 1; m <= m_max; ++m) {
        degs.push_back(it.degree());
        if (m == m_max)
            break;
        try {
            it = compose(f, it);
        } catch (const term_budget_error&) {
            break;
        }
    }
    return degs;
}

}  // namespace dynpair
