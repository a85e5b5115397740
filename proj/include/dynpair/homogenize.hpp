#pragma once

#include <dynpair/poly_map.hpp>

namespace dynpair {

/// Projective extension [X0^d : F_1 : ... : F_n] of an affine map, every
/// component homogeneous of the common degree d in X0..Xn.
struct HomogMap {
    std::size_t n = 0;       // affine dimension; components live in n+1 vars
    unsigned long d = 0;     // common degree
    std::vector<QPoly> components;  // size n+1, component 0 = X0^d

    const QPoly& x0_power() const { return components[0]; }
};

inline QPoly homogenize_poly(const QPoly& p, unsigned long d) {
    QPoly h(p.n_vars + 1);
    for (const auto& [m, c] : p.terms) {
        unsigned long td = total_degree(m);
        if (td > d)
            throw dimension_error("degree exceeds homogenization degree");
        Monomial hm(p.n_vars + 1);
        hm[0] = static_cast<std::uint32_t>(d - td);
        for (std::size_t i = 0; i < p.n_vars; ++i)
            hm[i + 1] = m[i];
        h.terms.emplace(std::move(hm), c);
    }
    return h;
}

inline HomogMap homogenize(const PolyMap& f) {
    long deg = f.degree();
    if (deg < 1)
        throw dimension_error("cannot homogenize a constant map");
    HomogMap H;
    H.n = f.n;
    H.d = static_cast<unsigned long>(deg);
    H.components.reserve(f.n + 1);
    QPoly x0d(f.n + 1);
    Monomial m0(f.n + 1, 0);
    m0[0] = static_cast<std::uint32_t>(H.d);
    x0d.terms.emplace(std::move(m0), Rat(1));
    H.components.push_back(std::move(x0d));
    for (const auto& c : f.components)
        H.components.push_back(homogenize_poly(c, H.d));
    return H;
}

/// Substitute X0 = 1; recovers the affine map exactly.
inline PolyMap dehomogenize(const HomogMap& H) {
    std::vector<QPoly> comps;
    comps.reserve(H.n);
    for (std::size_t i = 1; i <= H.n; ++i) {
        QPoly a(H.n);
        for (const auto& [m, c] : H.components[i].terms) {
            Monomial am(m.begin() + 1, m.end());
            a.add_term(am, c);
        }
        comps.push_back(std::move(a));
    }
    return PolyMap(H.n, std::move(comps));
}

/// Composition of projective extensions: plug [Y0^{d_inner}, inner...]
/// into each outer component. Components come out homogeneous of degree
/// d_outer * d_inner.
inline std::vector<QPoly> compose_homog(const HomogMap& outer, const HomogMap& inner) {
    if (outer.n != inner.n)
        throw dimension_error("composition dimension mismatch");
    const QPoly zero(outer.n + 1), one = QPoly::constant(outer.n + 1, Rat(1));
    std::vector<QPoly> out;
    out.reserve(outer.n + 1);
    for (const auto& c : outer.components)
        out.push_back(c.evaluate<QPoly>(
            inner.components,
            [&](const Rat& q) { return QPoly::constant(outer.n + 1, q); }, zero, one));
    return out;
}

/// Smallest X0-exponent across the terms of p; the X0-power that divides p.
inline unsigned long x0_valuation(const QPoly& p) {
    if (p.is_zero())
        return 0;
    unsigned long v = ~0ul;
    for (const auto& [m, c] : p.terms)
        v = std::min(v, static_cast<unsigned long>(m[0]));
    return v;
}

inline QPoly shift_x0(const QPoly& p, unsigned long l) {
    QPoly r(p.n_vars);
    for (const auto& [m, c] : p.terms) {
        Monomial sm = m;
        if (sm[0] < l)
            throw dimension_error("X0 power does not divide");
        sm[0] -= static_cast<std::uint32_t>(l);
        r.terms.emplace(std::move(sm), c);
    }
    return r;
}

}  // namespace dynpair
