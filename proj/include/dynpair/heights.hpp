#pragma once

#include <dynpair/green.hpp>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <optional>
#include <vector>

namespace dynpair {

/// Naive Weil height of a rational affine point, carried as the exact
/// integer whose log it is.
struct NaiveHeight {
    Int coordinate_max;        // max |x_i| over coprime projective coordinates
    std::vector<Int> coords;   // [x_0 : ... : x_n], gcd 1, x_0 > 0
    double value = 0;          // log coordinate_max
};

inline NaiveHeight naive_height(const std::vector<Rat>& X) {
    Int lcm = 1;
    for (const auto& x : X) {
        Int d(x.get_den());
        Int g;
        mpz_gcd(g.get_mpz_t(), lcm.get_mpz_t(), d.get_mpz_t());
        lcm = lcm / g * d;
    }
    NaiveHeight h;
    h.coords.reserve(X.size() + 1);
    h.coords.push_back(lcm);
    for (const auto& x : X) {
        Rat scaled = x * lcm;
        h.coords.push_back(Int(scaled.get_num()));
    }
    Int g = 0;
    for (const auto& c : h.coords)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    for (auto& c : h.coords)
        c /= g;
    h.coordinate_max = 1;
    for (const auto& c : h.coords) {
        Int a = abs(c);
        if (a > h.coordinate_max)
            h.coordinate_max = a;
    }
    h.value = std::log(h.coordinate_max.get_d());
    return h;
}

struct PlaceContribution {
    Place place;
    GreenValue green;
};

struct HeightValue {
    double value = 0;
    double error_bound = 0;
    bool heuristic = false;
    bool exact_zero = false;  // set when an exact orbit revisit proves the value is 0
    std::vector<PlaceContribution> places;
};

namespace detail {

inline bool orbit_revisits(const PolyMap& h, const std::vector<Rat>& X) {
    std::vector<std::vector<Rat>> seen{X};
    std::vector<Rat> Y = X;
    for (unsigned m = 0; m < 64; ++m) {
        Y = evaluate_exact(h, Y);
        if (std::find(seen.begin(), seen.end(), Y) != seen.end())
            return true;
        if (point_bits(Y) > 4096)
            return false;
        seen.push_back(Y);
    }
    return false;
}

/// Places that can contribute: archimedean, bad primes, and primes dividing
/// a coordinate denominator. Elsewhere the point is integral and the pair
/// has good reduction, so every local value is exactly 0.
inline std::vector<Place> contributing_places(const CertifiedPair& cp,
                                              const std::vector<Rat>& X) {
    std::set<Int> ps;
    for (const auto& p : cp.bad.primes())
        ps.insert(p);
    for (const auto& x : X)
        for (const auto& p : prime_factors(Int(x.get_den())))
            ps.insert(p);
    std::vector<Place> out{Place::archimedean()};
    for (const auto& p : ps)
        out.push_back(Place::finite(p));
    return out;
}

inline double summation_cushion(const std::vector<PlaceContribution>& terms) {
    double mag = 0;
    for (const auto& t : terms)
        mag += std::fabs(t.green.value);
    return 4 * DBL_EPSILON * mag * static_cast<double>(terms.size() + 1);
}

template <class Eval>
HeightValue sum_local(const CertifiedPair& cp, const std::vector<Rat>& X, double tol,
                      Eval local) {
    std::vector<Place> places = detail::contributing_places(cp, X);
    std::size_t n_fin = places.size() - 1;
    double tol_arch = tol / 2;
    double tol_fin = n_fin ? tol / 2 / static_cast<double>(n_fin) : tol / 2;

    HeightValue hv;
    for (const auto& pl : places) {
        GreenOptions go;
        go.tol = pl.arch ? tol_arch : tol_fin;
        GreenValue gv = local(pl, go);
        hv.value += gv.value;
        hv.error_bound += gv.error_bound;
        hv.heuristic = hv.heuristic || gv.heuristic;
        hv.places.push_back({pl, std::move(gv)});
    }
    hv.error_bound += detail::summation_cushion(hv.places);
    return hv;
}

}  // namespace detail

/// Canonical height of the pair: sum of local pair potentials max(G_f, G_g)
/// over the finitely many places that can be nonzero.
inline HeightValue canonical_height_pair(const CertifiedPair& cp, const std::vector<Rat>& X,
                                         double tol = 1e-10) {
    if (X.size() != cp.f.n)
        throw dimension_error("point dimension mismatch");
    if (detail::orbit_revisits(cp.f, X) && detail::orbit_revisits(cp.g, X)) {
        HeightValue hv;
        hv.exact_zero = true;
        return hv;
    }
    return detail::sum_local(cp, X, tol, [&](const Place& pl, const GreenOptions& go) {
        return green_pair(cp, X, pl, go);
    });
}

/// One-sided height of a single member: sum of G_{f,v} over places. Satisfies
/// value(f(X)) = d_f * value(X) up to the accumulated error bounds.
inline HeightValue canonical_height_forward(const CertifiedPair& cp, Member mem,
                                            const std::vector<Rat>& X, double tol = 1e-10) {
    if (X.size() != cp.f.n)
        throw dimension_error("point dimension mismatch");
    const PolyMap& h = (mem == Member::first) ? cp.f : cp.g;
    if (detail::orbit_revisits(h, X)) {
        HeightValue hv;
        hv.exact_zero = true;
        return hv;
    }
    return detail::sum_local(cp, X, tol, [&](const Place& pl, const GreenOptions& go) {
        return green_eval(cp, mem, X, pl, go);
    });
}

}  // namespace dynpair
