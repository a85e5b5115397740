#pragma once

#include <dynpair/fp.hpp>
#include <dynpair/homogenize.hpp>
#include <dynpair/linalg.hpp>
#include <dynpair/place.hpp>
#include <dynpair/poly_map.hpp>

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynpair {

namespace config {
/// Cap on rows*columns of the certificate linear system before giving up.
inline std::size_t cert_matrix_entry_cap = 4'000'000;
}  // namespace config

/// Joint Nullstellensatz certificate for a homogenized pair (F, G):
/// for each j = 1..n,
///     sum_i P[i][j]*F_i + sum_i Q[i][j]*G_i + X0*R[j] = X_j^M
/// holds exactly, where F_i, G_i are the nontrivial components (i = 1..n)
/// and all polynomials live in the n+1 homogeneous variables.
struct JointCertificate {
    unsigned long M = 0;
    std::vector<std::vector<QPoly>> P;  // P[i][j], degree M - d_f
    std::vector<std::vector<QPoly>> Q;  // Q[i][j], degree M - d_g
    std::vector<QPoly> R;               // R[j],    degree M - 1
};

/// Common X0 factor of the homogeneous compositions:
///     F_i(G(X)) = G_i(F(X)) = X0^l * J_i(X),  deg J_i = d_f*d_g - l.
struct CompositionDivisor {
    unsigned long l = 0;
    long d_J = 0;  // affine degree of f∘g
    std::vector<QPoly> J;
};

struct composition_error : std::runtime_error {
    enum Kind { not_commuting, not_divisible } kind;
    composition_error(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

struct resource_error : std::runtime_error {
    unsigned long m_reached;
    resource_error(unsigned long m, const std::string& what)
        : std::runtime_error(what), m_reached(m) {}
};

/// Place-dependent constants attached to a certificate. All values are exact
/// rationals: epsilon = C0^-4 and delta = C0^-2, after inflating C0 to 2
/// whenever the raw coefficient bound is 1 (otherwise the strict inequalities
/// below degenerate).
struct CertificateConstants {
    Place place;
    Rat C0;
    Rat epsilon;
    Rat delta;
    bool inflated = false;
};

enum class BadReason {
    non_integral_coefficient,
    degree_drop,
    certificate_content,
};

inline const char* to_string(BadReason r) {
    switch (r) {
        case BadReason::non_integral_coefficient: return "non-integral coefficient";
        case BadReason::degree_drop: return "degree drop under reduction";
        case BadReason::certificate_content: return "certificate content not a unit";
    }
    return "?";
}

/// Finite set of primes at which good reduction may fail, with the reasons
/// that put each prime in the set.
struct BadPrimeSet {
    std::map<Int, std::set<BadReason>> entries;

    bool contains(const Int& p) const { return entries.count(p) != 0; }

    std::vector<Int> primes() const {
        std::vector<Int> out;
        out.reserve(entries.size());
        for (const auto& [p, r] : entries)
            out.push_back(p);
        return out;
    }

    void add(const Int& p, BadReason r) { entries[p].insert(r); }
};

namespace detail {

/// All exponent vectors of total degree deg in v variables, in the ascending
/// lexicographic order used by MultiPoly's term map. The order fixes the
/// column layout of the certificate system, which keeps solutions
/// deterministic.
inline void monomials_rec(std::size_t v, unsigned long deg, Monomial& cur,
                          std::vector<Monomial>& out) {
    if (cur.size() + 1 == v) {
        cur.push_back(static_cast<std::uint32_t>(deg));
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (unsigned long a = 0; a <= deg; ++a) {
        cur.push_back(static_cast<std::uint32_t>(a));
        monomials_rec(v, deg - a, cur, out);
        cur.pop_back();
    }
}

inline std::vector<Monomial> monomials_of_degree(std::size_t v, unsigned long deg) {
    std::vector<Monomial> out;
    Monomial cur;
    cur.reserve(v);
    monomials_rec(v, deg, cur, out);
    return out;
}

}  // namespace detail

/// Certificate data at a fixed degree M over an arbitrary coefficient field.
template <class K>
struct CertSolution {
    std::vector<std::vector<MultiPoly<K>>> P, Q;
    std::vector<MultiPoly<K>> R;
};

/// Solve the joint certificate system at one degree M over field K. Fc and Gc
/// hold the nontrivial homogeneous components F_1..F_n, G_1..G_n in n+1
/// variables. Returns nullopt when some X_j^M is not representable.
template <class K>
std::optional<CertSolution<K>> solve_certificate_at(const std::vector<MultiPoly<K>>& Fc,
                                                    const std::vector<MultiPoly<K>>& Gc,
                                                    unsigned long d_f, unsigned long d_g,
                                                    unsigned long M) {
    const std::size_t n = Fc.size();
    const std::size_t v = n + 1;
    if (M < d_f || M < d_g)
        return std::nullopt;

    auto p_mons = detail::monomials_of_degree(v, M - d_f);
    auto q_mons = detail::monomials_of_degree(v, M - d_g);
    auto r_mons = detail::monomials_of_degree(v, M - 1);
    auto rows_mons = detail::monomials_of_degree(v, M);

    const std::size_t cols = n * p_mons.size() + n * q_mons.size() + r_mons.size();
    const std::size_t rows = rows_mons.size();
    if (rows * (cols + n) > config::cert_matrix_entry_cap)
        throw resource_error(M, "certificate linear system exceeds the size cap");

    std::map<Monomial, std::size_t> row_of;
    for (std::size_t r = 0; r < rows; ++r)
        row_of.emplace(rows_mons[r], r);

    const K zero{};
    std::vector<std::vector<K>> mat(rows, std::vector<K>(cols + n, zero));

    auto fill_block = [&](const std::vector<Monomial>& mons, const MultiPoly<K>& base,
                          std::size_t col0) {
        for (std::size_t c = 0; c < mons.size(); ++c)
            for (const auto& [bm, bc] : base.terms) {
                Monomial prod(v);
                for (std::size_t t = 0; t < v; ++t)
                    prod[t] = mons[c][t] + bm[t];
                mat[row_of.at(prod)][col0 + c] = mat[row_of.at(prod)][col0 + c] + bc;
            }
    };

    std::size_t col = 0;
    for (std::size_t i = 0; i < n; ++i, col += p_mons.size())
        fill_block(p_mons, Fc[i], col);
    for (std::size_t i = 0; i < n; ++i, col += q_mons.size())
        fill_block(q_mons, Gc[i], col);
    // X0 * R_j contributes monomial + e0
    for (std::size_t c = 0; c < r_mons.size(); ++c) {
        Monomial prod = r_mons[c];
        prod[0] += 1;
        mat[row_of.at(prod)][col + c] = mat[row_of.at(prod)][col + c] + K(1);
    }

    for (std::size_t j = 0; j < n; ++j) {
        Monomial xjM(v, 0);
        xjM[j + 1] = static_cast<std::uint32_t>(M);
        mat[row_of.at(xjM)][cols + j] = K(1);
    }

    auto re = reduce_rows(std::move(mat), cols);
    auto sols = particular_solutions(re, n);
    for (const auto& s : sols)
        if (!s)
            return std::nullopt;

    CertSolution<K> out;
    out.P.assign(n, std::vector<MultiPoly<K>>(n, MultiPoly<K>(v)));
    out.Q.assign(n, std::vector<MultiPoly<K>>(n, MultiPoly<K>(v)));
    out.R.assign(n, MultiPoly<K>(v));
    for (std::size_t j = 0; j < n; ++j) {
        const auto& x = *sols[j];
        std::size_t c = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < p_mons.size(); ++k, ++c)
                out.P[i][j].add_term(p_mons[k], x[c]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < q_mons.size(); ++k, ++c)
                out.Q[i][j].add_term(q_mons[k], x[c]);
        for (std::size_t k = 0; k < r_mons.size(); ++k, ++c)
            out.R[j].add_term(r_mons[k], x[c]);
    }
    return out;
}

namespace detail {

inline std::vector<MultiPoly<FpScan>> reduce_components(const std::vector<QPoly>& comps,
                                                        std::size_t lo) {
    std::vector<MultiPoly<FpScan>> out;
    for (std::size_t i = lo; i < comps.size(); ++i)
        out.push_back(convert_coefficients<FpScan>(comps[i], &FpScan::from_rat));
    return out;
}

}  // namespace detail

/// Verify the certificate identity by full expansion, for every j.
inline bool certificate_identity_holds(const HomogMap& F, const HomogMap& G,
                                       const JointCertificate& cert) {
    const std::size_t n = F.n;
    const std::size_t v = n + 1;
    for (std::size_t j = 0; j < n; ++j) {
        QPoly lhs(v);
        for (std::size_t i = 0; i < n; ++i) {
            lhs = lhs + cert.P[i][j] * F.components[i + 1];
            lhs = lhs + cert.Q[i][j] * G.components[i + 1];
        }
        lhs = lhs + QPoly::variable(v, 0) * cert.R[j];
        Monomial xjM(v, 0);
        xjM[j + 1] = static_cast<std::uint32_t>(cert.M);
        QPoly rhs(v);
        rhs.add_term(xjM, Rat(1));
        if (!(lhs == rhs))
            return false;
    }
    return true;
}

/// Search for a joint certificate by ascending degree M, starting at
/// max(d_f, d_g). M_max = 0 selects the default bound d_f*d_g + n. Each
/// candidate degree is screened with a single word-sized prime before the
/// exact rational solve. Returns nullopt when no M in range works; that is a
/// bounded verdict, not a proof that no certificate exists.
inline std::optional<JointCertificate> find_certificate(const HomogMap& F, const HomogMap& G,
                                                        unsigned long M_max = 0) {
    if (F.n != G.n)
        throw dimension_error("certificate search needs maps of equal dimension");
    const std::size_t n = F.n;
    const unsigned long d_f = F.d, d_g = G.d;
    if (M_max == 0)
        M_max = d_f * d_g + static_cast<unsigned long>(n);

    bool scan_ok = true;
    std::vector<MultiPoly<FpScan>> Fp_c, Gp_c;
    try {
        Fp_c = detail::reduce_components(F.components, 1);
        Gp_c = detail::reduce_components(G.components, 1);
    } catch (const std::domain_error&) {
        scan_ok = false;  // a denominator hits the scan prime; skip the filter
    }

    std::vector<QPoly> Fc(F.components.begin() + 1, F.components.end());
    std::vector<QPoly> Gc(G.components.begin() + 1, G.components.end());

    for (unsigned long M = std::max(d_f, d_g); M <= M_max; ++M) {
        if (scan_ok && !solve_certificate_at<FpScan>(Fp_c, Gp_c, d_f, d_g, M))
            continue;
        auto sol = solve_certificate_at<Rat>(Fc, Gc, d_f, d_g, M);
        if (!sol)
            continue;
        JointCertificate cert{M, std::move(sol->P), std::move(sol->Q), std::move(sol->R)};
        if (!certificate_identity_holds(F, G, cert))
            throw std::logic_error("certificate solution failed the expansion check");
        return cert;
    }
    return std::nullopt;
}

/// Extract the common X0 divisor of the compositions. Requires f∘g = g∘f;
/// both homogeneous composition orders are checked to agree exactly.
inline CompositionDivisor extract_composition_divisor(const PolyMap& f, const PolyMap& g) {
    PolyMap fg = compose(f, g);
    PolyMap gf = compose(g, f);
    if (!(fg == gf))
        throw composition_error(composition_error::not_commuting,
                                "maps do not commute: f∘g differs from g∘f");

    HomogMap F = homogenize(f);
    HomogMap G = homogenize(g);
    std::vector<QPoly> comp_fg = compose_homog(F, G);
    std::vector<QPoly> comp_gf = compose_homog(G, F);

    long d_J = std::max<long>(fg.degree(), 0);
    unsigned long prod = F.d * G.d;
    if (static_cast<unsigned long>(d_J) > prod)
        throw composition_error(composition_error::not_divisible,
                                "composition degree exceeds the product of degrees");
    unsigned long l = prod - static_cast<unsigned long>(d_J);

    CompositionDivisor cd;
    cd.l = l;
    cd.d_J = d_J;
    for (std::size_t i = 1; i <= f.n; ++i) {
        if (!(comp_fg[i] == comp_gf[i]))
            throw composition_error(composition_error::not_divisible,
                                    "homogeneous composition orders disagree");
        if (static_cast<unsigned long>(x0_valuation(comp_fg[i])) < l &&
            !comp_fg[i].is_zero())
            throw composition_error(composition_error::not_divisible,
                                    "composite component not divisible by X0^l");
        cd.J.push_back(shift_x0(comp_fg[i], l));
    }
    return cd;
}

namespace detail {

inline Rat place_norm(const Rat& q, const Place& place) {
    if (q == 0)
        return Rat(0);
    if (place.arch)
        return abs(q);
    auto v = valuation(q, place.prime);
    return prime_power(place.prime, -*v);
}

template <class Fn>
void for_each_certificate_coefficient(const JointCertificate& cert,
                                      const CompositionDivisor& cd, const HomogMap& F,
                                      const HomogMap& G, Fn&& fn) {
    auto scan_poly = [&](const QPoly& p) {
        for (const auto& [m, c] : p.terms)
            fn(c);
    };
    for (const auto& c : F.components)
        scan_poly(c);
    for (const auto& c : G.components)
        scan_poly(c);
    for (const auto& row : cert.P)
        for (const auto& p : row)
            scan_poly(p);
    for (const auto& row : cert.Q)
        for (const auto& p : row)
            scan_poly(p);
    for (const auto& p : cert.R)
        scan_poly(p);
    for (const auto& p : cd.J)
        scan_poly(p);
}

}  // namespace detail

/// Compute C0, epsilon, delta at one place and check the inequalities they
/// must satisfy: epsilon < 1/C0, delta < 1/C0, epsilon^(d-d_J)*C0 < delta and
/// epsilon^l*C0 < delta^2 with d = min(d_f, d_g).
inline CertificateConstants constants_at_place(const JointCertificate& cert,
                                               const CompositionDivisor& cd, const HomogMap& F,
                                               const HomogMap& G, const Place& place) {
    CertificateConstants cc;
    cc.place = place;
    cc.C0 = 1;
    detail::for_each_certificate_coefficient(cert, cd, F, G, [&](const Rat& c) {
        Rat nm = detail::place_norm(c, place);
        if (nm > cc.C0)
            cc.C0 = nm;
    });
    if (cc.C0 == 1) {
        cc.C0 = 2;
        cc.inflated = true;
    }
    cc.epsilon = 1 / pow_rat(cc.C0, 4);
    cc.delta = 1 / pow_rat(cc.C0, 2);

    unsigned long d = std::min(F.d, G.d);
    long gap = static_cast<long>(d) - cd.d_J;
    bool ok = cc.epsilon < 1 / cc.C0 && cc.delta < 1 / cc.C0 && gap >= 1 &&
              pow_rat(cc.epsilon, static_cast<unsigned long>(gap)) * cc.C0 < cc.delta &&
              pow_rat(cc.epsilon, cd.l) * cc.C0 < cc.delta * cc.delta;
    if (!ok)
        throw std::logic_error("certificate constants violate the required inequalities");
    return cc;
}

/// Primes at which good reduction may fail:
///  (i)  primes dividing a coefficient denominator of F, G, P, Q, R or J;
///  (ii) primes dividing every coefficient of the top-degree part of some
///       component of f or g, so the degree drops under reduction;
///  (iii) primes dividing the common denominator that clears the certificate
///       identity to r*X_j^M = (integral combination).
inline BadPrimeSet bad_primes(const PolyMap& f, const PolyMap& g, const JointCertificate& cert,
                              const CompositionDivisor& cd) {
    BadPrimeSet bad;
    HomogMap F = homogenize(f);
    HomogMap G = homogenize(g);

    Int cert_clear = 1;
    detail::for_each_certificate_coefficient(cert, cd, F, G, [&](const Rat& c) {
        Int den = c.get_den();
        for (const Int& p : prime_factors(den))
            bad.add(p, BadReason::non_integral_coefficient);
    });

    // (iii): J does not enter the identity, so clear only F, G, P, Q, R.
    auto lcm_dens = [&](const QPoly& p) {
        for (const auto& [m, c] : p.terms) {
            Int den = c.get_den();
            mpz_lcm(cert_clear.get_mpz_t(), cert_clear.get_mpz_t(), den.get_mpz_t());
        }
    };
    for (const auto& c : F.components)
        lcm_dens(c);
    for (const auto& c : G.components)
        lcm_dens(c);
    for (const auto& row : cert.P)
        for (const auto& p : row)
            lcm_dens(p);
    for (const auto& row : cert.Q)
        for (const auto& p : row)
            lcm_dens(p);
    for (const auto& p : cert.R)
        lcm_dens(p);
    for (const Int& p : prime_factors(cert_clear))
        bad.add(p, BadReason::certificate_content);

    // (ii): a prime dividing every top-form coefficient of some component
    // lowers that component's degree mod p.
    auto degree_drop_primes = [&](const PolyMap& h) {
        for (const auto& comp : h.components) {
            long d = comp.degree();
            if (d <= 0)
                continue;
            QPoly top = homogeneous_part(comp, static_cast<unsigned long>(d));
            Int g_num = 0;
            for (const auto& [m, c] : top.terms) {
                Int num = abs(c.get_num());
                mpz_gcd(g_num.get_mpz_t(), g_num.get_mpz_t(), num.get_mpz_t());
            }
            if (g_num <= 1)
                continue;
            for (const Int& p : prime_factors(g_num))
                bad.add(p, BadReason::degree_drop);
        }
    };
    degree_drop_primes(f);
    degree_drop_primes(g);

    return bad;
}

/// A strongly regular pair with everything derived from it: homogenizations,
/// joint certificate, composition divisor and the finite bad-prime set.
struct CertifiedPair {
    PolyMap f, g;
    HomogMap F, G;
    JointCertificate cert;
    CompositionDivisor div;
    BadPrimeSet bad;

    static CertifiedPair build(const PolyMap& f, const PolyMap& g, unsigned long M_max = 0) {
        CertifiedPair cp{f, g, homogenize(f), homogenize(g), {}, {}, {}};
        cp.div = extract_composition_divisor(f, g);
        auto cert = find_certificate(cp.F, cp.G, M_max);
        if (!cert)
            throw std::runtime_error("no joint certificate found within the degree bound");
        cp.cert = std::move(*cert);
        cp.bad = bad_primes(f, g, cp.cert, cp.div);
        return cp;
    }
};

}  // namespace dynpair
