#pragma once

#include <dynpair/certificate.hpp>
#include <dynpair/interval.hpp>
#include <dynpair/padic.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace dynpair {

enum class Member { first, second };

struct GreenOptions {
    double tol = 1e-10;
    unsigned iter_cap_arch = 1000;
    unsigned iter_cap_finite = 100;
    mpfr_prec_t prec = 0;         // 0 selects config::default_interval_prec
    unsigned min_iterations = 0;  // keep iterating at least this far
};

/// Exact value multiple * log(base); base 1 encodes an exact zero.
struct ExactLog {
    Rat multiple;
    Int base;

    double to_double() const {
        if (base <= 1 || multiple == 0)
            return 0.0;
        return multiple.get_d() * std::log(base.get_d());
    }
};

struct GreenValue {
    double value = 0;
    double error_bound = 0;
    bool heuristic = false;
    unsigned iterations = 0;
    Place place;
    std::string region;
    std::optional<ExactLog> exact;  // engaged when the value is exact (error 0)
};

/// Escape-region data at one place, shared by both members of the pair.
struct RegionParams {
    Rat epsilon, delta;
    unsigned long d_f = 0, d_g = 0;
    long d_J = 0;
    unsigned long l = 0;
};

namespace detail {

inline std::size_t rat_bits(const Rat& q) {
    return mpz_sizeinbase(mpq_numref(q.get_mpq_t()), 2) +
           mpz_sizeinbase(mpq_denref(q.get_mpq_t()), 2);
}

inline std::size_t point_bits(const std::vector<Rat>& X) {
    std::size_t b = 0;
    for (const auto& x : X)
        b = std::max(b, rat_bits(x));
    return b;
}

inline Rat coeff_abs_sum(const QPoly& p) {
    Rat s = 0;
    for (const auto& [m, c] : p.terms)
        s += abs(c);
    return s;
}

}  // namespace detail

/// Exact v-adic sup norm of a rational point, as a rational.
inline Rat sup_norm_place(const std::vector<Rat>& X, const Place& pl) {
    Rat m = 0;
    for (const auto& x : X) {
        Rat nm = detail::place_norm(x, pl);
        if (nm > m)
            m = nm;
    }
    return m;
}

/// max(0, -min_i v_p(x_i)): the exponent with log+ ||X||_p = e * log p.
inline long log_plus_exponent(const std::vector<Rat>& X, const Int& p) {
    long mn = 0;
    for (const auto& x : X)
        if (auto v = valuation(x, p))
            mn = std::min(mn, *v);
    return -mn;
}

/// log+ of the v-adic sup norm. Exact valuation arithmetic at finite places;
/// correctly rounded double log of an exact rational at the archimedean one.
inline double log_plus_norm(const std::vector<Rat>& X, const Place& pl) {
    if (!pl.arch) {
        long e = log_plus_exponent(X, pl.prime);
        return e <= 0 ? 0.0 : static_cast<double>(e) * std::log(pl.prime.get_d());
    }
    Rat m = sup_norm_place(X, pl);
    return m <= 1 ? 0.0 : std::log(m.get_d());
}

inline RegionParams region_params(const CertificateConstants& cc, const CertifiedPair& cp) {
    return RegionParams{cc.epsilon, cc.delta, cp.F.d, cp.G.d, cp.div.d_J, cp.div.l};
}

struct RegionFlags {
    bool in_f = false, in_g = false;
};

namespace detail {

inline bool growth_disjunct(const PolyMap& h, unsigned long d, const std::vector<Rat>& X,
                            const Rat& norm_X, const Rat& delta, const Place& pl) {
    Rat lhs = sup_norm_place(evaluate_exact(h, X), pl);
    if (lhs < 1)
        lhs = 1;
    Rat grow = pow_rat(norm_X, d);
    if (grow < 1)
        grow = 1;
    return lhs > delta * grow;
}

}  // namespace detail

/// Exact membership in the escape regions V_f, V_g at the given place:
/// ||X|| < 1/epsilon, or the map's own growth inequality.
inline RegionFlags region_membership(const std::vector<Rat>& X, const PolyMap& f,
                                     const PolyMap& g, const RegionParams& rp,
                                     const Place& pl) {
    Rat nX = sup_norm_place(X, pl);
    bool small = nX * rp.epsilon < 1;
    RegionFlags fl;
    fl.in_f = small || detail::growth_disjunct(f, rp.d_f, X, nX, rp.delta, pl);
    fl.in_g = small || detail::growth_disjunct(g, rp.d_g, X, nX, rp.delta, pl);
    return fl;
}

/// Archimedean covering and invariance depend on coefficient sums, not just
/// the max norm C0; verify them for the concrete certificate and inflate C0
/// until they hold (each doubling shrinks epsilon and delta).
inline CertificateConstants validated_arch_constants(const CertifiedPair& cp) {
    CertificateConstants cc =
        constants_at_place(cp.cert, cp.div, cp.F, cp.G, Place::archimedean());
    const std::size_t n = cp.f.n;

    Rat S_gf = 0;
    for (const auto& Ji : cp.div.J)
        S_gf = std::max(S_gf, detail::coeff_abs_sum(Ji));

    unsigned long d = std::min(cp.F.d, cp.G.d);
    long gap = static_cast<long>(d) - cp.div.d_J;

    for (unsigned tries = 0; tries < 64; ++tries) {
        Rat cover = 0;
        for (std::size_t j = 0; j < n; ++j) {
            Rat sp = 0, sq = 0;
            for (std::size_t i = 0; i < n; ++i) {
                sp += detail::coeff_abs_sum(cp.cert.P[i][j]);
                sq += detail::coeff_abs_sum(cp.cert.Q[i][j]);
            }
            Rat row = cc.delta * (sp + sq) + cc.epsilon * detail::coeff_abs_sum(cp.cert.R[j]);
            if (row > cover)
                cover = row;
        }
        bool ok = cover < 1 &&
                  S_gf * pow_rat(cc.epsilon, static_cast<unsigned long>(gap)) < cc.delta &&
                  S_gf * pow_rat(cc.epsilon, cp.div.l) < cc.delta * cc.delta;
        if (ok)
            return cc;
        cc.C0 = cc.C0 * 2;
        cc.inflated = true;
        cc.epsilon = 1 / pow_rat(cc.C0, 4);
        cc.delta = 1 / pow_rat(cc.C0, 2);
    }
    throw std::logic_error("archimedean region constants failed to validate");
}

/// Constants of the two-sided growth inequality and the resulting uniform
/// step bound M_const for one member's Green iteration.
struct StoppingConstants {
    Rat C1, C2, C3;
    unsigned long r = 0;  // D-ratio bound d_f * d_g
    double M_const = 0;
};

inline StoppingConstants stopping_constants(const CertifiedPair& cp, Member mem,
                                            const CertificateConstants& cc) {
    const PolyMap& h = (mem == Member::first) ? cp.f : cp.g;
    unsigned long d = (mem == Member::first) ? cp.F.d : cp.G.d;

    StoppingConstants sc;
    sc.C1 = std::min(cc.delta, pow_rat(cc.epsilon, d));
    if (cc.place.arch) {
        Rat max_coeff = 0;
        std::size_t max_terms = 1;
        for (const auto& comp : h.components) {
            max_terms = std::max(max_terms, comp.terms.size());
            for (const auto& [m, c] : comp.terms) {
                Rat a = abs(c);
                if (a > max_coeff)
                    max_coeff = a;
            }
        }
        if (max_coeff == 0)
            max_coeff = 1;
        sc.C2 = Rat(static_cast<unsigned long>(max_terms)) * max_coeff;
    } else {
        sc.C2 = cc.C0;
    }
    sc.C3 = 1 / cc.epsilon;
    sc.r = cp.F.d * cp.G.d;

    double dd = static_cast<double>(d);
    double gap = dd - dd / static_cast<double>(sc.r);
    double m1 = std::fabs(std::log(sc.C1.get_d())) + gap * std::log(sc.C3.get_d());
    double m2 = std::fabs(std::log(sc.C2.get_d()));
    double m3 = -std::log(cc.delta.get_d());
    sc.M_const = std::max({m1, m2, m3}) * (1.0 + 1e-12);
    return sc;
}

namespace detail {

inline std::optional<GreenValue> exact_cycle_probe(const PolyMap& h, const std::vector<Rat>& X,
                                                   const Place& pl) {
    std::vector<std::vector<Rat>> seen{X};
    std::vector<Rat> Y = X;
    for (unsigned m = 1; m <= 64; ++m) {
        Y = evaluate_exact(h, Y);
        if (std::find(seen.begin(), seen.end(), Y) != seen.end()) {
            GreenValue gv;
            gv.place = pl;
            gv.iterations = m;
            gv.region = "exact cycle";
            gv.exact = ExactLog{Rat(0), Int(1)};
            return gv;
        }
        if (point_bits(Y) > 4096)
            return std::nullopt;
        seen.push_back(Y);
    }
    return std::nullopt;
}

inline GreenValue exact_log_value(const Place& pl, unsigned iterations, const char* region,
                                  ExactLog ex) {
    GreenValue gv;
    gv.place = pl;
    gv.iterations = iterations;
    gv.region = region;
    gv.value = ex.to_double();
    gv.exact = std::move(ex);
    return gv;
}

inline GreenValue green_arch(const CertifiedPair& cp, Member mem, const std::vector<Rat>& X,
                             const GreenOptions& opts) {
    const PolyMap& h = (mem == Member::first) ? cp.f : cp.g;
    const unsigned long d = (mem == Member::first) ? cp.F.d : cp.G.d;
    const char* vname = (mem == Member::first) ? "V_f" : "V_g";
    const Place pl = Place::archimedean();

    if (auto cyc = exact_cycle_probe(h, X, pl))
        return *cyc;

    CertificateConstants cc = validated_arch_constants(cp);
    StoppingConstants sc = stopping_constants(cp, mem, cc);
    Rat inv_eps_rat = 1 / cc.epsilon;

    auto run = [&](mpfr_prec_t prec) -> std::optional<GreenValue> {
        const std::size_t n = h.n;
        std::vector<IReal> Y;
        Y.reserve(n);
        for (const auto& x : X)
            Y.push_back(IReal::from_rat(x, prec));
        const IReal zero(prec), one = IReal::from_long(1, prec);
        const IReal inv_eps = IReal::from_rat(inv_eps_rat, prec);
        const IReal delta_i = IReal::from_rat(cc.delta, prec);
        auto conv = [&](const Rat& c) { return IReal::from_rat(c, prec); };

        std::optional<unsigned> k_entry;
        double prev_val = 0;
        for (unsigned m = 0;; ++m) {
            for (const auto& y : Y)
                if (!y.finite())
                    return std::nullopt;
            IReal N = sup_norm(Y);

            std::vector<IReal> Z;
            Z.reserve(n);
            for (const auto& comp : h.components)
                Z.push_back(comp.evaluate<IReal>(Y, conv, zero, one));

            if (!k_entry) {
                bool in_v = N.certainly_less(inv_eps);
                if (!in_v) {
                    IReal lhs = IReal::max(sup_norm(Z), one);
                    IReal rhs = delta_i * IReal::max(N.pow(d), one);
                    in_v = lhs.certainly_greater(rhs);
                }
                if (in_v)
                    k_entry = m;
            }

            Rat dm = pow_rat(Rat(static_cast<unsigned long>(d)), m);
            IReal val = N.log_plus() * IReal::from_rat(1 / dm, prec);
            if (!val.finite())
                return std::nullopt;
            double val_mid = val.mid();

            if (k_entry && m >= opts.min_iterations) {
                double tail = sc.M_const / (dm.get_d() * static_cast<double>(d - 1));
                if (tail < opts.tol) {
                    GreenValue gv;
                    gv.place = pl;
                    gv.iterations = m;
                    gv.value = val_mid;
                    gv.error_bound = tail + val.width() / 2 + 1e-300;
                    gv.region = *k_entry == 0 ? std::string("in ") + vname
                                              : std::string("entered ") + vname + " at step " +
                                                    std::to_string(*k_entry);
                    return gv;
                }
            }
            if (m >= opts.iter_cap_arch) {
                GreenValue gv;
                gv.place = pl;
                gv.iterations = m;
                gv.value = val_mid;
                gv.error_bound = std::fabs(val_mid - prev_val);
                gv.heuristic = true;
                gv.region = "no region entry within iteration cap";
                return gv;
            }
            prev_val = val_mid;
            Y = std::move(Z);
        }
    };

    mpfr_prec_t prec = opts.prec ? opts.prec : config::default_interval_prec;
    if (auto r = run(prec))
        return *r;
    if (auto r = run(2 * prec))
        return *r;
    throw std::runtime_error("archimedean Green iteration overflowed at doubled precision");
}

/// At a good prime the orbit either becomes integral (value 0) or reaches a
/// full-degree step ||h(Y)|| = ||Y||^d > 1, after which every step is full
/// and the limit is d^{-m} log ||Y_m|| exactly.
inline GreenValue green_good_prime(const CertifiedPair& cp, Member mem,
                                   const std::vector<Rat>& X, const Place& pl,
                                   const GreenOptions& opts) {
    const PolyMap& h = (mem == Member::first) ? cp.f : cp.g;
    const unsigned long d = (mem == Member::first) ? cp.F.d : cp.G.d;
    const Int& p = pl.prime;

    long e = log_plus_exponent(X, p);
    if (e <= 0)
        return exact_log_value(pl, 0, "good-reduction shortcut", {Rat(0), p});

    std::vector<std::vector<Rat>> seen{X};
    std::vector<Rat> Y = X;
    long e_curr = e;
    for (unsigned m = 0; m < opts.iter_cap_finite; ++m) {
        std::vector<Rat> Z = evaluate_exact(h, Y);
        long e_next = log_plus_exponent(Z, p);
        if (e_next <= 0)
            return exact_log_value(pl, m + 1, "good-reduction shortcut", {Rat(0), p});
        if (e_next == static_cast<long>(d) * e_curr) {
            Rat mult = Rat(e_curr) / pow_rat(Rat(static_cast<unsigned long>(d)), m);
            return exact_log_value(pl, m, "good-reduction shortcut", {mult, p});
        }
        if (std::find(seen.begin(), seen.end(), Z) != seen.end())
            return exact_log_value(pl, m + 1, "exact cycle", {Rat(0), p});
        if (point_bits(Z) > (1u << 16))
            break;
        seen.push_back(Z);
        Y = std::move(Z);
        e_curr = e_next;
    }

    GreenValue gv;
    gv.place = pl;
    gv.iterations = static_cast<unsigned>(seen.size() - 1);
    gv.value = static_cast<double>(e_curr) /
               std::pow(static_cast<double>(d), static_cast<double>(gv.iterations)) *
               std::log(p.get_d());
    gv.error_bound = 0;
    gv.heuristic = true;
    gv.region = "no full-degree step within iteration cap";
    return gv;
}

inline GreenValue green_bad_prime(const CertifiedPair& cp, Member mem,
                                  const std::vector<Rat>& X, const Place& pl,
                                  const GreenOptions& opts) {
    const PolyMap& h = (mem == Member::first) ? cp.f : cp.g;
    const unsigned long d = (mem == Member::first) ? cp.F.d : cp.G.d;
    const char* vname = (mem == Member::first) ? "V_f" : "V_g";
    const Int& p = pl.prime;

    if (auto cyc = exact_cycle_probe(h, X, pl))
        return *cyc;

    CertificateConstants cc = constants_at_place(cp.cert, cp.div, cp.F, cp.G, pl);
    StoppingConstants sc = stopping_constants(cp, mem, cc);
    Rat inv_eps = 1 / cc.epsilon;

    auto norm_of = [&](const std::vector<PadicBall>& B) -> std::optional<Rat> {
        bool all_zero = true;
        for (const auto& b : B)
            if (!b.is_exact_zero())
                all_zero = false;
        if (all_zero)
            return Rat(0);
        auto mv = min_valuation(B);
        if (!mv)
            return std::nullopt;
        return prime_power(p, -*mv);
    };

    for (long cap = 64; cap <= 4096; cap *= 2) {
        const std::size_t n = h.n;
        std::vector<PadicBall> Y;
        Y.reserve(n);
        for (const auto& x : X)
            Y.push_back(PadicBall::from_rat(x, p, cap));
        const PadicBall zero = PadicBall::exact_zero(p, cap);
        const PadicBall one = PadicBall::from_rat(Rat(1), p, cap);
        auto conv = [&](const Rat& c) { return PadicBall::from_rat(c, p, cap); };

        std::optional<unsigned> k_entry;
        double prev_val = 0;
        bool stalled = false;
        for (unsigned m = 0; !stalled; ++m) {
            auto N = norm_of(Y);
            if (!N) {
                stalled = true;
                break;
            }

            std::vector<PadicBall> Z;
            Z.reserve(n);
            for (const auto& comp : h.components)
                Z.push_back(comp.evaluate<PadicBall>(Y, conv, zero, one));

            if (!k_entry) {
                bool in_v = *N * cc.epsilon < 1;
                if (!in_v) {
                    auto NZ = norm_of(Z);
                    if (!NZ) {
                        stalled = true;
                        break;
                    }
                    Rat lhs = std::max(*NZ, Rat(1));
                    Rat grow = pow_rat(*N, d);
                    if (grow < 1)
                        grow = 1;
                    in_v = lhs > cc.delta * grow;
                }
                if (in_v)
                    k_entry = m;
            }

            Rat dm = pow_rat(Rat(static_cast<unsigned long>(d)), m);
            Rat logp_mult = (*N > 1) ? Rat(Rat(std::max(0l, -(*min_valuation(Y)))) / dm) : Rat(0);
            double val_m = logp_mult.get_d() * std::log(p.get_d());

            if (k_entry && m >= opts.min_iterations) {
                double tail = sc.M_const / (dm.get_d() * static_cast<double>(d - 1));
                if (tail < opts.tol) {
                    GreenValue gv;
                    gv.place = pl;
                    gv.iterations = m;
                    gv.value = val_m;
                    gv.error_bound = tail;
                    gv.region = *k_entry == 0 ? std::string("in ") + vname
                                              : std::string("entered ") + vname + " at step " +
                                                    std::to_string(*k_entry);
                    return gv;
                }
            }
            if (m >= opts.iter_cap_finite) {
                GreenValue gv;
                gv.place = pl;
                gv.iterations = m;
                gv.value = val_m;
                gv.error_bound = std::fabs(val_m - prev_val);
                gv.heuristic = true;
                gv.region = "no region entry within iteration cap";
                return gv;
            }
            prev_val = val_m;
            Y = std::move(Z);
        }
    }
    GreenValue gv;
    gv.place = pl;
    gv.heuristic = true;
    gv.region = "p-adic precision exhausted";
    return gv;
}

}  // namespace detail

/// Local Green value of one member of a certified pair at a rational point.
inline GreenValue green_eval(const CertifiedPair& cp, Member mem, const std::vector<Rat>& X,
                             const Place& pl, const GreenOptions& opts = {}) {
    if (X.size() != cp.f.n)
        throw dimension_error("point dimension mismatch");
    if (pl.arch)
        return detail::green_arch(cp, mem, X, opts);
    if (!cp.bad.contains(pl.prime))
        return detail::green_good_prime(cp, mem, X, pl, opts);
    return detail::green_bad_prime(cp, mem, X, pl, opts);
}

/// Pair potential max(G_f, G_g) with the error of the attaining member.
inline GreenValue green_pair(const CertifiedPair& cp, const std::vector<Rat>& X,
                             const Place& pl, const GreenOptions& opts = {}) {
    GreenValue a = green_eval(cp, Member::first, X, pl, opts);
    GreenValue b = green_eval(cp, Member::second, X, pl, opts);

    const GreenValue* win = (a.value >= b.value) ? &a : &b;
    const GreenValue* lose = (win == &a) ? &b : &a;
    GreenValue out = *win;
    out.error_bound = std::max(a.error_bound, b.error_bound);
    out.heuristic = a.heuristic || b.heuristic;
    out.iterations = std::max(a.iterations, b.iterations);

    if (a.exact && b.exact) {
        // same base (or an exact zero), so the max is exact too
        const ExactLog& ea = *a.exact;
        const ExactLog& eb = *b.exact;
        bool a_zero = ea.base <= 1 || ea.multiple == 0;
        bool b_zero = eb.base <= 1 || eb.multiple == 0;
        if (a_zero || b_zero || ea.base == eb.base) {
            const ExactLog& emax = b_zero                      ? ea
                                   : a_zero                    ? eb
                                   : (ea.multiple >= eb.multiple) ? ea
                                                                  : eb;
            out.exact = emax;
            out.value = emax.to_double();
            out.error_bound = 0;
        }
    } else if (win->exact && !lose->exact &&
               lose->value + lose->error_bound <= win->value) {
        out.exact = win->exact;
        out.error_bound = 0;
    } else {
        out.exact.reset();
    }
    return out;
}

}  // namespace dynpair
