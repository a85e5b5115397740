#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynpair {

/// Exact rational scalar. mpq_class keeps values canonical (reduced,
/// positive denominator), which bad-prime extraction relies on.
using Rat = mpq_class;
using Int = mpz_class;

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rat parse_rational(const std::string& text) {
    try {
        Rat q(text, 10);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw parse_error("bad rational literal: " + text);
    }
}

inline std::string to_string(const Rat& q) { return q.get_str(); }

inline Rat pow_rat(const Rat& base, unsigned long e) {
    Rat r;
    mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(base.get_mpq_t()), e);
    mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(base.get_mpq_t()), e);
    return r;
}

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

/// p-adic valuation of a nonzero integer.
inline long valuation(Int n, const Int& p) {
    if (n == 0)
        throw std::invalid_argument("valuation of zero");
    long v = 0;
    Int q, r;
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
        if (r != 0)
            return v;
        n = q;
        ++v;
    }
}

/// p-adic valuation of a rational; nullopt encodes v(0) = +infinity.
inline std::optional<long> valuation(const Rat& q, const Int& p) {
    if (q == 0)
        return std::nullopt;
    return valuation(Int(q.get_num()), p) - valuation(Int(q.get_den()), p);
}

/// p^k as an exact rational, k possibly negative.
inline Rat prime_power(const Int& p, long k) {
    if (k >= 0)
        return Rat(pow_int(p, static_cast<unsigned long>(k)));
    return Rat(1) / Rat(pow_int(p, static_cast<unsigned long>(-k)));
}

/// Trial division + Miller-Rabin + Pollard rho; enough for coefficient
/// denominators and certificate contents.
inline void factor_into(Int n, std::vector<Int>& primes);

namespace detail {

inline Int pollard_rho(const Int& n) {
    // Brent's variant with a deterministic parameter sweep.
    if (n % 2 == 0)
        return 2;
    for (unsigned long c = 1;; ++c) {
        Int x = 2, y = 2, d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            Int diff = x > y ? x - y : y - x;
            if (diff == 0)
                break;
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != 1 && d != n)
            return d;
    }
}

}  // namespace detail

inline void factor_into(Int n, std::vector<Int>& primes) {
    if (n < 0)
        n = -n;
    if (n <= 1)
        return;
    for (unsigned long d : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul,
                            29ul, 31ul, 37ul, 41ul, 43ul, 47ul}) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
            primes.emplace_back(d);
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), d);
        }
    }
    if (n == 1)
        return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
        primes.push_back(n);
        return;
    }
    Int d = detail::pollard_rho(n);
    factor_into(d, primes);
    factor_into(n / d, primes);
}

inline std::vector<Int> prime_factors(const Int& n) {
    std::vector<Int> out;
    factor_into(n, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace dynpair
