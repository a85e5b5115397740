#pragma once

#include <dynpair/rational.hpp>

#include <optional>
#include <vector>

namespace dynpair {

/// Capped-relative p-adic element: p^val * (unit + O(p^rel)), where unit is a
/// p-adic unit known modulo p^rel. Two degenerate states: exact zero, and
/// "unknown" = only the bound v_p(x) >= val survived additive cancellation.
class PadicBall {
  public:
    PadicBall() = default;

    static PadicBall exact_zero(const Int& p, long cap) {
        PadicBall b;
        b.p_ = p;
        b.cap_ = cap;
        b.zero_ = true;
        return b;
    }

    static PadicBall from_rat(const Rat& q, const Int& p, long cap) {
        if (q == 0)
            return exact_zero(p, cap);
        PadicBall b;
        b.p_ = p;
        b.cap_ = cap;
        Int num = q.get_num(), den = q.get_den();
        long vn = valuation(num, p), vd = valuation(den, p);
        b.val_ = vn - vd;
        b.rel_ = cap;
        Int mod = pow_int(p, static_cast<unsigned long>(cap));
        Int nu = num / pow_int(p, static_cast<unsigned long>(vn));
        Int du = den / pow_int(p, static_cast<unsigned long>(vd));
        Int du_inv;
        if (mpz_invert(du_inv.get_mpz_t(), du.get_mpz_t(), mod.get_mpz_t()) == 0)
            throw std::domain_error("denominator unit not invertible");
        b.unit_ = (nu * du_inv) % mod;
        if (b.unit_ < 0)
            b.unit_ += mod;
        return b;
    }

    bool is_exact_zero() const { return zero_; }
    bool is_unknown() const { return unknown_; }
    const Int& prime() const { return p_; }

    /// Exact valuation for known elements; lower bound for unknown ones.
    long val_lower() const { return val_; }

    /// nullopt when the valuation is only bounded below.
    std::optional<long> val_exact() const {
        if (zero_ || unknown_)
            return std::nullopt;
        return val_;
    }

    PadicBall operator*(const PadicBall& o) const {
        if (zero_ || o.zero_)
            return exact_zero(p_, cap_);
        PadicBall r;
        r.p_ = p_;
        r.cap_ = cap_;
        r.val_ = val_ + o.val_;
        if (unknown_ || o.unknown_) {
            r.unknown_ = true;
            return r;
        }
        r.rel_ = std::min(rel_, o.rel_);
        Int mod = pow_int(p_, static_cast<unsigned long>(r.rel_));
        r.unit_ = (unit_ * o.unit_) % mod;
        return r;
    }

    PadicBall operator+(const PadicBall& o) const {
        if (zero_)
            return o;
        if (o.zero_)
            return *this;
        PadicBall r;
        r.p_ = p_;
        r.cap_ = cap_;
        // absolute precision of each summand: digits below it are known
        long abs_a = unknown_ ? val_ : val_ + rel_;
        long abs_b = o.unknown_ ? o.val_ : o.val_ + o.rel_;
        long A = std::min(abs_a, abs_b);
        long base = std::min(val_, o.val_);
        if (A <= base) {
            // nothing but the common valuation bound survives
            r.unknown_ = true;
            r.val_ = base;
            return r;
        }
        Int mod = pow_int(p_, static_cast<unsigned long>(A - base));
        Int rep = 0;
        if (!unknown_)
            rep += unit_ * pow_int(p_, static_cast<unsigned long>(val_ - base));
        if (!o.unknown_)
            rep += o.unit_ * pow_int(p_, static_cast<unsigned long>(o.val_ - base));
        rep %= mod;
        if (rep < 0)
            rep += mod;
        if (rep == 0) {
            r.unknown_ = true;
            r.val_ = A;
            return r;
        }
        long v = valuation(rep, p_);
        r.val_ = base + v;
        r.rel_ = (A - base) - v;
        r.unit_ = (rep / pow_int(p_, static_cast<unsigned long>(v))) %
                  pow_int(p_, static_cast<unsigned long>(r.rel_));
        return r;
    }

    PadicBall pow(unsigned long e) const {
        PadicBall acc = from_rat(Rat(1), p_, cap_);
        PadicBall b = *this;
        while (e) {
            if (e & 1)
                acc = acc * b;
            b = b * b;
            e >>= 1;
        }
        return acc;
    }

  private:
    Int p_ = 0;
    long cap_ = 0;
    bool zero_ = false;
    bool unknown_ = false;
    long val_ = 0;
    Int unit_ = 0;
    long rel_ = 0;
};

/// min_i v_p(x_i) of a ball vector when it is decidable, i.e. some known
/// coordinate realizes a valuation no larger than every lower bound.
inline std::optional<long> min_valuation(const std::vector<PadicBall>& X) {
    bool have = false;
    long best = 0;
    long floor_bound = 0;
    bool have_floor = false;
    for (const auto& b : X) {
        if (b.is_exact_zero())
            continue;
        if (auto v = b.val_exact()) {
            if (!have || *v < best)
                best = *v;
            have = true;
        } else {
            if (!have_floor || b.val_lower() < floor_bound)
                floor_bound = b.val_lower();
            have_floor = true;
        }
    }
    if (!have)
        return std::nullopt;  // all coordinates unknown or zero
    if (have_floor && floor_bound < best)
        return std::nullopt;  // an unknown coordinate could dominate
    return best;
}

}  // namespace dynpair
