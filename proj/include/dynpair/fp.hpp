#pragma once

#include <dynpair/rational.hpp>

#include <cstdint>

namespace dynpair {

/// Arithmetic mod a word-sized prime, used as a cheap feasibility filter
/// before exact rational elimination. The default prime leaves headroom
/// below 2^31 so products fit in 64 bits.
template <std::uint64_t P>
class Fp {
  public:
    static constexpr std::uint64_t modulus = P;

    Fp() = default;
    explicit Fp(std::uint64_t v) : v_(v % P) {}

    static Fp from_int(const Int& z) {
        Int r = z % Int(P);
        if (r < 0)
            r += Int(P);
        return Fp(r.get_ui());
    }

    static Fp from_rat(const Rat& q) {
        Fp num = from_int(Int(q.get_num()));
        Fp den = from_int(Int(q.get_den()));
        if (den.v_ == 0)
            throw std::domain_error("denominator divisible by field characteristic");
        return num * den.inverse();
    }

    std::uint64_t value() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    Fp operator+(Fp o) const { return raw((v_ + o.v_) % P); }
    Fp operator-(Fp o) const { return raw((v_ + P - o.v_) % P); }
    Fp operator*(Fp o) const { return raw((v_ * o.v_) % P); }
    Fp operator-() const { return raw(v_ ? P - v_ : 0); }

    Fp inverse() const {
        if (v_ == 0)
            throw std::domain_error("inverse of zero");
        // extended Euclid on signed residues
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = static_cast<std::int64_t>(P), new_r = static_cast<std::int64_t>(v_);
        while (new_r != 0) {
            std::int64_t q = r / new_r;
            t -= q * new_t;
            std::swap(t, new_t);
            r -= q * new_r;
            std::swap(r, new_r);
        }
        if (t < 0)
            t += static_cast<std::int64_t>(P);
        return raw(static_cast<std::uint64_t>(t));
    }

    Fp operator/(Fp o) const { return *this * o.inverse(); }

    bool operator==(const Fp&) const = default;

  private:
    static Fp raw(std::uint64_t v) {
        Fp f;
        f.v_ = v;
        return f;
    }
    std::uint64_t v_ = 0;
};

using FpScan = Fp<2147483629ull>;

}  // namespace dynpair
