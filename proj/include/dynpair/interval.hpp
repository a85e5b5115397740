#pragma once

#include <dynpair/rational.hpp>

#include <mpfr.h>

#include <string>
#include <vector>

namespace dynpair {

namespace config {
/// Working precision in bits for archimedean interval arithmetic.
inline mpfr_prec_t default_interval_prec = 128;
}  // namespace config

/// Widen the MPFR exponent range once per process. Escaping orbits reach
/// norms like 10^(10^10) whose exponents overflow the library default long
/// before the iteration count becomes a problem.
inline void widen_mpfr_exponent_range() {
    static const bool done = [] {
        mpfr_set_emax(mpfr_get_emax_max());
        mpfr_set_emin(mpfr_get_emin_min());
        return true;
    }();
    (void)done;
}

/// Closed interval [lo, hi] with outward-rounded endpoint arithmetic. Every
/// operation returns an interval containing the exact image, so a chain of
/// operations on exact rational inputs yields two-sided enclosures.
class IReal {
  public:
    explicit IReal(mpfr_prec_t prec = config::default_interval_prec) {
        widen_mpfr_exponent_range();
        mpfr_init2(lo_, prec);
        mpfr_init2(hi_, prec);
        mpfr_set_zero(lo_, 1);
        mpfr_set_zero(hi_, 1);
    }

    IReal(const IReal& o) {
        mpfr_init2(lo_, mpfr_get_prec(o.lo_));
        mpfr_init2(hi_, mpfr_get_prec(o.hi_));
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }

    IReal(IReal&& o) noexcept {
        mpfr_init2(lo_, mpfr_get_prec(o.lo_));
        mpfr_init2(hi_, mpfr_get_prec(o.hi_));
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
    }

    IReal& operator=(IReal o) noexcept {
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
        return *this;
    }

    ~IReal() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    static IReal from_rat(const Rat& q, mpfr_prec_t prec = config::default_interval_prec) {
        IReal r(prec);
        mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
        return r;
    }

    static IReal from_long(long v, mpfr_prec_t prec = config::default_interval_prec) {
        IReal r(prec);
        mpfr_set_si(r.lo_, v, MPFR_RNDD);
        mpfr_set_si(r.hi_, v, MPFR_RNDU);
        return r;
    }

    mpfr_prec_t prec() const { return mpfr_get_prec(lo_); }

    bool finite() const { return mpfr_number_p(lo_) && mpfr_number_p(hi_); }

    IReal operator+(const IReal& o) const {
        IReal r(prec());
        mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
        return r;
    }

    IReal operator-(const IReal& o) const {
        IReal r(prec());
        mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
        return r;
    }

    IReal operator-() const {
        IReal r(prec());
        mpfr_neg(r.lo_, hi_, MPFR_RNDD);
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
        return r;
    }

    IReal operator*(const IReal& o) const {
        // Outward-rounded min/max over all four endpoint products. Slower
        // than a sign-case split but immune to case bugs.
        IReal r(prec());
        mpfr_t t;
        mpfr_init2(t, prec());
        bool first = true;
        const mpfr_srcptr as[2] = {lo_, hi_};
        const mpfr_srcptr bs[2] = {o.lo_, o.hi_};
        for (auto a : as)
            for (auto b : bs) {
                mpfr_mul(t, a, b, MPFR_RNDD);
                if (first || mpfr_cmp(t, r.lo_) < 0)
                    mpfr_set(r.lo_, t, MPFR_RNDD);
                mpfr_mul(t, a, b, MPFR_RNDU);
                if (first || mpfr_cmp(t, r.hi_) > 0)
                    mpfr_set(r.hi_, t, MPFR_RNDU);
                first = false;
            }
        mpfr_clear(t);
        return r;
    }

    /// x^e by binary powering (sound but possibly loose across zero).
    IReal pow(unsigned long e) const {
        IReal acc = from_long(1, prec());
        IReal base = *this;
        while (e) {
            if (e & 1)
                acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    IReal abs() const {
        IReal r(prec());
        if (mpfr_sgn(lo_) >= 0)
            return *this;
        if (mpfr_sgn(hi_) <= 0)
            return -*this;
        mpfr_set_zero(r.lo_, 1);
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
        if (mpfr_cmp(r.hi_, hi_) < 0)
            mpfr_set(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    static IReal max(const IReal& a, const IReal& b) {
        IReal r(a.prec());
        mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }

    /// Natural log; requires a strictly positive interval.
    IReal log() const {
        if (mpfr_sgn(lo_) <= 0)
            throw std::domain_error("log of an interval touching zero");
        IReal r(prec());
        mpfr_log(r.lo_, lo_, MPFR_RNDD);
        mpfr_log(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    /// max(log, 0) extended to intervals touching (0, 1].
    IReal log_plus() const {
        IReal one = from_long(1, prec());
        return max(*this, one).log();
    }

    bool certainly_less(const IReal& o) const { return mpfr_cmp(hi_, o.lo_) < 0; }
    bool certainly_greater(const IReal& o) const { return mpfr_cmp(lo_, o.hi_) > 0; }
    bool certainly_ge(const IReal& o) const { return mpfr_cmp(lo_, o.hi_) >= 0; }

    double mid() const {
        mpfr_t m;
        mpfr_init2(m, prec());
        mpfr_add(m, lo_, hi_, MPFR_RNDN);
        mpfr_div_2ui(m, m, 1, MPFR_RNDN);
        double d = mpfr_get_d(m, MPFR_RNDN);
        mpfr_clear(m);
        return d;
    }

    /// Upper bound on hi - lo as a double (rounded up).
    double width() const {
        mpfr_t w;
        mpfr_init2(w, prec());
        mpfr_sub(w, hi_, lo_, MPFR_RNDU);
        double d = mpfr_get_d(w, MPFR_RNDU);
        mpfr_clear(w);
        return d;
    }

    double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

    std::string str(std::size_t digits = 20) const {
        char* s = nullptr;
        mpfr_asprintf(&s, "[%.*Rg, %.*Rg]", static_cast<int>(digits), lo_,
                      static_cast<int>(digits), hi_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

  private:
    mpfr_t lo_, hi_;
};

/// Sup norm max_i |x_i| of an interval vector.
inline IReal sup_norm(const std::vector<IReal>& X) {
    IReal r = X.at(0).abs();
    for (std::size_t i = 1; i < X.size(); ++i)
        r = IReal::max(r, X[i].abs());
    return r;
}

}  // namespace dynpair
