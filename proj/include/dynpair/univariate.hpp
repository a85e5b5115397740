#pragma once

#include <dynpair/rational.hpp>

#include <complex>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <vector>

namespace dynpair {

/// Dense univariate polynomial over Q; c[i] is the coefficient of t^i.
struct UniPoly {
    std::vector<Rat> c;

    UniPoly() = default;
    explicit UniPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { normalize(); }

    void normalize() {
        while (!c.empty() && c.back() == 0)
            c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    long degree() const { return static_cast<long>(c.size()) - 1; }

    const Rat& leading() const {
        if (c.empty())
            throw std::invalid_argument("leading coefficient of zero polynomial");
        return c.back();
    }

    Rat eval(const Rat& t) const {
        Rat r = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            r = r * t + *it;
        return r;
    }

    std::complex<double> eval(std::complex<double> t) const {
        std::complex<double> r = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            r = r * t + std::complex<double>(it->get_d());
        return r;
    }

    UniPoly derivative() const {
        if (c.size() <= 1)
            return UniPoly{};
        std::vector<Rat> d(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i)
            d[i - 1] = c[i] * Rat(static_cast<unsigned long>(i));
        return UniPoly(std::move(d));
    }

    UniPoly monic() const {
        UniPoly r = *this;
        if (!r.c.empty()) {
            Rat inv = 1 / r.leading();
            for (auto& x : r.c)
                x *= inv;
        }
        return r;
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            r[i] += a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i)
            r[i] += b.c[i];
        return UniPoly(std::move(r));
    }

    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
        std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            r[i] += a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i)
            r[i] -= b.c[i];
        return UniPoly(std::move(r));
    }

    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero())
            return UniPoly{};
        std::vector<Rat> r(a.c.size() + b.c.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j)
                r[i + j] += a.c[i] * b.c[j];
        return UniPoly(std::move(r));
    }

    bool operator==(const UniPoly& o) const { return c == o.c; }
};

/// Exact quotient and remainder over Q.
inline std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
    if (b.is_zero())
        throw std::invalid_argument("polynomial division by zero");
    UniPoly r = a, q;
    q.c.assign(a.c.size(), Rat(0));
    Rat inv_lead = 1 / b.leading();
    while (!r.is_zero() && r.degree() >= b.degree()) {
        long shift = r.degree() - b.degree();
        Rat coeff = r.leading() * inv_lead;
        q.c[static_cast<std::size_t>(shift)] = coeff;
        for (std::size_t i = 0; i < b.c.size(); ++i)
            r.c[static_cast<std::size_t>(shift) + i] -= coeff * b.c[i];
        r.normalize();
    }
    q.normalize();
    return {q, r};
}

inline UniPoly exact_divide(const UniPoly& a, const UniPoly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero())
        throw std::logic_error("polynomial division left a remainder");
    return q;
}

/// Monic gcd by the Euclidean algorithm.
inline UniPoly gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r).monic();
    }
    return a.monic();
}

/// Yun's squarefree decomposition: p = lead * prod factors[i]^(i+1), with
/// factors[i] monic and squarefree (possibly constant 1).
inline std::vector<UniPoly> squarefree_decomposition(const UniPoly& p) {
    std::vector<UniPoly> out;
    if (p.degree() < 1)
        return out;
    UniPoly pm = p.monic();
    UniPoly dp = pm.derivative();
    UniPoly g = gcd(pm, dp);
    UniPoly w = exact_divide(pm, g);
    UniPoly y = exact_divide(dp, g);
    while (w.degree() > 0) {
        UniPoly z = y - w.derivative();
        UniPoly gi = gcd(w, z);
        out.push_back(gi);
        w = exact_divide(w, gi);
        y = exact_divide(z, gi);
    }
    return out;
}

/// All complex roots of a squarefree polynomial by Durand-Kerner iteration.
inline std::vector<std::complex<double>> roots_numeric(const UniPoly& p) {
    long deg = p.degree();
    if (deg < 1)
        return {};
    std::vector<std::complex<double>> a(static_cast<std::size_t>(deg) + 1);
    double lead = p.leading().get_d();
    for (long i = 0; i <= deg; ++i)
        a[static_cast<std::size_t>(i)] = p.c[static_cast<std::size_t>(i)].get_d() / lead;

    auto eval_monic = [&](std::complex<double> t) {
        std::complex<double> r = 0;
        for (long i = deg; i >= 0; --i)
            r = r * t + a[static_cast<std::size_t>(i)];
        return r;
    };

    double radius = 0;
    for (long i = 0; i < deg; ++i)
        radius = std::max(radius, std::abs(a[static_cast<std::size_t>(i)]));
    radius = 1 + radius;

    std::vector<std::complex<double>> z(static_cast<std::size_t>(deg));
    std::complex<double> seed(0.4, 0.9);
    std::complex<double> w = 1;
    for (auto& zk : z) {
        w *= seed;
        zk = radius * w / std::abs(w);
        zk *= std::pow(std::abs(w), 0.1);  // spread moduli to break symmetry
    }

    for (int iter = 0; iter < 2000; ++iter) {
        double worst = 0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            std::complex<double> num = eval_monic(z[k]);
            std::complex<double> den = 1;
            for (std::size_t j = 0; j < z.size(); ++j)
                if (j != k)
                    den *= z[k] - z[j];
            if (den == std::complex<double>(0))
                den = 1e-300;
            std::complex<double> step = num / den;
            z[k] -= step;
            worst = std::max(worst, std::abs(step) / (1 + std::abs(z[k])));
        }
        if (worst < 1e-15)
            break;
    }
    return z;
}

/// Nearest rational with denominator <= den_cap by continued fractions.
inline std::optional<Rat> rational_reconstruct(double x, unsigned long den_cap, double tol) {
    if (!std::isfinite(x))
        return std::nullopt;
    double target = x;
    long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int i = 0; i < 64; ++i) {
        double fl = std::floor(x);
        if (fl > 9e17 || fl < -9e17)
            return std::nullopt;
        long long ai = static_cast<long long>(fl);
        long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 < 0 || static_cast<unsigned long long>(k2) > den_cap)
            break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        double frac = x - fl;
        if (frac < 1e-15)
            break;
        x = 1 / frac;
    }
    if (k1 == 0 || h1 > 1e15 || h1 < -1e15)
        return std::nullopt;
    Rat r{Int(static_cast<long>(h1)), Int(static_cast<long>(k1))};
    r.canonicalize();
    if (std::fabs(r.get_d() - target) > tol * (1 + std::fabs(target)))
        return std::nullopt;
    return r;
}

/// Rational roots of a squarefree polynomial: numeric roots, rational
/// reconstruction, then exact verification. Also returns the remaining
/// numeric roots.
struct RootSplit {
    std::vector<Rat> rational;
    std::vector<std::complex<double>> numeric;  // the non-rational ones
};

inline RootSplit split_roots(const UniPoly& p) {
    RootSplit out;
    for (const auto& z : roots_numeric(p)) {
        bool taken = false;
        if (std::fabs(z.imag()) < 1e-8) {
            if (auto q = rational_reconstruct(z.real(), 1000000ul, 1e-9)) {
                if (p.eval(*q) == 0) {
                    out.rational.push_back(*q);
                    taken = true;
                }
            }
        }
        if (!taken)
            out.numeric.push_back(z);
    }
    return out;
}

/// Exact interpolation through (xs[i], ys[i]) by Newton divided differences.
inline UniPoly interpolate(const std::vector<Rat>& xs, const std::vector<Rat>& ys) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("interpolation needs matching nonempty samples");
    std::size_t n = xs.size();
    std::vector<Rat> dd = ys;  // divided differences, built in place
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = n - 1; i >= level; --i)
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);

    UniPoly acc;  // Horner-style assembly from the top difference down
    acc.c = {dd[n - 1]};
    for (std::size_t i = n - 1; i-- > 0;) {
        UniPoly shift;  // (t - xs[i])
        shift.c = {-xs[i], Rat(1)};
        acc = acc * shift;
        if (acc.c.empty())
            acc.c.push_back(dd[i]);
        else
            acc.c[0] += dd[i];
        acc.normalize();
    }
    return acc;
}

}  // namespace dynpair
