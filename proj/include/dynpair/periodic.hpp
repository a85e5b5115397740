#pragma once

#include <dynpair/poly_map.hpp>
#include <dynpair/univariate.hpp>

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace dynpair {

/// Plane map of the form (x, y) -> (y, p(y) - a*x) with deg p >= 2.
struct HenonForm {
    std::vector<Rat> p;  // coefficients of p, ascending
    Rat a;

    unsigned long degree() const { return p.size() - 1; }

    std::complex<double> p_eval(std::complex<double> t) const {
        std::complex<double> r = 0;
        for (auto it = p.rbegin(); it != p.rend(); ++it)
            r = r * t + std::complex<double>(it->get_d());
        return r;
    }

    std::complex<double> p_deriv(std::complex<double> t) const {
        std::complex<double> r = 0;
        for (std::size_t i = p.size(); i-- > 1;)
            r = r * t + static_cast<double>(i) * std::complex<double>(p[i].get_d());
        return r;
    }

    std::complex<long double> p_eval_l(std::complex<long double> t) const {
        std::complex<long double> r = 0;
        for (auto it = p.rbegin(); it != p.rend(); ++it)
            r = r * t + std::complex<long double>(static_cast<long double>(it->get_d()));
        return r;
    }

    /// Escape radius: every periodic orbit stays in the square of this size.
    double filtration_radius() const {
        double mc = 0;
        for (const auto& c : p)
            mc = std::max(mc, std::fabs(c.get_d()));
        return 1 + std::fabs(a.get_d()) + mc;
    }
};

inline std::optional<HenonForm> henon_form(const PolyMap& f) {
    if (f.n != 2)
        return std::nullopt;
    if (!(f.components[0] == QPoly::variable(2, 1)))
        return std::nullopt;
    HenonForm h;
    h.a = 0;
    long dp = f.components[1].degree();
    if (dp < 2)
        return std::nullopt;
    h.p.assign(static_cast<std::size_t>(dp) + 1, Rat(0));
    for (const auto& [m, c] : f.components[1].terms) {
        if (m[0] == 1 && m[1] == 0)
            h.a = -c;
        else if (m[0] == 0)
            h.p[static_cast<std::size_t>(m[1])] = c;
        else
            return std::nullopt;
    }
    while (!h.p.empty() && h.p.back() == 0)
        h.p.pop_back();
    if (h.p.size() < 3)
        return std::nullopt;
    return h;
}

struct PeriodicSet {
    std::string map_description;
    unsigned n = 0;
    std::vector<std::array<std::complex<double>, 2>> points;
    std::vector<double> residuals;           // sup norm of f^n(z) - z per point
    std::vector<unsigned> multiplicities;    // 1 unless exact elimination says more
    std::vector<std::optional<std::array<Rat, 2>>> exact_points;  // parallel to points
    unsigned long expected_count = 0;        // d^n
    std::size_t found_count = 0;
    bool complete = false;                   // sum of multiplicities == expected
};

namespace detail {

inline std::string henon_description(const HenonForm& h) {
    std::string s = "(x,y) -> (y, p(y) - a*x), a = " + Rat(h.a).get_str() + ", p = [";
    for (std::size_t i = 0; i < h.p.size(); ++i) {
        if (i)
            s += ' ';
        s += h.p[i].get_str();
    }
    s += "] (ascending)";
    return s;
}

inline std::complex<long double> to_l(std::complex<double> z) {
    return {static_cast<long double>(z.real()), static_cast<long double>(z.imag())};
}

/// f^n(z) - z in long double, sup norm over both coordinates.
inline double orbit_residual(const HenonForm& h, std::complex<double> x0,
                             std::complex<double> y0, unsigned n) {
    std::complex<long double> x = to_l(x0), y = to_l(y0);
    long double al = static_cast<long double>(h.a.get_d());
    for (unsigned k = 0; k < n; ++k) {
        std::complex<long double> ny = h.p_eval_l(y) - al * x;
        x = y;
        y = ny;
    }
    long double rx = std::abs(x - to_l(x0));
    long double ry = std::abs(y - to_l(y0));
    return static_cast<double>(std::max(rx, ry));
}

/// Specialize a bivariate polynomial at x = x0, leaving a polynomial in y.
inline UniPoly specialize_x(const QPoly& p, const Rat& x0) {
    std::vector<Rat> c(static_cast<std::size_t>(std::max(0l, p.degree())) + 1, Rat(0));
    for (const auto& [m, coef] : p.terms) {
        std::size_t j = static_cast<std::size_t>(m[1]);
        if (j >= c.size())
            c.resize(j + 1, Rat(0));
        c[j] += coef * pow_rat(x0, static_cast<unsigned long>(m[0]));
    }
    return UniPoly(std::move(c));
}

inline long degree_in(const QPoly& p, std::size_t var) {
    long d = 0;
    for (const auto& [m, c] : p.terms)
        d = std::max(d, static_cast<long>(m[var]));
    return d;
}

/// Durand-Kerner for a polynomial with complex double coefficients.
inline std::vector<std::complex<double>> complex_coeff_roots(
    std::vector<std::complex<double>> cs) {
    long deg = static_cast<long>(cs.size()) - 1;
    while (deg > 0 && std::abs(cs[static_cast<std::size_t>(deg)]) < 1e-12)
        --deg;
    if (deg < 1)
        return {};
    std::complex<double> lead = cs[static_cast<std::size_t>(deg)];
    auto ev = [&](std::complex<double> t) {
        std::complex<double> r = 0;
        for (long i = deg; i >= 0; --i)
            r = r * t + cs[static_cast<std::size_t>(i)] / lead;
        return r;
    };
    double radius = 0;
    for (long i = 0; i < deg; ++i)
        radius = std::max(radius, std::abs(cs[static_cast<std::size_t>(i)] / lead));
    radius = 1 + radius;
    std::vector<std::complex<double>> z(static_cast<std::size_t>(deg));
    std::complex<double> seed(0.4, 0.9), w = 1;
    for (auto& zk : z) {
        w *= seed;
        zk = radius * w;
    }
    for (int iter = 0; iter < 2000; ++iter) {
        double worst = 0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            std::complex<double> den = 1;
            for (std::size_t j = 0; j < z.size(); ++j)
                if (j != k)
                    den *= z[k] - z[j];
            if (den == std::complex<double>(0))
                den = 1e-300;
            std::complex<double> step = ev(z[k]) / den;
            z[k] -= step;
            worst = std::max(worst, std::abs(step) / (1 + std::abs(z[k])));
        }
        if (worst < 1e-15)
            break;
    }
    return z;
}

/// Specialize a bivariate polynomial at a numeric x, as double coefficients
/// of the remaining variable y.
inline std::vector<std::complex<double>> specialize_x_numeric(const QPoly& p,
                                                              std::complex<double> x0) {
    std::vector<std::complex<double>> cs(static_cast<std::size_t>(degree_in(p, 1)) + 1, 0.0);
    for (const auto& [m, coef] : p.terms)
        cs[static_cast<std::size_t>(m[1])] +=
            coef.get_d() * std::pow(x0, static_cast<double>(m[0]));
    return cs;
}

/// Determinant of a dense rational matrix by Gaussian elimination.
inline Rat determinant(std::vector<std::vector<Rat>> m) {
    std::size_t k = m.size();
    Rat det = 1;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        while (piv < k && m[piv][col] == 0)
            ++piv;
        if (piv == k)
            return Rat(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        Rat inv = 1 / m[col][col];
        for (std::size_t row = col + 1; row < k; ++row) {
            if (m[row][col] == 0)
                continue;
            Rat fac = m[row][col] * inv;
            for (std::size_t j = col; j < k; ++j)
                m[row][j] -= fac * m[col][j];
        }
    }
    return det;
}

/// Resultant in y of two univariate polynomials via the Sylvester matrix.
inline Rat resultant_uni(const UniPoly& A, const UniPoly& B) {
    long da = A.degree(), db = B.degree();
    if (da < 0 || db < 0)
        return Rat(0);
    if (da == 0 && db == 0)
        return Rat(1);
    std::size_t k = static_cast<std::size_t>(da + db);
    std::vector<std::vector<Rat>> m(k, std::vector<Rat>(k, Rat(0)));
    for (long r = 0; r < db; ++r)
        for (long i = 0; i <= da; ++i)
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + i)] =
                A.c[static_cast<std::size_t>(da - i)];
    for (long r = 0; r < da; ++r)
        for (long i = 0; i <= db; ++i)
            m[static_cast<std::size_t>(db + r)][static_cast<std::size_t>(r + i)] =
                B.c[static_cast<std::size_t>(db - i)];
    return determinant(std::move(m));
}

/// Resultant in y of two bivariate polynomials as a polynomial in x, by
/// evaluation at enough rational x values and exact interpolation. Requires
/// the leading y coefficients to be constants so specialization commutes
/// with the resultant.
inline UniPoly resultant_y(const QPoly& A, const QPoly& B) {
    long dya = degree_in(A, 1), dyb = degree_in(B, 1);
    long dxa = degree_in(A, 0), dxb = degree_in(B, 0);
    for (const auto* P : {&A, &B}) {
        long dy = degree_in(*P, 1);
        for (const auto& [m, c] : P->terms)
            if (m[1] == dy && m[0] != 0)
                throw std::logic_error("leading y coefficient is not constant");
    }
    long bound = dxa * dyb + dxb * dya;
    std::vector<Rat> xs, ys;
    xs.reserve(static_cast<std::size_t>(bound) + 1);
    ys.reserve(static_cast<std::size_t>(bound) + 1);
    for (long t = 0; t <= bound; ++t) {
        // sample points 0, 1, -1, 2, -2, ...
        long v = (t % 2 == 1) ? (t + 1) / 2 : -(t / 2);
        Rat x0(v);
        xs.push_back(x0);
        ys.push_back(resultant_uni(specialize_x(A, x0), specialize_x(B, x0)));
    }
    return interpolate(xs, ys);
}

}  // namespace detail

class not_henon_error : public std::invalid_argument {
  public:
    not_henon_error() : std::invalid_argument("map is not of Henon form (y, p(y) - a*x)") {}
};

/// Fixed points of f^n by resultant elimination, n small. Rational points
/// are identified exactly (residual 0); the rest carry numeric residuals.
inline PeriodicSet fixed_points_exact(const PolyMap& f, unsigned n, unsigned n_cap = 3) {
    auto hf = henon_form(f);
    if (!hf)
        throw not_henon_error();
    if (n == 0 || n > n_cap)
        throw std::invalid_argument("period exceeds the exact-elimination cap");

    PolyMap fn = pow_map(f, n);
    QPoly A = fn.components[0] - QPoly::variable(2, 0);
    QPoly B = fn.components[1] - QPoly::variable(2, 1);

    PeriodicSet ps;
    ps.map_description = detail::henon_description(*hf);
    ps.n = n;
    ps.expected_count = pow_int(Int(hf->degree()), n).get_ui();

    UniPoly R = detail::resultant_y(A, B);
    if (R.is_zero())
        throw std::logic_error("degenerate fixed-point locus");

    auto find_y_exact = [&](const Rat& x0) {
        UniPoly gy = gcd(detail::specialize_x(A, x0), detail::specialize_x(B, x0));
        return split_roots(gy);
    };

    // The multiplicity of a root x0 of R is the total intersection
    // multiplicity of all fixed points above x0; distribute it evenly when
    // several distinct points share the coordinate (multiple transverse
    // points above one x), and give the whole weight to a single point.
    auto flush_column = [&](unsigned mult_x,
                            std::vector<std::array<std::complex<double>, 2>>&& col_pts,
                            std::vector<double>&& col_res,
                            std::vector<std::optional<std::array<Rat, 2>>>&& col_exact) {
        if (col_pts.empty())
            return;
        unsigned share = (mult_x % col_pts.size() == 0)
                             ? mult_x / static_cast<unsigned>(col_pts.size())
                             : 1;
        for (std::size_t i = 0; i < col_pts.size(); ++i) {
            ps.points.push_back(col_pts[i]);
            ps.residuals.push_back(col_res[i]);
            ps.multiplicities.push_back(share);
            ps.exact_points.push_back(std::move(col_exact[i]));
        }
    };

    std::vector<UniPoly> factors = squarefree_decomposition(R);
    for (std::size_t fi = 0; fi < factors.size(); ++fi) {
        if (factors[fi].degree() < 1)
            continue;
        unsigned mult_x = static_cast<unsigned>(fi + 1);
        RootSplit xs = split_roots(factors[fi]);
        for (const auto& x0 : xs.rational) {
            std::vector<std::array<std::complex<double>, 2>> col_pts;
            std::vector<double> col_res;
            std::vector<std::optional<std::array<Rat, 2>>> col_exact;
            RootSplit ys = find_y_exact(x0);
            for (const auto& y0 : ys.rational) {
                std::vector<Rat> z{x0, y0};
                if (evaluate_exact(fn, z) == z) {
                    col_pts.push_back({std::complex<double>(x0.get_d()),
                                       std::complex<double>(y0.get_d())});
                    col_res.push_back(0);
                    col_exact.push_back(std::array<Rat, 2>{x0, y0});
                }
            }
            for (const auto& y0 : ys.numeric) {
                double res = detail::orbit_residual(*hf, x0.get_d(), y0, n);
                if (res <= 1e-8) {
                    col_pts.push_back({std::complex<double>(x0.get_d()), y0});
                    col_res.push_back(res);
                    col_exact.push_back(std::nullopt);
                }
            }
            flush_column(mult_x, std::move(col_pts), std::move(col_res), std::move(col_exact));
        }
        for (const auto& x0 : xs.numeric) {
            // derive y candidates from the roots of A(x0, y) and keep the
            // pairs certified by the orbit residual
            std::vector<std::array<std::complex<double>, 2>> col_pts;
            std::vector<double> col_res;
            std::vector<std::optional<std::array<Rat, 2>>> col_exact;
            auto ycand = detail::complex_coeff_roots(detail::specialize_x_numeric(A, x0));
            for (const auto& y0 : ycand) {
                double res = detail::orbit_residual(*hf, x0, y0, n);
                if (res <= 1e-8) {
                    bool dup = false;
                    for (const auto& q : col_pts)
                        if (std::abs(q[1] - y0) < 1e-8)
                            dup = true;
                    if (!dup) {
                        col_pts.push_back({x0, y0});
                        col_res.push_back(res);
                        col_exact.push_back(std::nullopt);
                    }
                }
            }
            flush_column(mult_x, std::move(col_pts), std::move(col_res), std::move(col_exact));
        }
    }

    // dedupe (distinct resultant factors cannot collide, but numeric y
    // pairing can duplicate)
    PeriodicSet out;
    out.map_description = ps.map_description;
    out.n = n;
    out.expected_count = ps.expected_count;
    for (std::size_t i = 0; i < ps.points.size(); ++i) {
        bool dup = false;
        for (const auto& q : out.points)
            if (std::abs(q[0] - ps.points[i][0]) < 1e-8 &&
                std::abs(q[1] - ps.points[i][1]) < 1e-8)
                dup = true;
        if (!dup) {
            out.points.push_back(ps.points[i]);
            out.residuals.push_back(ps.residuals[i]);
            out.multiplicities.push_back(ps.multiplicities[i]);
            out.exact_points.push_back(ps.exact_points[i]);
        }
    }
    out.found_count = out.points.size();
    unsigned long mult_sum = 0;
    for (auto m : out.multiplicities)
        mult_sum += m;
    out.complete = (mult_sum == out.expected_count);
    return out;
}

struct NumericOptions {
    double residual_tol = 1e-10;
    double dedupe_tol = 1e-8;
    unsigned long seed_budget = 16777216;  // 64^4 quasi-random seeds
    unsigned newton_iters = 60;
};

/// All fixed points of f^n by multi-start Newton on the cyclic orbit system
/// u_{k+1} = p(u_k) - a u_{k-1} (indices mod n), seeded on a quasi-random
/// grid over the filtration square.
inline PeriodicSet periodic_points_numeric(const PolyMap& f, unsigned n,
                                           const NumericOptions& opt = {}) {
    auto hf = henon_form(f);
    if (!hf)
        throw not_henon_error();
    if (n == 0)
        throw std::invalid_argument("period must be positive");

    const double R = hf->filtration_radius();
    const std::complex<double> a(hf->a.get_d());
    const unsigned long expected = pow_int(Int(hf->degree()), n).get_ui();

    PeriodicSet ps;
    ps.map_description = detail::henon_description(*hf);
    ps.n = n;
    ps.expected_count = expected;

    using VecC = Eigen::VectorXcd;
    using MatC = Eigen::MatrixXcd;

    // Kronecker low-discrepancy sequence on [0,1)^4: alpha_j = phi^-(j+1)
    // with phi the real root of x^5 = x + 1.
    double phi = 1.1673039782614187;  // refined below
    for (int it = 0; it < 8; ++it)
        phi -= (std::pow(phi, 5) - phi - 1) / (5 * std::pow(phi, 4) - 1);
    double alpha[4];
    for (int j = 0; j < 4; ++j)
        alpha[j] = std::pow(phi, -(j + 1));

    auto try_seed = [&](std::complex<double> x0, std::complex<double> y0) -> std::optional<VecC> {
        // fill the orbit vector by the recurrence, clamped to the square
        VecC u(n);
        std::complex<double> xm = x0, ym = y0;
        for (unsigned k = 0; k < n; ++k) {
            u(k) = ym;
            std::complex<double> next = hf->p_eval(ym) - a * xm;
            if (std::abs(next) > 4 * R)
                next *= 4 * R / std::abs(next);
            xm = ym;
            ym = next;
        }
        MatC J(n, n);
        VecC F(n);
        for (unsigned it = 0; it < opt.newton_iters; ++it) {
            J.setZero();
            for (unsigned k = 0; k < n; ++k) {
                unsigned kp = (k + 1) % n, km = (k + n - 1) % n;
                F(k) = u(kp) - hf->p_eval(u(k)) + a * u(km);
                // cyclic banded Jacobian rows; n = 1, 2 collapse bands
                J(k, kp) += 1.0;
                J(k, k) += -hf->p_deriv(u(k));
                J(k, km) += a;
            }
            double fn = F.lpNorm<Eigen::Infinity>();
            if (fn < 1e-13) {
                bool inside = true;
                for (unsigned k = 0; k < n; ++k)
                    if (std::abs(u(k)) > R + 1e-6)
                        inside = false;
                if (!inside)
                    return std::nullopt;
                return u;
            }
            VecC step = J.partialPivLu().solve(F);
            if (!step.allFinite())
                return std::nullopt;
            u -= step;
            double un = u.lpNorm<Eigen::Infinity>();
            if (!u.allFinite() || un > 1e6)
                return std::nullopt;
        }
        return std::nullopt;
    };

    auto record = [&](const VecC& u) {
        std::complex<double> x0 = u(n - 1), y0 = u(0);
        for (const auto& q : ps.points)
            if (std::abs(q[0] - x0) < opt.dedupe_tol && std::abs(q[1] - y0) < opt.dedupe_tol)
                return;
        double res = detail::orbit_residual(*hf, x0, y0, n);
        if (res > opt.residual_tol)
            return;
        ps.points.push_back({x0, y0});
        ps.residuals.push_back(res);
        ps.multiplicities.push_back(1);
        ps.exact_points.push_back(std::nullopt);
    };

    for (unsigned long s = 0; s < opt.seed_budget && ps.points.size() < expected; ++s) {
        double q[4];
        for (int j = 0; j < 4; ++j) {
            double v = 0.5 + alpha[j] * static_cast<double>(s + 1);
            q[j] = (v - std::floor(v)) * 2 * R - R;
        }
        auto u = try_seed({q[0], q[1]}, {q[2], q[3]});
        if (u)
            record(*u);
    }

    // canonical order: by real x, then imag x, then real y, then imag y
    std::vector<std::size_t> idx(ps.points.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        const auto &p1 = ps.points[i], &p2 = ps.points[j];
        auto key = [](const std::array<std::complex<double>, 2>& p) {
            return std::array<double, 4>{p[0].real(), p[0].imag(), p[1].real(), p[1].imag()};
        };
        return key(p1) < key(p2);
    });
    PeriodicSet out;
    out.map_description = ps.map_description;
    out.n = n;
    out.expected_count = expected;
    for (auto i : idx) {
        out.points.push_back(ps.points[i]);
        out.residuals.push_back(ps.residuals[i]);
        out.multiplicities.push_back(ps.multiplicities[i]);
        out.exact_points.push_back(ps.exact_points[i]);
    }
    out.found_count = out.points.size();
    out.complete = (out.found_count == expected);
    return out;
}

}  // namespace dynpair
