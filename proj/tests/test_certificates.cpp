#include <dynpair/dynpair.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace dynpair;

namespace {

const std::vector<std::string> XY{"x", "y"};
const std::vector<std::string> HXY{"X0", "x", "y"};

PolyMap pm(const std::string& a, const std::string& b) {
    return PolyMap(2, {parse_poly(a, XY), parse_poly(b, XY)});
}

PolyMap henon_f() { return pm("y", "y^2 - x"); }
PolyMap henon_g() { return pm("x^2 - y", "x"); }

// scaled family: f_a = (y, y^2 - a*x) with inverse ((x^2 - y)/a, x)
PolyMap scaled_f(long a) { return pm("y", "y^2 - " + std::to_string(a) + "*x"); }
PolyMap scaled_g(long a) {
    std::string s = std::to_string(a);
    return pm("1/" + s + "*x^2 - 1/" + s + "*y", "x");
}

void check_eq_c(const CertificateConstants& cc, const CompositionDivisor& cd, unsigned long d) {
    CHECK(cc.epsilon < 1 / cc.C0);
    CHECK(cc.delta < 1 / cc.C0);
    long gap = static_cast<long>(d) - cd.d_J;
    REQUIRE(gap >= 1);
    CHECK(pow_rat(cc.epsilon, static_cast<unsigned long>(gap)) * cc.C0 < cc.delta);
    CHECK(pow_rat(cc.epsilon, cd.l) * cc.C0 < cc.delta * cc.delta);
}

template <std::uint64_t P>
void check_mod_p_certificate(const CertifiedPair& cp) {
    using K = Fp<P>;
    std::vector<MultiPoly<K>> Fc, Gc;
    for (std::size_t i = 1; i <= cp.f.n; ++i) {
        Fc.push_back(convert_coefficients<K>(cp.F.components[i], &K::from_rat));
        Gc.push_back(convert_coefficients<K>(cp.G.components[i], &K::from_rat));
    }
    auto sol = solve_certificate_at<K>(Fc, Gc, cp.F.d, cp.G.d, cp.cert.M);
    REQUIRE(sol.has_value());

    // verify the reduced certificate identity by expansion over the field
    const std::size_t n = cp.f.n, v = n + 1;
    for (std::size_t j = 0; j < n; ++j) {
        MultiPoly<K> lhs(v);
        for (std::size_t i = 0; i < n; ++i) {
            lhs = lhs + sol->P[i][j] * Fc[i];
            lhs = lhs + sol->Q[i][j] * Gc[i];
        }
        lhs = lhs + MultiPoly<K>::variable(v, 0) * sol->R[j];
        MultiPoly<K> rhs(v);
        Monomial xjM(v, 0);
        xjM[j + 1] = static_cast<std::uint32_t>(cp.cert.M);
        rhs.add_term(xjM, K(1));
        CHECK(lhs == rhs);
    }
}

}  // namespace

TEST_CASE("joint certificate for the Henon pair at degree 2") {
    HomogMap F = homogenize(henon_f());
    HomogMap G = homogenize(henon_g());

    auto cert = find_certificate(F, G);
    REQUIRE(cert.has_value());
    CHECK(cert->M == 2);
    CHECK(certificate_identity_holds(F, G, *cert));

    // the certificate solutions the system admits at M = 2, checked as algebra:
    // X1^2 = G_1 + X0*X2 and X2^2 = F_2 + X0*X1
    QPoly X0 = parse_poly("X0", HXY), X1 = parse_poly("x", HXY), X2 = parse_poly("y", HXY);
    CHECK(G.components[1] + X0 * X2 == X1 * X1);
    CHECK(F.components[2] + X0 * X1 == X2 * X2);

    // entry degrees stay within the schema P: M-d_f, Q: M-d_g, R: M-1
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(cert->P[i][j].degree() <= static_cast<long>(cert->M - F.d));
            CHECK(cert->Q[i][j].degree() <= static_cast<long>(cert->M - G.d));
        }
    for (std::size_t j = 0; j < 2; ++j)
        CHECK(cert->R[j].degree() <= static_cast<long>(cert->M - 1));
}

TEST_CASE("identical maps admit no joint certificate") {
    HomogMap F = homogenize(henon_f());
    CHECK_FALSE(find_certificate(F, F).has_value());
}

TEST_CASE("manual expansion of the certificate identity") {
    CertifiedPair cp = CertifiedPair::build(henon_f(), henon_g());
    const std::size_t v = 3;
    for (std::size_t j = 0; j < 2; ++j) {
        QPoly lhs(v);
        for (std::size_t i = 0; i < 2; ++i) {
            lhs = lhs + cp.cert.P[i][j] * cp.F.components[i + 1];
            lhs = lhs + cp.cert.Q[i][j] * cp.G.components[i + 1];
        }
        lhs = lhs + QPoly::variable(v, 0) * cp.cert.R[j];
        QPoly rhs(v);
        Monomial m(v, 0);
        m[j + 1] = static_cast<std::uint32_t>(cp.cert.M);
        rhs.add_term(m, Rat(1));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("composition divisor of inverse pairs") {
    PolyMap f = henon_f(), g = henon_g();

    CompositionDivisor cd = extract_composition_divisor(f, g);
    CHECK(cd.l == 3);
    CHECK(cd.d_J == 1);
    REQUIRE(cd.J.size() == 2);
    CHECK(cd.J[0] == parse_poly("x", HXY));
    CHECK(cd.J[1] == parse_poly("y", HXY));

    CompositionDivisor cd2 = extract_composition_divisor(pow_map(f, 2), pow_map(g, 2));
    CHECK(cd2.l == 15);
    CHECK(cd2.d_J == 1);
}

TEST_CASE("composition divisor identity holds for every component") {
    PolyMap f = henon_f(), g = henon_g();

    // {f^2, g} composes to f, a nontrivial degree-2 divisor case
    PolyMap f2 = pow_map(f, 2);
    CompositionDivisor cd = extract_composition_divisor(f2, g);
    CHECK(cd.l == 6);
    CHECK(cd.d_J == 2);
    REQUIRE(cd.J.size() == 2);
    CHECK(cd.J[0] == parse_poly("X0*y", HXY));
    CHECK(cd.J[1] == parse_poly("y^2 - X0*x", HXY));

    HomogMap F2 = homogenize(f2), G = homogenize(g);
    std::vector<QPoly> comp = compose_homog(F2, G);
    QPoly x0l(3);
    Monomial m(3, 0);
    m[0] = static_cast<std::uint32_t>(cd.l);
    x0l.add_term(m, Rat(1));
    for (std::size_t i = 1; i <= 2; ++i)
        CHECK(comp[i] == x0l * cd.J[i - 1]);
}

TEST_CASE("non-commuting maps are rejected") {
    PolyMap f = henon_f();
    PolyMap h = pm("x^2", "y^2");
    REQUIRE_FALSE(compose(f, h) == compose(h, f));
    try {
        extract_composition_divisor(f, h);
        FAIL("expected composition_error");
    } catch (const composition_error& e) {
        CHECK(e.kind == composition_error::not_commuting);
    }
}

TEST_CASE("certificate constants at the archimedean place") {
    CertifiedPair cp = CertifiedPair::build(henon_f(), henon_g());
    CertificateConstants cc =
        constants_at_place(cp.cert, cp.div, cp.F, cp.G, Place::archimedean());
    CHECK(cc.C0 == 2);
    CHECK(cc.inflated);
    CHECK(cc.epsilon == Rat(1, 16));
    CHECK(cc.delta == Rat(1, 4));
    check_eq_c(cc, cp.div, std::min(cp.F.d, cp.G.d));
}

TEST_CASE("unit coefficients at a good prime inflate to C0 = 2") {
    CertifiedPair cp = CertifiedPair::build(henon_f(), henon_g());
    CertificateConstants cc = constants_at_place(cp.cert, cp.div, cp.F, cp.G, Place::finite(7));
    CHECK(cc.C0 == 2);
    CHECK(cc.inflated);
}

TEST_CASE("scaled pair constants read the true coefficient bound") {
    CertifiedPair cp = CertifiedPair::build(scaled_f(6), scaled_g(6));

    CertificateConstants arch =
        constants_at_place(cp.cert, cp.div, cp.F, cp.G, Place::archimedean());
    CHECK(arch.C0 == 6);
    CHECK_FALSE(arch.inflated);
    CHECK(arch.epsilon == Rat(1, 1296));
    CHECK(arch.delta == Rat(1, 36));

    CertificateConstants at2 = constants_at_place(cp.cert, cp.div, cp.F, cp.G, Place::finite(2));
    CHECK(at2.C0 == 2);
    CHECK_FALSE(at2.inflated);
    CertificateConstants at3 = constants_at_place(cp.cert, cp.div, cp.F, cp.G, Place::finite(3));
    CHECK(at3.C0 == 3);
    CHECK(at3.epsilon == Rat(1, 81));
    CHECK(at3.delta == Rat(1, 9));
}

TEST_CASE("growth inequalities hold at every probed place") {
    CertifiedPair c0 = CertifiedPair::build(henon_f(), henon_g());
    CertifiedPair a6 = CertifiedPair::build(scaled_f(6), scaled_g(6));
    std::vector<Place> places{Place::archimedean(), Place::finite(2), Place::finite(3),
                              Place::finite(5),     Place::finite(7), Place::finite(101)};
    for (const auto& pl : places) {
        check_eq_c(constants_at_place(c0.cert, c0.div, c0.F, c0.G, pl), c0.div,
                   std::min(c0.F.d, c0.G.d));
        check_eq_c(constants_at_place(a6.cert, a6.div, a6.F, a6.G, pl), a6.div,
                   std::min(a6.F.d, a6.G.d));
    }
}

TEST_CASE("bad prime sets") {
    SECTION("integral unit pair has an empty set") {
        CertifiedPair cp = CertifiedPair::build(henon_f(), henon_g());
        CHECK(cp.bad.entries.empty());
    }

    SECTION("denominator 3 puts 3 in the set") {
        CertifiedPair cp = CertifiedPair::build(scaled_f(3), scaled_g(3));
        CHECK(cp.bad.primes() == std::vector<Int>{Int(3)});
        CHECK(cp.bad.entries.at(3).count(BadReason::non_integral_coefficient) == 1);
    }

    SECTION("denominator 6 contributes both prime factors") {
        CertifiedPair cp = CertifiedPair::build(scaled_f(6), scaled_g(6));
        CHECK(cp.bad.primes() == std::vector<Int>{Int(2), Int(3)});
    }

    SECTION("common factor of a top form is a degree-drop prime") {
        CertifiedPair cp = CertifiedPair::build(pm("y", "5*y^2 - x"), pm("5*x^2 - y", "x"));
        REQUIRE(cp.bad.contains(5));
        CHECK(cp.bad.entries.at(5).count(BadReason::degree_drop) == 1);
    }

    SECTION("sets grow with the denominator primes") {
        auto bad_of = [](const PolyMap& f, const PolyMap& g) {
            CertifiedPair cp = CertifiedPair::build(f, g);
            return cp.bad.primes();
        };
        std::vector<Int> b0 = bad_of(henon_f(), henon_g());
        std::vector<Int> b3 = bad_of(scaled_f(3), scaled_g(3));
        std::vector<Int> b6 = bad_of(scaled_f(6), scaled_g(6));
        auto subset = [](const std::vector<Int>& a, const std::vector<Int>& b) {
            for (const auto& p : a)
                if (std::find(b.begin(), b.end(), p) == b.end())
                    return false;
            return true;
        };
        CHECK(subset(b0, b3));
        CHECK(subset(b3, b6));
    }
}

TEST_CASE("certificate survives reduction at good primes") {
    CertifiedPair cp = CertifiedPair::build(henon_f(), henon_g());
    REQUIRE(cp.bad.entries.empty());
    check_mod_p_certificate<5>(cp);
    check_mod_p_certificate<7>(cp);
    check_mod_p_certificate<11>(cp);
    check_mod_p_certificate<13>(cp);
    check_mod_p_certificate<17>(cp);
}

TEST_CASE("oversized certificate systems raise a resource error") {
    HomogMap F = homogenize(henon_f());
    HomogMap G = homogenize(henon_g());
    std::size_t saved = config::cert_matrix_entry_cap;
    config::cert_matrix_entry_cap = 10;
    try {
        find_certificate(F, G);
        config::cert_matrix_entry_cap = saved;
        FAIL("expected resource_error");
    } catch (const resource_error& e) {
        config::cert_matrix_entry_cap = saved;
        CHECK(e.m_reached == 2);
    }
}
