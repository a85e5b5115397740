#include <dynpair/dynpair.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

using namespace dynpair;

namespace {

const std::vector<std::string> XY{"x", "y"};

PolyMap henon_f() {
    return PolyMap(2, {parse_poly("y", XY), parse_poly("y^2 - x", XY)});
}

PolyMap henon_g() {
    return PolyMap(2, {parse_poly("x^2 - y", XY), parse_poly("x", XY)});
}

QPoly random_poly(std::mt19937_64& rng, std::size_t n, unsigned long max_deg,
                  unsigned terms) {
    QPoly p(n);
    for (unsigned t = 0; t < terms; ++t) {
        Monomial m(n, 0);
        unsigned long budget = max_deg;
        for (std::size_t i = 0; i < n; ++i) {
            auto e = static_cast<std::uint32_t>(rng() % (budget + 1));
            m[i] = e;
            budget -= e;
        }
        long c = static_cast<long>(rng() % 19) - 9;
        p.add_term(m, Rat(c));
    }
    return p;
}

PolyMap random_map(std::mt19937_64& rng, std::size_t n, unsigned long max_deg) {
    std::vector<QPoly> comps;
    for (std::size_t i = 0; i < n; ++i) {
        QPoly c = random_poly(rng, n, max_deg, 4);
        if (c.degree() < 1)
            c = c + QPoly::variable(n, i);
        comps.push_back(c);
    }
    return PolyMap(n, std::move(comps));
}

std::vector<Rat> random_point(std::mt19937_64& rng, std::size_t n) {
    std::vector<Rat> X;
    for (std::size_t i = 0; i < n; ++i) {
        long num = static_cast<long>(rng() % 41) - 20;
        long den = static_cast<long>(rng() % 7) + 1;
        Rat q(num, den);
        q.canonicalize();
        X.push_back(q);
    }
    return X;
}

}  // namespace

TEST_CASE("exact evaluation of simple polynomials") {
    QPoly p = parse_poly("x^2 + y", XY);
    CHECK(evaluate_exact(p, {Rat(2), Rat(3)}) == Rat(7));

    QPoly zero(2);
    CHECK(evaluate_exact(zero, {Rat(17), Rat(-4)}) == Rat(0));

    QPoly henon_comp = parse_poly("y^2 - x", XY);
    CHECK(evaluate_exact(henon_comp, {Rat(3), Rat(5)}) == Rat(22));
}

TEST_CASE("rational literals stay reduced with positive denominators") {
    Rat q = parse_rational("6/4");
    CHECK(q.get_num() == 3);
    CHECK(q.get_den() == 2);
    CHECK(parse_rational("-10/5") == Rat(-2));
    CHECK_THROWS_AS(parse_rational("1/x"), parse_error);
}

TEST_CASE("composition of the Henon pair") {
    PolyMap f = henon_f(), g = henon_g();

    PolyMap fg = compose(f, g);
    CHECK(fg == PolyMap::identity(2));
    CHECK(fg.degree() == 1);

    CHECK(compose(PolyMap::identity(2), f) == f);
    CHECK(compose(f, PolyMap::identity(2)) == f);

    CHECK(compose(f, f).degree() == 4);
}

TEST_CASE("composition degree bound and evaluation compatibility") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 2 + rng() % 2;
        PolyMap f = random_map(rng, n, 3);
        PolyMap g = random_map(rng, n, 3);
        CHECK(compose(f, g).degree() <= f.degree() * g.degree());

        PolyMap fg = compose(f, g);
        for (int k = 0; k < 3; ++k) {
            std::vector<Rat> X = random_point(rng, n);
            CHECK(evaluate_exact(fg, X) == evaluate_exact(f, evaluate_exact(g, X)));
        }
    }
}

TEST_CASE("evaluation is a ring homomorphism on samples") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        QPoly p = random_poly(rng, 2, 4, 5);
        QPoly q = random_poly(rng, 2, 4, 5);
        std::vector<Rat> X = random_point(rng, 2);
        CHECK(evaluate_exact(p * q, X) == evaluate_exact(p, X) * evaluate_exact(q, X));
        CHECK(evaluate_exact(p + q, X) == evaluate_exact(p, X) + evaluate_exact(q, X));
    }
}

TEST_CASE("homogenization of the Henon map") {
    HomogMap F = homogenize(henon_f());
    REQUIRE(F.d == 2);
    REQUIRE(F.components.size() == 3);

    const std::vector<std::string> H{"X0", "x", "y"};
    CHECK(F.components[0] == parse_poly("X0^2", H));
    CHECK(F.components[1] == parse_poly("X0*y", H));
    CHECK(F.components[2] == parse_poly("y^2 - x*X0", H));
}

TEST_CASE("homogenization of an affine-linear map keeps degree 1") {
    PolyMap a(2, {parse_poly("x + 2*y + 3", XY), parse_poly("y - 1", XY)});
    HomogMap A = homogenize(a);
    CHECK(A.d == 1);
    const std::vector<std::string> H{"X0", "x", "y"};
    CHECK(A.components[0] == parse_poly("X0", H));
    CHECK(A.components[1] == parse_poly("x + 2*y + 3*X0", H));
    CHECK(A.components[2] == parse_poly("y - X0", H));
}

TEST_CASE("seven-dimensional shift-like map homogenizes at degree 8") {
    MapFile mf = parse_map_file(std::string(DYNPAIR_DATA_DIR) + "/dim7.pair");
    const PolyMap& f = mf.by_name("f");
    const PolyMap& g = mf.by_name("g");
    CHECK(f.degree() == 8);
    CHECK(g.degree() == 4);
    CHECK(homogenize(f).d == 8);

    CHECK(compose(f, g) == PolyMap::identity(7));
    CHECK(compose(g, f) == PolyMap::identity(7));
}

TEST_CASE("dehomogenization inverts homogenization") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        PolyMap f = random_map(rng, 2 + rng() % 2, 4);
        CHECK(dehomogenize(homogenize(f)) == f);
    }
    CHECK(dehomogenize(homogenize(henon_f())) == henon_f());
}

TEST_CASE("degree sequences detect stability and collapse") {
    CHECK(degree_sequence(henon_f(), 3) == std::vector<long>{2, 4, 8});
    CHECK(degree_sequence(PolyMap::identity(2), 3) == std::vector<long>{1, 1, 1});
    CHECK(degree_sequence(compose(henon_f(), henon_g()), 3) == std::vector<long>{1, 1, 1});
}

TEST_CASE("map documents round-trip bit-exactly") {
    MapFile mf = parse_map_file(std::string(DYNPAIR_DATA_DIR) + "/henon_c0.pair");
    REQUIRE(mf.n == 2);
    REQUIRE(mf.maps.size() == 2);
    CHECK(mf.by_name("f") == henon_f());
    CHECK(mf.by_name("g") == henon_g());

    std::string printed = print_map_document(mf);
    std::istringstream in(printed);
    MapFile again = parse_map_document(in);
    CHECK(again.n == mf.n);
    CHECK(again.vars == mf.vars);
    REQUIRE(again.maps.size() == mf.maps.size());
    for (std::size_t i = 0; i < mf.maps.size(); ++i) {
        CHECK(again.maps[i].first == mf.maps[i].first);
        CHECK(again.maps[i].second == mf.maps[i].second);
    }

    // negative coefficients and rational literals survive a second cycle
    PolyMap odd(2, {parse_poly("-3/7*x^2 + y - 1/2", XY), parse_poly("x", XY)});
    MapFile mf2{2, XY, {{"h", odd}}};
    std::istringstream in2(print_map_document(mf2));
    CHECK(parse_map_document(in2).by_name("h") == odd);
}

TEST_CASE("points files parse rational coordinates") {
    std::istringstream in("# header\n3 5\n1/5 2\n\n-7/3 11/2\n");
    auto pts = parse_points(in, 2);
    REQUIRE(pts.size() == 3);
    CHECK(pts[0] == std::vector<Rat>{Rat(3), Rat(5)});
    CHECK(pts[1] == std::vector<Rat>{Rat(1, 5), Rat(2)});
    CHECK(pts[2] == std::vector<Rat>{Rat(-7, 3), Rat(11, 2)});

    std::istringstream bad("1 2 3\n");
    CHECK_THROWS_AS(parse_points(bad, 2), parse_error);
}

TEST_CASE("term budget failures are clean resource errors") {
    std::size_t saved = config::term_budget;
    config::term_budget = 50;
    auto fill = [] {
        QPoly dense(2);
        for (std::uint32_t i = 0; i < 12; ++i)
            for (std::uint32_t j = 0; j < 12; ++j)
                dense.add_term(Monomial{i, j}, Rat(1));
    };
    CHECK_THROWS_AS(fill(), term_budget_error);
    config::term_budget = saved;
}
