#include <dynpair/dynpair.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

using namespace dynpair;

namespace {

const std::vector<std::string> XY{"x", "y"};

PolyMap pm(const std::string& a, const std::string& b) {
    return PolyMap(2, {parse_poly(a, XY), parse_poly(b, XY)});
}

PolyMap henon_c0() { return pm("y", "y^2 - x"); }
PolyMap henon_c1() { return pm("y", "y^2 + 1 - x"); }
PolyMap horseshoe() { return pm("y", "y^2 - 6 - x"); }

double max_residual(const PeriodicSet& ps) {
    double r = 0;
    for (double v : ps.residuals)
        r = std::max(r, v);
    return r;
}

bool contains_point(const PeriodicSet& ps, std::complex<double> x, std::complex<double> y,
                    double tol) {
    for (const auto& q : ps.points)
        if (std::abs(q[0] - x) < tol && std::abs(q[1] - y) < tol)
            return true;
    return false;
}

}  // namespace

TEST_CASE("Henon form recognition") {
    auto h = henon_form(henon_c0());
    REQUIRE(h.has_value());
    CHECK(h->a == 1);
    CHECK(h->degree() == 2);
    CHECK(h->p == std::vector<Rat>{Rat(0), Rat(0), Rat(1)});

    auto hh = henon_form(horseshoe());
    REQUIRE(hh.has_value());
    CHECK(hh->p == std::vector<Rat>{Rat(-6), Rat(0), Rat(1)});

    CHECK_FALSE(henon_form(pm("x^2 - y", "x")).has_value());
    PolyMap three(3, {parse_poly("y", {"x", "y", "z"}), parse_poly("z", {"x", "y", "z"}),
                      parse_poly("x^2", {"x", "y", "z"})});
    CHECK_FALSE(henon_form(three).has_value());
    CHECK_THROWS_AS(fixed_points_exact(pm("x^2 - y", "x"), 1), not_henon_error);
}

TEST_CASE("exact fixed points of the parabola maps") {
    PeriodicSet ps = fixed_points_exact(henon_c0(), 1);
    CHECK(ps.expected_count == 2);
    CHECK(ps.found_count == 2);
    CHECK(ps.complete);
    CHECK(ps.multiplicities == std::vector<unsigned>{1, 1});
    REQUIRE(ps.exact_points[0].has_value());
    REQUIRE(ps.exact_points[1].has_value());
    std::set<Rat> xs{(*ps.exact_points[0])[0], (*ps.exact_points[1])[0]};
    CHECK(xs == std::set<Rat>{Rat(0), Rat(2)});
    for (const auto& ep : ps.exact_points) {
        CHECK((*ep)[0] == (*ep)[1]);  // fixed points sit on the diagonal
    }
    CHECK(max_residual(ps) == 0.0);

    // c = 1 gives a double root: one fixed point of multiplicity 2
    PeriodicSet dbl = fixed_points_exact(henon_c1(), 1);
    CHECK(dbl.expected_count == 2);
    CHECK(dbl.found_count == 1);
    CHECK(dbl.complete);
    CHECK(dbl.multiplicities == std::vector<unsigned>{2});
    REQUIRE(dbl.exact_points[0].has_value());
    CHECK((*dbl.exact_points[0])[0] == 1);
    CHECK((*dbl.exact_points[0])[1] == 1);
}

TEST_CASE("exact elimination bounds") {
    CHECK_THROWS_AS(fixed_points_exact(henon_c0(), 0), std::invalid_argument);
    CHECK_THROWS_AS(fixed_points_exact(henon_c0(), 4), std::invalid_argument);
    CHECK_NOTHROW(fixed_points_exact(henon_c0(), 4, 5));
}

TEST_CASE("horseshoe periodic counts, exact and numeric") {
    PolyMap f = horseshoe();
    for (unsigned n = 1; n <= 3; ++n) {
        PeriodicSet ex = fixed_points_exact(f, n);
        CHECK(ex.expected_count == (1ul << n));
        CHECK(ex.complete);
        CHECK(max_residual(ex) <= 1e-8);

        PeriodicSet nu = periodic_points_numeric(f, n);
        CHECK(nu.found_count == (1ul << n));
        CHECK(nu.complete);
        CHECK(max_residual(nu) <= 1e-10);

        // every exact-elimination point shows up in the Newton harvest
        for (const auto& q : ex.points)
            CHECK(contains_point(nu, q[0], q[1], 1e-8));
    }
}

TEST_CASE("count law through period six") {
    PolyMap f = horseshoe();
    auto hf = henon_form(f);
    REQUIRE(hf.has_value());
    for (unsigned n = 1; n <= 6; ++n) {
        PeriodicSet ps = periodic_points_numeric(f, n);
        CHECK(ps.found_count == (1ul << n));
        CHECK(ps.complete);
        CHECK(max_residual(ps) <= 1e-10);
        CHECK(support_invariance_defect(*hf, ps) <= 1e-8);
    }
}

TEST_CASE("canonical height vanishes at exact periodic points") {
    CertifiedPair cp = CertifiedPair::build(henon_c0(), pm("x^2 - y", "x"));
    for (unsigned n = 1; n <= 3; ++n) {
        PeriodicSet ps = fixed_points_exact(henon_c0(), n);
        for (const auto& ep : ps.exact_points) {
            if (!ep)
                continue;
            HeightValue hv = canonical_height_pair(cp, {(*ep)[0], (*ep)[1]});
            CHECK(hv.value <= hv.error_bound);
        }
    }

    // the cubic map has a rational 6-cycle through (0,1)
    PolyMap cf = pm("y", "y^3 - x");
    CertifiedPair cc = CertifiedPair::build(cf, pm("x^3 - y", "x"));
    std::vector<Rat> z{Rat(0), Rat(1)};
    for (int k = 0; k < 6; ++k) {
        HeightValue hv = canonical_height_pair(cc, z);
        CHECK(hv.value <= hv.error_bound);
        z = evaluate_exact(cf, z);
    }
    CHECK(z == std::vector<Rat>{Rat(0), Rat(1)});
}

TEST_CASE("empirical measures weigh points uniformly") {
    PeriodicSet p1 = periodic_points_numeric(horseshoe(), 1);
    EmpiricalMeasure m1 = empirical_measure(p1);
    CHECK(m1.support.size() == 2);
    CHECK(m1.weight() == 0.5);

    PeriodicSet empty;
    CHECK_THROWS_AS(empirical_measure(empty), std::invalid_argument);
}

TEST_CASE("merging measures dedupes nested periodic sets") {
    PolyMap f = horseshoe();
    EmpiricalMeasure m1 = empirical_measure(periodic_points_numeric(f, 1));
    EmpiricalMeasure m2 = empirical_measure(periodic_points_numeric(f, 2));

    // fixed points persist in the period-2 set, so the union has 4 points
    EmpiricalMeasure merged = merge_measures({m1, m2});
    CHECK(merged.support.size() == 4);
    CHECK(merged.weight() == 0.25);

    EmpiricalMeasure self = merge_measures({m1, m1});
    CHECK(self.support.size() == 2);
}

TEST_CASE("constant test functions average to one") {
    std::vector<TestFunction> ones{{"one", [](std::complex<double>, std::complex<double>) {
                                        return 1.0;
                                    }}};
    TestFunctionReport rep = equidistribution_report(horseshoe(), {1, 2, 3}, ones);
    REQUIRE(rep.averages.size() == 1);
    for (double v : rep.averages[0])
        CHECK(v == 1.0);
    for (double d : rep.differences[0])
        CHECK(d == 0.0);
    for (double v : rep.invariance[0])
        CHECK(v <= 1e-12);
}

TEST_CASE("equidistribution report reproduces the recorded baselines") {
    TestFunctionReport rep = equidistribution_report(horseshoe(), {3, 4, 5, 6});
    REQUIRE(rep.periods == std::vector<unsigned>{3, 4, 5, 6});
    REQUIRE(rep.phi_names.size() == 7);

    for (const PeriodicSet& ps : rep.sets)
        CHECK(ps.complete);

    // coordinate moments are stationary across periods
    for (std::size_t ni = 0; ni < 4; ++ni) {
        CHECK(rep.averages[0][ni] == 0.0);   // Re x
        CHECK(rep.averages[1][ni] == 6.0);   // |x|^2
        CHECK(rep.averages[2][ni] == 0.0);   // Re y
        CHECK(rep.averages[3][ni] == 6.0);   // |y|^2
        CHECK(rep.averages[4][ni] == 0.75);  // Re x conj y
    }

    // recorded bump averages, quantized to 12 decimals
    CHECK(rep.averages[5] ==
          std::vector<double>{0.247640292559, 0.208454755663, 0.203962708476, 0.204653359164});
    CHECK(rep.averages[6] ==
          std::vector<double>{0.126693254614, 0.117067328262, 0.115935517586, 0.116455214487});

    // successive differences shrink from n=3 to n=5 for the bumps
    for (std::size_t pi : {5u, 6u}) {
        REQUIRE(rep.differences[pi].size() == 3);
        CHECK(rep.differences[pi][2] <= rep.differences[pi][0]);
    }

    for (std::size_t pi = 0; pi < 7; ++pi)
        for (double v : rep.invariance[pi])
            CHECK(v <= 1e-8);
    for (double d : rep.support_defect)
        CHECK(d <= 1e-8);

    std::string doc = rep.render();
    CHECK(doc.find("# equidistribution report") != std::string::npos);
    CHECK(doc.find("bumpA") != std::string::npos);
    CHECK(doc.find("NO") == std::string::npos);
}
