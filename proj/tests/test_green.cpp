#include <dynpair/dynpair.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace dynpair;

namespace {

const std::vector<std::string> XY{"x", "y"};

CertifiedPair quadratic_pair() {
    return CertifiedPair::build(PolyMap(2, {parse_poly("y", XY), parse_poly("y^2 - x", XY)}),
                                PolyMap(2, {parse_poly("x^2 - y", XY), parse_poly("x", XY)}));
}

CertifiedPair cubic_pair() {
    return CertifiedPair::build(PolyMap(2, {parse_poly("y", XY), parse_poly("y^3 - x", XY)}),
                                PolyMap(2, {parse_poly("x^3 - y", XY), parse_poly("x", XY)}));
}

std::vector<Rat> rat_point(long nx, long dx, long ny, long dy) {
    Rat x(nx, dx), y(ny, dy);
    x.canonicalize();
    y.canonicalize();
    return {x, y};
}

// seeded rational sampler shared with the acceptance suite
struct Sampler {
    std::mt19937_64 s{1};

    std::vector<Rat> operator()() {
        long nx = static_cast<long>(s() % 2000001) - 1000000;
        long dx = static_cast<long>(s() % 1000) + 1;
        long ny = static_cast<long>(s() % 2000001) - 1000000;
        long dy = static_cast<long>(s() % 1000) + 1;
        return rat_point(nx, dx, ny, dy);
    }
};

}  // namespace

TEST_CASE("log-plus norms at sample places") {
    CHECK(log_plus_norm({Rat(1, 5), Rat(2)}, Place::finite(5)) == std::log(5.0));
    CHECK(log_plus_norm({Rat(3), Rat(5)}, Place::archimedean()) == std::log(5.0));
    CHECK(log_plus_norm({Rat(1, 2), Rat(1, 3)}, Place::finite(7)) == 0.0);
    CHECK(log_plus_norm({Rat(0), Rat(0)}, Place::archimedean()) == 0.0);
}

TEST_CASE("escape region membership from exact inequalities") {
    CertifiedPair cp = quadratic_pair();
    CertificateConstants cc = validated_arch_constants(cp);
    RegionParams rp = region_params(cc, cp);
    Place arch = Place::archimedean();

    // small norm satisfies the first disjunct of both regions
    RegionFlags small = region_membership({Rat(1), Rat(1)}, cp.f, cp.g, rp, arch);
    CHECK(small.in_f);
    CHECK(small.in_g);

    // ||(3,5)|| = 5 < 1/epsilon = 16, and f grows: ||f(3,5)|| = 22 > 25/4
    REQUIRE(cc.epsilon == Rat(1, 16));
    REQUIRE(cc.delta == Rat(1, 4));
    CHECK(evaluate_exact(cp.f, {Rat(3), Rat(5)}) == std::vector<Rat>{Rat(5), Rat(22)});
    RegionFlags fl35 = region_membership({Rat(3), Rat(5)}, cp.f, cp.g, rp, arch);
    CHECK(fl35.in_f);
    CHECK(fl35.in_g);

    // beyond the small-norm radius the growth disjuncts split the plane
    RegionFlags up = region_membership({Rat(0), Rat(20)}, cp.f, cp.g, rp, arch);
    CHECK(up.in_f);
    CHECK_FALSE(up.in_g);
    RegionFlags right = region_membership({Rat(20), Rat(0)}, cp.f, cp.g, rp, arch);
    CHECK_FALSE(right.in_f);
    CHECK(right.in_g);
}

TEST_CASE("archimedean Green values match the high-precision oracle") {
    CertifiedPair cp = quadratic_pair();
    Place arch = Place::archimedean();
    std::vector<Rat> X{Rat(3), Rat(5)};

    GreenValue gf = green_eval(cp, Member::first, X, arch);
    CHECK_FALSE(gf.heuristic);
    CHECK(gf.error_bound < 1e-9);
    CHECK(std::fabs(gf.value - 1.5429131625571875) <= gf.error_bound + 1e-12);
    CHECK(gf.region == "in V_f");

    GreenValue gg = green_eval(cp, Member::second, X, arch);
    CHECK(std::fabs(gg.value - 0.638213326253291) <= gg.error_bound + 1e-12);

    GreenValue pair = green_pair(cp, X, arch);
    CHECK(pair.value == gf.value);

    // a looser tolerance converges to the same value
    GreenOptions loose;
    loose.tol = 1e-9;
    GreenValue gf9 = green_eval(cp, Member::first, X, arch, loose);
    CHECK(std::fabs(gf9.value - 1.5429131625571875) <= gf9.error_bound + 1e-12);
}

TEST_CASE("cubic pair Green values match the oracle") {
    CertifiedPair cp = cubic_pair();
    Place arch = Place::archimedean();
    std::vector<Rat> X{Rat(3), Rat(5)};

    GreenValue gf = green_eval(cp, Member::first, X, arch);
    CHECK(std::fabs(gf.value - 1.6013400422957269) <= gf.error_bound + 1e-12);
    GreenValue gg = green_eval(cp, Member::second, X, arch);
    CHECK(std::fabs(gg.value - 1.0303161752579445) <= gg.error_bound + 1e-12);
}

TEST_CASE("exact cycles give exact zeros") {
    CertifiedPair cp = quadratic_pair();
    Place arch = Place::archimedean();
    for (auto X : {rat_point(0, 1, 0, 1), rat_point(2, 1, 2, 1)}) {
        GreenValue gv = green_eval(cp, Member::first, X, arch);
        CHECK(gv.value == 0.0);
        CHECK(gv.error_bound == 0.0);
        REQUIRE(gv.exact.has_value());
        CHECK(gv.exact->multiple == 0);
        CHECK(gv.region == "exact cycle");
    }

    // (0,1) sits on a 6-cycle of the cubic map
    CertifiedPair cub = cubic_pair();
    GreenValue gv = green_eval(cub, Member::first, {Rat(0), Rat(1)}, arch);
    CHECK(gv.value == 0.0);
    CHECK(gv.error_bound == 0.0);
}

TEST_CASE("good-reduction primes give exact logarithms") {
    CertifiedPair cp = quadratic_pair();
    Place p5 = Place::finite(5);
    std::vector<Rat> X{Rat(1, 5), Rat(2)};

    GreenValue gf = green_eval(cp, Member::first, X, p5);
    REQUIRE(gf.exact.has_value());
    CHECK(gf.exact->multiple == Rat(1, 2));
    CHECK(gf.exact->base == 5);
    CHECK(gf.error_bound == 0.0);

    GreenValue gg = green_eval(cp, Member::second, X, p5);
    REQUIRE(gg.exact.has_value());
    CHECK(gg.exact->multiple == 1);
    CHECK(gg.exact->base == 5);

    GreenValue pair = green_pair(cp, X, p5);
    REQUIRE(pair.exact.has_value());
    CHECK(pair.exact->multiple == 1);
    CHECK(pair.value == log_plus_norm(X, p5));
    CHECK(pair.error_bound == 0.0);
}

TEST_CASE("upper bound from coefficient norms holds on seeded samples") {
    CertifiedPair cp = quadratic_pair();
    CertificateConstants cc = validated_arch_constants(cp);
    Place arch = Place::archimedean();
    Sampler draw;
    for (Member mem : {Member::first, Member::second}) {
        StoppingConstants sc = stopping_constants(cp, mem, cc);
        unsigned long d = (mem == Member::first) ? cp.F.d : cp.G.d;
        double slack = std::log(sc.C2.get_d()) / static_cast<double>(d - 1);
        Sampler local = draw;
        for (int k = 0; k < 500; ++k) {
            std::vector<Rat> X = local();
            GreenValue gv = green_eval(cp, mem, X, arch);
            CHECK(gv.value >= 0.0);
            CHECK(gv.value <= log_plus_norm(X, arch) + slack + gv.error_bound + 1e-12);
        }
    }
}

TEST_CASE("lower bound holds on the escape region") {
    CertifiedPair cp = quadratic_pair();
    CertificateConstants cc = validated_arch_constants(cp);
    RegionParams rp = region_params(cc, cp);
    StoppingConstants sc = stopping_constants(cp, Member::first, cc);
    REQUIRE(sc.C1 == std::min(cc.delta, pow_rat(cc.epsilon, cp.F.d)));
    Place arch = Place::archimedean();
    double slack = std::log(sc.C1.get_d()) / static_cast<double>(cp.F.d - 1);

    Sampler draw;
    int used = 0;
    for (int k = 0; k < 1000 && used < 400; ++k) {
        std::vector<Rat> X = draw();
        if (!region_membership(X, cp.f, cp.g, rp, arch).in_f)
            continue;
        ++used;
        GreenValue gv = green_eval(cp, Member::first, X, arch);
        CHECK(gv.value >= log_plus_norm(X, arch) + slack - gv.error_bound - 1e-12);
    }
    CHECK(used >= 100);
}

TEST_CASE("escape regions are forward invariant") {
    CertifiedPair cp = quadratic_pair();
    RegionParams rp = region_params(validated_arch_constants(cp), cp);
    Place arch = Place::archimedean();
    Sampler draw;
    int used = 0;
    for (int k = 0; k < 1000; ++k) {
        std::vector<Rat> X = draw();
        if (!region_membership(X, cp.f, cp.g, rp, arch).in_f)
            continue;
        ++used;
        std::vector<Rat> fX = evaluate_exact(cp.f, X);
        CHECK(region_membership(fX, cp.f, cp.g, rp, arch).in_f);
    }
    CHECK(used >= 100);
}

TEST_CASE("Green functional equation within reported errors") {
    CertifiedPair cp = quadratic_pair();
    Place arch = Place::archimedean();
    double d = static_cast<double>(cp.F.d);
    Sampler draw;
    for (int k = 0; k < 200; ++k) {
        std::vector<Rat> X = draw();
        std::vector<Rat> fX = evaluate_exact(cp.f, X);
        GreenValue a = green_eval(cp, Member::first, X, arch);
        GreenValue b = green_eval(cp, Member::first, fX, arch);
        REQUIRE_FALSE(a.heuristic);
        REQUIRE_FALSE(b.heuristic);
        CHECK(std::fabs(b.value - d * a.value) <= d * (a.error_bound + b.error_bound) + 1e-12);
    }
}

TEST_CASE("reported error bounds are sound under deeper iteration") {
    CertifiedPair cp = quadratic_pair();
    Place arch = Place::archimedean();
    Sampler draw;
    for (int k = 0; k < 50; ++k) {
        std::vector<Rat> X = draw();
        GreenValue gv = green_eval(cp, Member::first, X, arch);
        if (gv.exact)
            continue;
        GreenOptions deeper;
        deeper.min_iterations = gv.iterations + 10;
        GreenValue gv10 = green_eval(cp, Member::first, X, arch, deeper);
        CHECK(gv10.iterations >= gv.iterations + 10);
        CHECK(std::fabs(gv.value - gv10.value) <= gv.error_bound + 1e-15);
    }
}

TEST_CASE("good-reduction shortcut agrees with explicit valuation iteration") {
    CertifiedPair cp = quadratic_pair();
    REQUIRE(cp.bad.entries.empty());
    std::mt19937_64 s(1);
    for (long p : {5l, 7l, 11l}) {
        Place pl = Place::finite(p);
        Int ip(p);
        unsigned long d = cp.F.d;
        for (int k = 0; k < 50; ++k) {
            long nx = static_cast<long>(s() % 2000001) - 1000000;
            long ny = static_cast<long>(s() % 2000001) - 1000000;
            long dx = (static_cast<long>(s() % 2) + 1) * (s() % 2 ? p : 1);
            long dy = (static_cast<long>(s() % 2) + 1) * (s() % 2 ? p : 1);
            std::vector<Rat> X = rat_point(nx, dx, ny, dy);

            // limit of e_m / d^m log p by direct orbit iteration
            std::vector<Rat> Y = X;
            long e = log_plus_exponent(Y, ip);
            double mine = -1;
            for (unsigned m = 0; m < 50; ++m) {
                if (e <= 0) {
                    mine = 0;
                    break;
                }
                std::vector<Rat> Z = evaluate_exact(cp.f, Y);
                long e_next = log_plus_exponent(Z, ip);
                if (e_next == static_cast<long>(d) * e) {
                    Rat mult = Rat(e) / pow_rat(Rat(d), m);
                    mine = mult.get_d() * std::log(static_cast<double>(p));
                    break;
                }
                Y = std::move(Z);
                e = e_next;
            }
            REQUIRE(mine >= 0);

            GreenValue gv = green_eval(cp, Member::first, X, pl);
            REQUIRE(gv.exact.has_value());
            CHECK(gv.error_bound == 0.0);
            CHECK(std::fabs(gv.value - mine) <= 1e-15);
            CHECK(gv.value <= log_plus_norm(X, pl) + 1e-15);

            GreenValue pair = green_pair(cp, X, pl);
            CHECK(pair.value == log_plus_norm(X, pl));
            CHECK(pair.error_bound == 0.0);
        }
    }
}

TEST_CASE("dimension mismatches are rejected") {
    CertifiedPair cp = quadratic_pair();
    CHECK_THROWS_AS(green_eval(cp, Member::first, {Rat(1)}, Place::archimedean()),
                    dimension_error);
}
