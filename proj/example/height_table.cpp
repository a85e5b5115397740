// Prints a table of canonical pair heights for a handful of rational points
// under the quadratic Henon pair, next to the naive Weil height for
// comparison. Periodic points come out exactly zero.

#include <dynpair/dynpair.hpp>

#include <cstdio>

using namespace dynpair;

int main() {
    std::vector<std::string> vars{"x", "y"};
    PolyMap f(2, {parse_poly("y", vars), parse_poly("y^2 - x", vars)});
    PolyMap g(2, {parse_poly("x^2 - y", vars), parse_poly("x", vars)});
    CertifiedPair cp = CertifiedPair::build(f, g);

    std::vector<std::vector<Rat>> points{
        {Rat(0), Rat(0)},      {Rat(2), Rat(2)},       {Rat(3), Rat(5)},
        {Rat(1, 5), Rat(2)},   {Rat(-7, 3), Rat(11, 2)}, {Rat(100), Rat(-100)},
    };

    std::printf("%-14s %-22s %-12s %s\n", "point", "canonical height", "error", "naive");
    for (const auto& X : points) {
        HeightValue hv = canonical_height_pair(cp, X);
        NaiveHeight nh = naive_height(X);
        std::string label = "(" + X[0].get_str() + "," + X[1].get_str() + ")";
        if (hv.exact_zero)
            std::printf("%-14s %-22s %-12s %.6f\n", label.c_str(), "0 (periodic)", "0",
                        nh.value);
        else
            std::printf("%-14s %-22.16f %-12.2e %.6f\n", label.c_str(), hv.value,
                        hv.error_bound, nh.value);
    }
    return 0;
}
