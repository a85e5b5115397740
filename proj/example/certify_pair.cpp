// Builds the quadratic Henon pair f = (y, y^2 - x), g = f^{-1}, runs the
// full strong-regularity check, and prints the resulting report together
// with the joint certificate's bad primes and local constants.

#include <dynpair/dynpair.hpp>

#include <iostream>

using namespace dynpair;

int main() {
    std::vector<std::string> vars{"x", "y"};
    PolyMap f(2, {parse_poly("y", vars), parse_poly("y^2 - x", vars)});
    PolyMap g(2, {parse_poly("x^2 - y", vars), parse_poly("x", vars)});

    RegularityReport rep = check_strongly_regular(f, g);
    std::cout << report_document(rep) << '\n';

    if (!rep.certificate)
        return 1;

    CertifiedPair cp = CertifiedPair::build(f, g);
    std::cout << "bad primes:";
    if (cp.bad.entries.empty())
        std::cout << " none";
    for (const auto& p : cp.bad.primes())
        std::cout << ' ' << p;
    std::cout << '\n';

    for (const Place& pl : {Place::archimedean(), Place::finite(2), Place::finite(5)}) {
        CertificateConstants cc = constants_at_place(cp.cert, cp.div, cp.F, cp.G, pl);
        std::cout << pl.name() << ": C0 = " << cc.C0 << ", epsilon = " << cc.epsilon
                  << ", delta = " << cc.delta << (cc.inflated ? " (inflated)" : "") << '\n';
    }
    return 0;
}
