#include <dynpair/dynpair.hpp>

#include "CLI11.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace dynpair;

namespace {

// Shortest round-trip decimal form, so identical doubles always render as
// identical bytes and exact values like log 5 print without trailing noise.
std::string fmt(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, static_cast<std::size_t>(p - buf));
}

std::string fmt_point(const std::vector<Rat>& X) {
    std::string s;
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (i)
            s += ' ';
        s += X[i].get_str();
    }
    return s;
}

const char* green_flag(const GreenValue& gv) {
    if (gv.exact)
        return "exact";
    return gv.heuristic ? "heuristic" : "rigorous";
}

struct Options {
    std::string input;
    std::string points_path;
    std::string out_path;
    std::string place = "arch";
    std::string member = "pair";
    double tol = 1e-10;
    unsigned long mmax = 0;
    unsigned iter_cap = 0;  // 0 keeps each place's default cap
    unsigned ncap = 3;
    std::vector<unsigned> nlist;
    long prec = 0;
    unsigned long seed = 1;
    bool force = false;
    bool exact = false;
};

// Buffered so a failed run cannot leave a truncated output file behind.
struct Output {
    std::ostringstream buf;
    std::string path;

    explicit Output(std::string p) : path(std::move(p)) {}

    void flush() {
        if (path.empty()) {
            std::cout << buf.str();
            return;
        }
        std::ofstream f(path, std::ios::trunc);
        if (!f)
            throw parse_error("cannot open output file " + path);
        f << buf.str();
    }
};

Place parse_place(const std::string& s) {
    if (s == "arch")
        return Place::archimedean();
    Int p;
    if (mpz_set_str(p.get_mpz_t(), s.c_str(), 10) != 0 || p < 2 ||
        mpz_probab_prime_p(p.get_mpz_t(), 32) == 0)
        throw std::invalid_argument("--place expects arch, all, or a prime");
    return Place::finite(p);
}

GreenOptions green_options(const Options& o) {
    GreenOptions go;
    go.tol = o.tol;
    if (o.iter_cap) {
        go.iter_cap_arch = o.iter_cap;
        go.iter_cap_finite = o.iter_cap;
    }
    go.prec = o.prec;
    return go;
}

void header(Output& out, const char* sub, const Options& o) {
    out.buf << "# dynpair " << sub << "\n";
    out.buf << "# input " << o.input << "\n";
    if (!o.points_path.empty())
        out.buf << "# points " << o.points_path << "\n";
    out.buf << "# tol " << fmt(o.tol) << "\n";
    out.buf << "# prec " << (o.prec ? o.prec : config::default_interval_prec) << "\n";
    out.buf << "# seed " << o.seed << "\n";
}

/// Load the first two map blocks as the pair (f, g). A lone automorphism of
/// unequal degrees is raised to the equal-degree powers S = (f^l2, g^l1)
/// before any certification, matching the power-pair construction.
struct LoadedPair {
    MapFile mf;
    PolyMap f, g;
    bool powered = false;
    unsigned long l1 = 0, l2 = 0;
};

LoadedPair load_pair(const std::string& path) {
    MapFile mf = parse_map_file(path);
    if (mf.maps.size() < 2)
        throw parse_error("input needs two map blocks: the pair f, g");
    LoadedPair lp{std::move(mf), {}, {}, false, 0, 0};
    lp.f = lp.mf.maps[0].second;
    lp.g = lp.mf.maps[1].second;
    if (lp.f.degree() != lp.g.degree()) {
        PolyMap id = PolyMap::identity(lp.f.n);
        if (!(compose(lp.f, lp.g) == id) || !(compose(lp.g, lp.f) == id))
            throw parse_error("maps of unequal degree must be mutually inverse");
        AutomorphismPair ap = power_pair(lp.f, lp.g);
        lp.f = ap.S.first;
        lp.g = ap.S.second;
        lp.powered = true;
        lp.l1 = ap.l1;
        lp.l2 = ap.l2;
    }
    return lp;
}

std::vector<std::vector<Rat>> load_points(const std::string& path, std::size_t n) {
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open points file " + path);
    return parse_points(in, n);
}

int cmd_check(const Options& o) {
    Output out(o.out_path);
    header(out, "check", o);
    LoadedPair lp = load_pair(o.input);
    if (lp.powered)
        out.buf << "power-pair l1 " << lp.l1 << " l2 " << lp.l2 << "\n";
    RegularityReport rep = check_strongly_regular(lp.f, lp.g, 3, o.mmax);
    if (lp.powered)
        rep.c_finiteness = CFiniteness::automorphism_derived;
    out.buf << report_document(rep);
    out.flush();
    return rep.strongly_regular() ? 0 : 1;
}

void render_constants(Output& out, const CertificateConstants& cc) {
    out.buf << "constants " << cc.place.name() << " C0 " << cc.C0.get_str() << " epsilon "
            << cc.epsilon.get_str() << " delta " << cc.delta.get_str() << " inflated "
            << (cc.inflated ? "yes" : "no") << "\n";
}

int cmd_certificate(const Options& o) {
    Output out(o.out_path);
    header(out, "certificate", o);
    LoadedPair lp = load_pair(o.input);
    if (lp.powered)
        out.buf << "power-pair l1 " << lp.l1 << " l2 " << lp.l2 << "\n";

    RegularityReport rep = check_strongly_regular(lp.f, lp.g, 3, o.mmax);
    if (lp.powered)
        rep.c_finiteness = CFiniteness::automorphism_derived;
    if (!rep.strongly_regular() && !o.force) {
        out.buf << report_document(rep);
        out.buf << "certificate refused: pair is not strongly regular (--force overrides)\n";
        out.flush();
        return 1;
    }

    CertifiedPair cp = CertifiedPair::build(lp.f, lp.g, o.mmax);
    std::vector<std::string> hv{"X0"};
    for (const auto& v : lp.mf.vars)
        hv.push_back(v);

    out.buf << "pair-degrees " << cp.F.d << " " << cp.G.d << "\n";
    out.buf << "certificate-degree " << cp.cert.M << "\n";
    out.buf << "composition-divisor l " << cp.div.l << " deg-J " << cp.div.d_J << "\n";
    const std::size_t n = cp.f.n;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            out.buf << "P " << i + 1 << " " << j + 1 << " " << print_poly(cp.cert.P[i][j], hv)
                    << "\n";
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            out.buf << "Q " << i + 1 << " " << j + 1 << " " << print_poly(cp.cert.Q[i][j], hv)
                    << "\n";
    for (std::size_t j = 0; j < n; ++j)
        out.buf << "R " << j + 1 << " " << print_poly(cp.cert.R[j], hv) << "\n";
    for (std::size_t i = 0; i < cp.div.J.size(); ++i)
        out.buf << "J " << i + 1 << " " << print_poly(cp.div.J[i], hv) << "\n";
    out.buf << "identity-check "
            << (certificate_identity_holds(cp.F, cp.G, cp.cert) ? "pass" : "fail") << "\n";

    render_constants(out, validated_arch_constants(cp));
    for (const Int& p : cp.bad.primes())
        render_constants(out, constants_at_place(cp.cert, cp.div, cp.F, cp.G, Place::finite(p)));

    if (cp.bad.entries.empty()) {
        out.buf << "bad-primes none\n";
    } else {
        out.buf << "bad-primes";
        for (const Int& p : cp.bad.primes())
            out.buf << " " << p.get_str();
        out.buf << "\n";
        for (const auto& [p, reasons] : cp.bad.entries) {
            out.buf << "bad-prime " << p.get_str() << " reasons";
            for (BadReason r : reasons)
                out.buf << " [" << to_string(r) << "]";
            out.buf << "\n";
        }
    }
    out.flush();
    return 0;
}

void green_row(Output& out, std::size_t idx, const std::vector<Rat>& X, const char* member,
               const GreenValue& gv) {
    out.buf << "point\t" << idx << "\t" << fmt_point(X) << "\t" << member << "\t"
            << gv.place.name() << "\t" << fmt(gv.value) << "\t" << fmt(gv.error_bound) << "\t"
            << green_flag(gv) << "\t" << gv.iterations << "\t" << gv.region << "\n";
}

int cmd_green(const Options& o) {
    Output out(o.out_path);
    header(out, "green", o);
    out.buf << "# member " << o.member << "\n";
    out.buf << "# place " << o.place << "\n";
    out.buf << "# columns point index coords member place value error flag iterations region\n";
    LoadedPair lp = load_pair(o.input);
    CertifiedPair cp = CertifiedPair::build(lp.f, lp.g, o.mmax);
    auto points = load_points(o.points_path, cp.f.n);
    GreenOptions go = green_options(o);
    std::optional<Place> fixed_place;
    if (o.place != "all")
        fixed_place = parse_place(o.place);

    auto eval_at = [&](const std::vector<Rat>& X, const Place& pl) {
        if (o.member == "pair")
            return green_pair(cp, X, pl, go);
        return green_eval(cp, o.member == "first" ? Member::first : Member::second, X, pl, go);
    };

    std::size_t ok = 0;
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
        try {
            if (fixed_place) {
                green_row(out, idx, points[idx], o.member.c_str(),
                          eval_at(points[idx], *fixed_place));
            } else {
                for (const Place& pl : detail::contributing_places(cp, points[idx]))
                    green_row(out, idx, points[idx], o.member.c_str(), eval_at(points[idx], pl));
            }
            ++ok;
        } catch (const std::exception& e) {
            out.buf << "point\t" << idx << "\t" << fmt_point(points[idx]) << "\t" << o.member
                    << "\t-\t-\t-\terror\t0\t" << e.what() << "\n";
        }
    }
    out.flush();
    return (ok > 0 || points.empty()) ? 0 : 1;
}

int cmd_height(const Options& o) {
    Output out(o.out_path);
    header(out, "height", o);
    out.buf << "# member " << o.member << "\n";
    out.buf << "# columns point index coords value error flag places\n";
    out.buf << "# columns local index place value error flag iterations region\n";
    LoadedPair lp = load_pair(o.input);
    CertifiedPair cp = CertifiedPair::build(lp.f, lp.g, o.mmax);
    auto points = load_points(o.points_path, cp.f.n);

    std::size_t ok = 0;
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
        try {
            HeightValue hv =
                o.member == "pair"
                    ? canonical_height_pair(cp, points[idx], o.tol)
                    : canonical_height_forward(
                          cp, o.member == "first" ? Member::first : Member::second,
                          points[idx], o.tol);
            const char* flag =
                hv.exact_zero ? "exact-zero" : (hv.heuristic ? "heuristic" : "rigorous");
            out.buf << "point\t" << idx << "\t" << fmt_point(points[idx]) << "\t"
                    << fmt(hv.value) << "\t" << fmt(hv.error_bound) << "\t" << flag << "\t"
                    << hv.places.size() << "\n";
            for (const auto& pc : hv.places) {
                out.buf << "local\t" << idx << "\t" << pc.place.name() << "\t"
                        << fmt(pc.green.value) << "\t" << fmt(pc.green.error_bound) << "\t"
                        << green_flag(pc.green) << "\t" << pc.green.iterations << "\t"
                        << pc.green.region << "\n";
            }
            ++ok;
        } catch (const std::exception& e) {
            out.buf << "point\t" << idx << "\t" << fmt_point(points[idx])
                    << "\t-\t-\terror\t0\t" << e.what() << "\n";
        }
    }
    out.flush();
    return (ok > 0 || points.empty()) ? 0 : 1;
}

void periodic_rows(Output& out, const PeriodicSet& ps) {
    double max_res = 0;
    for (std::size_t i = 0; i < ps.points.size(); ++i) {
        const auto& z = ps.points[i];
        out.buf << "point\t" << ps.n << "\t" << i << "\t" << fmt(z[0].real()) << "\t"
                << fmt(z[0].imag()) << "\t" << fmt(z[1].real()) << "\t" << fmt(z[1].imag())
                << "\t" << fmt(ps.residuals[i]) << "\t" << ps.multiplicities[i] << "\t";
        if (i < ps.exact_points.size() && ps.exact_points[i])
            out.buf << (*ps.exact_points[i])[0].get_str() << " "
                    << (*ps.exact_points[i])[1].get_str();
        else
            out.buf << "-";
        out.buf << "\n";
        max_res = std::max(max_res, ps.residuals[i]);
    }
    out.buf << "summary\t" << ps.n << "\texpected " << ps.expected_count << "\tfound "
            << ps.found_count << "\tcomplete " << (ps.complete ? "yes" : "no")
            << "\tmax-residual " << fmt(max_res) << "\n";
}

int cmd_periodic(const Options& o) {
    Output out(o.out_path);
    header(out, "periodic", o);
    out.buf << "# mode " << (o.exact ? "exact" : "numeric") << "\n";
    out.buf << "# columns point n index re-x im-x re-y im-y residual multiplicity exact\n";
    MapFile mf = parse_map_file(o.input);
    const PolyMap& f = mf.maps[0].second;

    std::vector<unsigned> ns = o.nlist.empty() ? std::vector<unsigned>{1} : o.nlist;
    NumericOptions nopt;
    nopt.residual_tol = o.tol;
    auto hf = henon_form(f);
    if (!hf)
        throw not_henon_error();
    out.buf << "# map " << detail::henon_description(*hf) << "\n";
    for (unsigned n : ns)
        periodic_rows(out, o.exact ? fixed_points_exact(f, n, o.ncap)
                                   : periodic_points_numeric(f, n, nopt));
    out.flush();
    return 0;
}

int cmd_equidist(const Options& o) {
    Output out(o.out_path);
    header(out, "equidist", o);
    MapFile mf = parse_map_file(o.input);
    const PolyMap& f = mf.maps[0].second;
    std::vector<unsigned> ns = o.nlist.empty() ? std::vector<unsigned>{3, 4, 5, 6} : o.nlist;
    NumericOptions nopt;
    nopt.residual_tol = o.tol;
    out.buf << equidistribution_report(f, ns, default_test_suite(), nopt).render();
    out.flush();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strongly regular pairs: certificates, Green functions, heights, "
                 "periodic points"};
    app.require_subcommand(1);

    Options o;
    if (const char* env = std::getenv("DYNPAIR_PREC")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 16 && v <= 65536)
            config::default_interval_prec = v;
    }

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("input", o.input, "map pair file")->required();
        sub->add_option("--tol", o.tol, "error tolerance for iterative values");
        sub->add_option("--mmax", o.mmax, "certificate degree cap (0 = default bound)");
        sub->add_option("--prec", o.prec, "interval precision in bits (0 = default)");
        sub->add_option("--seed", o.seed, "run seed, recorded in the output");
        sub->add_option("--out", o.out_path, "output file (default stdout)");
        return sub;
    };

    CLI::App* check = add_common(app.add_subcommand("check", "test all strong-regularity "
                                                             "conditions"));
    CLI::App* cert = add_common(
        app.add_subcommand("certificate", "solve and render the joint certificate"));
    cert->add_flag("--force", o.force, "search even when the check fails");
    CLI::App* green = add_common(
        app.add_subcommand("green", "local Green values at a batch of points"));
    green->add_option("points", o.points_path, "points file")->required();
    green->add_option("--place", o.place, "arch, a prime, or all (contributing places)");
    green->add_option("--member", o.member, "first, second, or pair")
        ->check(CLI::IsMember({"first", "second", "pair"}));
    green->add_option("--iter-cap", o.iter_cap, "iteration cap override");
    CLI::App* height = add_common(
        app.add_subcommand("height", "canonical heights at a batch of points"));
    height->add_option("points", o.points_path, "points file")->required();
    height->add_option("--member", o.member, "pair height, or one-sided first/second")
        ->check(CLI::IsMember({"first", "second", "pair"}));
    CLI::App* periodic = add_common(
        app.add_subcommand("periodic", "harvest periodic points of the first map"));
    periodic->add_option("--n", o.nlist, "periods to harvest (repeatable)");
    periodic->add_flag("--exact", o.exact, "resultant elimination instead of seeding");
    periodic->add_option("--ncap", o.ncap, "largest period for exact elimination");
    CLI::App* equidist = add_common(
        app.add_subcommand("equidist", "equidistribution report over a period list"));
    equidist->add_option("--n", o.nlist, "period list (default 3 4 5 6)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (o.prec)
            config::default_interval_prec = o.prec;
        if (check->parsed())
            return cmd_check(o);
        if (cert->parsed())
            return cmd_certificate(o);
        if (green->parsed())
            return cmd_green(o);
        if (height->parsed())
            return cmd_height(o);
        if (periodic->parsed())
            return cmd_periodic(o);
        if (equidist->parsed())
            return cmd_equidist(o);
    } catch (const parse_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const resource_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const term_budget_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::bad_alloc&) {
        std::cerr << "resource limit: out of memory\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
