#pragma once

#include <dynpair/certificate.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dynpair {

/// The individual strong-regularity conditions a pair can fail.
enum class Condition {
    joint_regularity,
    c_finiteness,
    commutation,
    degrees,
    stability,
    degree_drop,
};

inline const char* to_string(Condition c) {
    switch (c) {
        case Condition::joint_regularity: return "joint regularity";
        case Condition::c_finiteness: return "c-finiteness";
        case Condition::commutation: return "commutation";
        case Condition::degrees: return "degrees >= 2";
        case Condition::stability: return "algebraic stability";
        case Condition::degree_drop: return "degree drop";
    }
    return "?";
}

enum class CFiniteness { automorphism_derived, assumed, unknown };

inline const char* to_string(CFiniteness t) {
    switch (t) {
        case CFiniteness::automorphism_derived: return "automorphism-derived";
        case CFiniteness::assumed: return "assumed";
        case CFiniteness::unknown: return "unknown";
    }
    return "?";
}

/// Outcome of testing every strong-regularity condition independently.
/// The pair is strongly regular exactly when `failed` is empty; a missing
/// certificate is always a bounded verdict (search stopped at M_bound), not
/// a disproof.
struct RegularityReport {
    std::optional<JointCertificate> certificate;
    unsigned long M_bound = 0;  // largest certificate degree searched
    bool commutes = false;
    long d_f = -1, d_g = -1;
    bool degrees_ge_2 = false;
    unsigned stable_up_to = 0;  // largest m <= m_max with full degree growth
    unsigned m_max = 0;
    long d_fg = -1;  // deg(f∘g), evidence for the drop condition
    bool degree_drop = false;
    CFiniteness c_finiteness = CFiniteness::unknown;
    std::vector<Condition> failed;

    bool strongly_regular() const { return failed.empty(); }
};

/// Test all strong-regularity conditions for (f, g). m_max bounds the
/// algebraic-stability check, M_max the certificate search (0 = default
/// bound d_f*d_g + n).
inline RegularityReport check_strongly_regular(const PolyMap& f, const PolyMap& g,
                                               unsigned m_max = 3, unsigned long M_max = 0) {
    if (f.n != g.n)
        throw dimension_error("regularity check needs maps of equal dimension");
    RegularityReport rep;
    rep.m_max = m_max;
    rep.d_f = f.degree();
    rep.d_g = g.degree();
    rep.degrees_ge_2 = rep.d_f >= 2 && rep.d_g >= 2;

    PolyMap fg = compose(f, g);
    rep.commutes = fg == compose(g, f);
    rep.d_fg = fg.degree();
    rep.degree_drop = rep.d_fg < std::min(rep.d_f, rep.d_g);

    auto stable_count = [&](const PolyMap& h, long d) {
        std::vector<long> seq = degree_sequence(h, m_max);
        unsigned m = 0;
        for (std::size_t k = 0; k < seq.size(); ++k) {
            if (seq[k] != static_cast<long>(pow_int(Int(d), k + 1).get_si()))
                break;
            m = static_cast<unsigned>(k + 1);
        }
        return m;
    };
    rep.stable_up_to = std::min(stable_count(f, rep.d_f), stable_count(g, rep.d_g));

    PolyMap id = PolyMap::identity(f.n);
    rep.c_finiteness = (fg == id && compose(g, f) == id) ? CFiniteness::automorphism_derived
                                                         : CFiniteness::assumed;

    rep.M_bound = M_max;
    try {
        HomogMap F = homogenize(f);
        HomogMap G = homogenize(g);
        if (rep.M_bound == 0)
            rep.M_bound = F.d * G.d + static_cast<unsigned long>(f.n);
        rep.certificate = find_certificate(F, G, rep.M_bound);
    } catch (const resource_error& e) {
        rep.M_bound = e.m_reached;
        rep.c_finiteness = CFiniteness::unknown;
    } catch (const dimension_error&) {
        // constant components cannot be homogenized; no certificate
    }

    if (!rep.certificate)
        rep.failed.push_back(Condition::joint_regularity);
    if (!rep.commutes)
        rep.failed.push_back(Condition::commutation);
    if (!rep.degrees_ge_2)
        rep.failed.push_back(Condition::degrees);
    if (rep.stable_up_to < m_max)
        rep.failed.push_back(Condition::stability);
    if (!rep.degree_drop)
        rep.failed.push_back(Condition::degree_drop);
    return rep;
}

/// Positive integer solution of l1 + l2 = n, d_plus^l2 = d_minus^l1, if any.
/// The solution is unique when it exists; nullopt reports incompatibility.
inline std::optional<std::pair<unsigned long, unsigned long>> solve_power_exponents(
    unsigned long n, unsigned long d_plus, unsigned long d_minus) {
    if (d_plus < 2 || d_minus < 2)
        throw std::invalid_argument("power exponents need degrees >= 2");
    std::optional<std::pair<unsigned long, unsigned long>> found;
    for (unsigned long l1 = 1; l1 + 1 <= n; ++l1) {
        unsigned long l2 = n - l1;
        if (pow_int(Int(d_plus), l2) == pow_int(Int(d_minus), l1)) {
            if (found)
                throw std::logic_error("power exponent solution is not unique");
            found = {l1, l2};
        }
    }
    return found;
}

struct power_error : std::runtime_error {
    enum Kind { no_integer_solution, not_inverse } kind;
    power_error(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

/// Equal-degree pair S = (f^{l2}, f_inv^{l1}) built from a regular
/// automorphism, with the strong-regularity report for S attached.
struct AutomorphismPair {
    PolyMap f, f_inv;
    unsigned long l1 = 0, l2 = 0;
    std::pair<PolyMap, PolyMap> S;
    unsigned long r_bound = 0;  // deg f * deg f^-1 bounds the D-ratio
    RegularityReport report;
};

inline AutomorphismPair power_pair(const PolyMap& f, const PolyMap& f_inv) {
    PolyMap id = PolyMap::identity(f.n);
    if (!(compose(f, f_inv) == id) || !(compose(f_inv, f) == id))
        throw power_error(power_error::not_inverse, "second map is not the inverse of the first");
    long d_plus = f.degree(), d_minus = f_inv.degree();
    auto exps = solve_power_exponents(f.n, static_cast<unsigned long>(d_plus),
                                      static_cast<unsigned long>(d_minus));
    if (!exps)
        throw power_error(power_error::no_integer_solution,
                          "no positive integers satisfy l1 + l2 = n with equal power degrees");
    auto [l1, l2] = *exps;
    AutomorphismPair ap{f,
                        f_inv,
                        l1,
                        l2,
                        {pow_map(f, l2), pow_map(f_inv, l1)},
                        static_cast<unsigned long>(d_plus * d_minus),
                        {}};
    ap.report = check_strongly_regular(ap.S.first, ap.S.second);
    // S comes from a verified automorphism, so the D-ratio identity applies
    // even though the members are not mutually inverse.
    ap.report.c_finiteness = CFiniteness::automorphism_derived;
    return ap;
}

/// Structured text export: one line per condition with its evidence.
inline std::string report_document(const RegularityReport& rep) {
    std::string out;
    auto ok = [&](Condition c) {
        for (Condition fc : rep.failed)
            if (fc == c)
                return "fail";
        return "pass";
    };
    out += "verdict ";
    out += rep.strongly_regular() ? "strongly-regular" : "failed";
    if (!rep.strongly_regular()) {
        out += " (";
        for (std::size_t i = 0; i < rep.failed.size(); ++i)
            out += std::string(i ? ", " : "") + to_string(rep.failed[i]);
        out += ")";
    }
    out += "\n";
    out += "joint-regularity " + std::string(ok(Condition::joint_regularity));
    if (rep.certificate)
        out += " certificate-degree " + std::to_string(rep.certificate->M);
    else
        out += " searched-up-to " + std::to_string(rep.M_bound);
    out += "\n";
    out += "c-finiteness " + std::string(to_string(rep.c_finiteness)) + "\n";
    out += "commutation " + std::string(ok(Condition::commutation)) + "\n";
    out += "degrees " + std::to_string(rep.d_f) + " " + std::to_string(rep.d_g) + " " +
           ok(Condition::degrees) + "\n";
    out += "stability up-to " + std::to_string(rep.stable_up_to) + " of " +
           std::to_string(rep.m_max) + " " + ok(Condition::stability) + "\n";
    out += "degree-drop deg(f∘g) " + std::to_string(rep.d_fg) + " " +
           ok(Condition::degree_drop) + "\n";
    return out;
}

}  // namespace dynpair
