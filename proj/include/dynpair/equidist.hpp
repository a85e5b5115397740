#pragma once

#include <dynpair/periodic.hpp>

#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

namespace dynpair {

struct TestFunction {
    std::string name;
    std::function<double(std::complex<double>, std::complex<double>)> eval;
};

/// Smooth compactly supported bump exp(1 - 1/(1 - r^2)) on r < 1, with
/// r^2 = (|x - cx|^2 + |y - cy|^2) / rad^2.
inline double bump_value(std::complex<double> x, std::complex<double> y, double cx, double cy,
                         double rad) {
    double r2 = (std::norm(x - cx) + std::norm(y - cy)) / (rad * rad);
    if (r2 >= 1)
        return 0;
    return std::exp(1 - 1 / (1 - r2));
}

/// Coordinate moments plus two fixed bumps; the regression goldens in the
/// tests are tied to exactly these functions.
inline std::vector<TestFunction> default_test_suite() {
    using C = std::complex<double>;
    return {
        {"Re x", [](C x, C) { return x.real(); }},
        {"|x|^2", [](C x, C) { return std::norm(x); }},
        {"Re y", [](C, C y) { return y.real(); }},
        {"|y|^2", [](C, C y) { return std::norm(y); }},
        {"Re x conj y", [](C x, C y) { return (x * std::conj(y)).real(); }},
        {"bumpA", [](C x, C y) { return bump_value(x, y, 0.0, 0.0, 4.0); }},
        {"bumpB", [](C x, C y) { return bump_value(x, y, 2.0, -1.0, 3.0); }},
    };
}

struct EmpiricalMeasure {
    std::vector<std::array<std::complex<double>, 2>> support;

    double weight() const { return 1.0 / static_cast<double>(support.size()); }
};

inline EmpiricalMeasure empirical_measure(const PeriodicSet& ps) {
    if (ps.points.empty())
        throw std::invalid_argument("empirical measure needs a nonempty point set");
    return {ps.points};
}

/// Union of supports with duplicates removed, uniform weights renormalized.
inline EmpiricalMeasure merge_measures(const std::vector<EmpiricalMeasure>& ms,
                                       double dedupe_tol = 1e-8) {
    EmpiricalMeasure out;
    for (const auto& m : ms)
        for (const auto& pt : m.support) {
            bool dup = false;
            for (const auto& q : out.support)
                if (std::abs(q[0] - pt[0]) < dedupe_tol && std::abs(q[1] - pt[1]) < dedupe_tol)
                    dup = true;
            if (!dup)
                out.support.push_back(pt);
        }
    if (out.support.empty())
        throw std::invalid_argument("empirical measure needs a nonempty point set");
    return out;
}

inline double measure_average(const EmpiricalMeasure& mu, const TestFunction& phi) {
    double s = 0;
    for (const auto& pt : mu.support)
        s += phi.eval(pt[0], pt[1]);
    return s / static_cast<double>(mu.support.size());
}

/// Round to 12 decimal places through the printed representation, so
/// recorded averages and their successive differences are reproducible.
inline double quantize12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    return std::strtod(buf, nullptr);
}

struct TestFunctionReport {
    std::string map_description;
    std::vector<unsigned> periods;
    std::vector<PeriodicSet> sets;  // parallel to periods
    std::vector<std::string> phi_names;
    // tables indexed [phi][period index]
    std::vector<std::vector<double>> averages;     // quantized to 12 decimals
    std::vector<std::vector<double>> differences;  // |I_{n+1} - I_n| from the recorded values
    std::vector<std::vector<double>> invariance;   // |avg phi(f z) - avg phi(z)|
    std::vector<double> support_defect;            // per period: Hausdorff-style push-forward gap

    std::string render() const;
};

/// Max over support points z of the distance from f(z) to the nearest
/// support point; 0 (up to tolerance) iff the set is f-invariant.
inline double support_invariance_defect(const HenonForm& hf, const PeriodicSet& ps) {
    double worst = 0;
    for (const auto& z : ps.points) {
        std::complex<double> fx = z[1];
        std::complex<double> fy = hf.p_eval(z[1]) - std::complex<double>(hf.a.get_d()) * z[0];
        double best = 1e300;
        for (const auto& q : ps.points)
            best = std::min(best, std::max(std::abs(q[0] - fx), std::abs(q[1] - fy)));
        worst = std::max(worst, best);
    }
    return worst;
}

inline TestFunctionReport equidistribution_report(
    const PolyMap& f, const std::vector<unsigned>& n_list,
    const std::vector<TestFunction>& suite = default_test_suite(),
    const NumericOptions& opt = {}) {
    auto hf = henon_form(f);
    if (!hf)
        throw not_henon_error();

    TestFunctionReport rep;
    rep.periods = n_list;
    for (unsigned n : n_list)
        rep.sets.push_back(periodic_points_numeric(f, n, opt));
    if (!rep.sets.empty())
        rep.map_description = rep.sets.front().map_description;

    for (const auto& phi : suite)
        rep.phi_names.push_back(phi.name);
    rep.averages.assign(suite.size(), {});
    rep.differences.assign(suite.size(), {});
    rep.invariance.assign(suite.size(), {});

    const std::complex<double> a(hf->a.get_d());
    for (std::size_t ni = 0; ni < rep.sets.size(); ++ni) {
        const PeriodicSet& ps = rep.sets[ni];
        EmpiricalMeasure mu = empirical_measure(ps);
        rep.support_defect.push_back(support_invariance_defect(*hf, ps));
        for (std::size_t pi = 0; pi < suite.size(); ++pi) {
            double avg = measure_average(mu, suite[pi]);
            rep.averages[pi].push_back(quantize12(avg));
            double pushed = 0;
            for (const auto& z : mu.support) {
                std::complex<double> fx = z[1];
                std::complex<double> fy = hf->p_eval(z[1]) - a * z[0];
                pushed += suite[pi].eval(fx, fy);
            }
            pushed /= static_cast<double>(mu.support.size());
            rep.invariance[pi].push_back(std::fabs(pushed - avg));
        }
    }
    for (std::size_t pi = 0; pi < suite.size(); ++pi)
        for (std::size_t ni = 0; ni + 1 < rep.periods.size(); ++ni)
            rep.differences[pi].push_back(
                std::fabs(rep.averages[pi][ni + 1] - rep.averages[pi][ni]));
    return rep;
}

inline std::string TestFunctionReport::render() const {
    std::ostringstream os;
    char buf[64];
    os << "# equidistribution report\n";
    os << "# map: " << map_description << "\n";
    os << "# seeding: Kronecker sequence (x^5 = x + 1), offset 0.5, over the filtration square\n";
    os << "# genericity: the harvested periodic sequence is assumed generic, not certified\n";
    os << "n\texpected\tfound\tcomplete\tmax_residual\n";
    for (std::size_t ni = 0; ni < periods.size(); ++ni) {
        const PeriodicSet& ps = sets[ni];
        double mr = 0;
        for (double r : ps.residuals)
            mr = std::max(mr, r);
        std::snprintf(buf, sizeof buf, "%.3e", mr);
        os << periods[ni] << '\t' << ps.expected_count << '\t' << ps.found_count << '\t'
           << (ps.complete ? "yes" : "NO") << '\t' << buf << '\n';
    }
    auto row = [&](const std::string& head, const std::vector<double>& vals, const char* fmt) {
        os << head;
        for (double v : vals) {
            std::snprintf(buf, sizeof buf, fmt, v);
            os << '\t' << buf;
        }
        os << '\n';
    };
    os << "phi";
    for (unsigned n : periods)
        os << "\tI_" << n;
    os << '\n';
    for (std::size_t pi = 0; pi < phi_names.size(); ++pi)
        row(phi_names[pi], averages[pi], "%+.12f");
    os << "phi";
    for (std::size_t ni = 0; ni + 1 < periods.size(); ++ni)
        os << "\tD_" << periods[ni];
    os << '\n';
    for (std::size_t pi = 0; pi < phi_names.size(); ++pi)
        row(phi_names[pi], differences[pi], "%.12f");
    os << "phi";
    for (unsigned n : periods)
        os << "\tdefect_" << n;
    os << '\n';
    for (std::size_t pi = 0; pi < phi_names.size(); ++pi)
        row(phi_names[pi], invariance[pi], "%.3e");
    return os.str();
}

}  // namespace dynpair
