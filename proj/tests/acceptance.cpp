// Acceptance run: one PASS/FAIL line per criterion. Optional arguments select
// criteria by number, e.g. `acceptance 1 7`.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "bdhomog/cell_formulas.hpp"
#include "bdhomog/integrands.hpp"
#include "bdhomog/oracle1d.hpp"
#include "bdhomog/solver.hpp"
#include "bdhomog/stochastic.hpp"

using namespace bdhomog;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

IntegrandPair lib(LibraryName n, int dim = 2) {
    LibraryParams prm;
    prm.dim = dim;
    return make_library_integrand(n, prm);
}

const std::vector<double> kR{4.0, 8.0, 16.0};
const Vec e1{1.0, 0.0}, e2{0.0, 1.0};
const double kTolEnergy = SolveOptions{}.tol_energy;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Outcome jensen_exactness() {
    const auto t0 = std::chrono::steady_clock::now();
    const IntegrandPair p = lib(LibraryName::homogeneous_norm);
    double worst = 0.0;
    for (const SymMatrix& A : {sym_tensor(e1, e1), SymMatrix::identity(2), sym_tensor(e1, e2)}) {
        const ConvergenceRecord rec = estimate_f_lim(p, A, kR, Vec(2));
        for (double v : rec.normalized_values) worst = std::max(worst, std::abs(v - A.norm()) / A.norm());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst <= 1e-6 && secs < 60.0, "max rel err " + fmt(worst) + " (<= 1e-6), runtime " + fmt(secs) + " s (< 60)"};
}

Outcome surface_squeeze() {
    const IntegrandPair p = lib(LibraryName::homogeneous_norm);
    bool ok = true;
    double worst_band = 0.0, worst_spread = 0.0;
    for (const Vec& nu : {e2, Vec{1.0, 1.0} * (1.0 / std::sqrt(2.0))}) {
        const ConvergenceRecord rec = estimate_g_lim(p, e1, nu, kR, Vec(2));
        const double zn = sym_tensor(e1, nu).norm();
        for (std::size_t i = 0; i < kR.size(); ++i) {
            const double band = 5.0 * rec.h_values[i] / kR[i];
            const double dev = std::abs(rec.normalized_values[i] / zn - 1.0);
            worst_band = std::max(worst_band, dev / band);
            ok = ok && dev <= band;
        }
        const auto& v = rec.normalized_values;
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        worst_spread = std::max(worst_spread, (*hi - *lo) / std::abs(v.back()));
        ok = ok && plateau(v, 0.02);
    }
    return {ok, "worst deviation " + fmt(worst_band) + " of the 5h/r band, plateau spread " + fmt(worst_spread) +
                    " (<= 0.02)"};
}

Outcome scaling_identity() {
    const IntegrandPair p = lib(LibraryName::checkerboard);
    bool ok = true;
    std::string d;
    for (double eps : {0.5, 0.25}) {
        const ScalingReport r = check_scaling_identity(p, sym_tensor(e1, e1), eps, Vec(2), 1.0);
        const double allowed = 1e-6 + 2.0 * kTolEnergy;
        ok = ok && r.relative_gap <= allowed;
        d += "eps=" + fmt(eps) + " gap " + fmt(r.relative_gap) + "; ";
    }
    return {ok, d + "allowed " + fmt(1e-6 + 2.0 * kTolEnergy)};
}

Outcome surface_scaling() {
    const IntegrandPair p = lib(LibraryName::smooth_nonhomogeneous);
    bool ok = true;
    std::string d;
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {0.25, 0.125, 0.0625}) {
        const ScalingReport r = check_surface_scaling(p, e1, e2, eps, Vec(2), 1.0);
        ok = ok && r.pass && std::abs(r.difference) <= prev;
        prev = std::abs(r.difference);
        d += "eps=" + fmt(eps) + " |diff| " + fmt(std::abs(r.difference)) + " <= " + fmt(r.bound) + "; ";
    }
    return {ok, d + "non-increasing in eps"};
}

Outcome gj_identity() {
    const std::vector<std::pair<Vec, Vec>> samples{
        {e1, e2}, {Vec{1.0, 0.5}, Vec{0.6, 0.8}}, {Vec{0.0, 1.0}, Vec{1.0, 1.0} * (1.0 / std::sqrt(2.0))}};
    bool ok = true;
    double worst = 0.0;
    for (LibraryName n : {LibraryName::homogeneous_norm, LibraryName::laminate}) {
        const GJReport rep = check_gj_identity(lib(n), samples, kR, Vec(2));
        for (const GJSample& s : rep.samples) worst = std::max(worst, s.gap);
        ok = ok && rep.pass && rep.samples.size() == 3;
    }
    return {ok && worst <= 0.05, "worst gap " + fmt(worst) + " at r=16 (<= 0.05)"};
}

Outcome homogeneity_symmetry() {
    bool ok = true, symmetric = true;
    double worst = 0.0;
    const Vec nu = Vec{1.0, 1.0} * (1.0 / std::sqrt(2.0));
    for (LibraryName n : {LibraryName::homogeneous_norm, LibraryName::laminate, LibraryName::checkerboard}) {
        const IntegrandPair p = lib(n);
        const ConvergenceRecord g = estimate_g_lim(p, e1, nu, kR, Vec(2));
        const ConvergenceRecord g2 = estimate_g_lim(p, e1 * 2.0, nu, kR, Vec(2));
        const ConvergenceRecord gm = estimate_g_lim(p, -e1, -nu, kR, Vec(2));
        for (std::size_t i = 0; i < kR.size(); ++i) {
            const double scale = 2.0 * std::abs(g.normalized_values[i]);
            const double d = std::abs(g2.normalized_values[i] - 2.0 * g.normalized_values[i]);
            worst = std::max(worst, scale > 0.0 ? d / scale : d);
            ok = ok && d <= 1e-9 * scale;
        }
        symmetric = symmetric && gm.normalized_values == g.normalized_values && gm.r_values == g.r_values;
    }
    return {ok && symmetric, "worst |g(2z)-2g(z)|/|2g| " + fmt(worst) + " (<= 1e-9), (-z,-nu) records identical: " +
                                 (symmetric ? "yes" : "no")};
}

Outcome oracle_equivalence() {
    bool ok = true;
    std::string d;
    const std::vector<double> hs{0.125, 0.0625, 0.03125, 0.015625};
    for (const std::string& n : oracle_profile_names()) {
        const OracleReport r = validate_lattice_against_oracle(oracle_profile(n), 1.0, 1.0, hs);
        ok = ok && r.rows.back().rel_gap <= 0.02;
        d += n + " " + fmt(r.rows.back().rel_gap) + "; ";
    }

    // tiny instances whose minimizers lie inside the quantization box
    struct Tiny {
        IntegrandPair pair;
        Grid grid;
        BoundaryDatum datum;
        std::vector<double> q;
    };
    std::vector<Tiny> tiny;
    tiny.push_back({lib(LibraryName::homogeneous_norm), Grid::cube(2, 0.5, 0.25, Vec(2)),
                    BoundaryDatum::affine(SymMatrix(2, {1.0, 0.2, 0.2, 0.0})),
                    {-0.2, -0.1, -0.05, 0.0, 0.05, 0.1, 0.2}});
    tiny.push_back({lib(LibraryName::checkerboard), Grid::cube(2, 1.5, 0.5, Vec{0.25, 0.25}),
                    BoundaryDatum::affine(SymMatrix(2, {0.5, 0.0, 0.0, 0.0})), {-0.1, -0.05, 0.0, 0.05, 0.1}});
    for (const std::string& n : oracle_profile_names())
        tiny.push_back({pair_1d(oracle_profile(n)), Grid::box(Vec{0.0}, Vec{1.0}, 0.25),
                        BoundaryDatum::affine(SymMatrix(1, {1.0})), {-0.25, -0.125, 0.0, 0.125, 0.25}});
    double worst = 0.0;
    for (const Tiny& t : tiny) {
        const BruteForceResult bf = brute_force_min(t.pair, t.grid, t.datum, t.q);
        const double e = minimize(t.pair, t.grid, t.datum).energy;
        const double slack = kTolEnergy * std::max(1.0, bf.energy);
        ok = ok && e >= bf.energy - bf.quantization_gap - slack && e <= bf.energy + slack;
        worst = std::max(worst, std::abs(e - bf.energy));
    }
    return {ok, "finest-h gaps " + d + "brute force on " + std::to_string(tiny.size()) + " tiny instances, max |diff| " +
                    fmt(worst)};
}

Outcome subadditive_process() {
    const MarkLaw law = MarkLaw::bernoulli(0.5, 1.0, 2.0);
    int passed = 0;
    double worst_cov = 0.0, worst_slack = 0.0;
    bool bounds = true;
    const std::vector<SubadditiveTriple> triples = random_triples(7, 20, 2);
    for (const SubadditiveTriple& t : triples) {
        const TripleOutcome o = run_triple(law, t);
        const double n = static_cast<double>(t.partition.size());
        const bool sub_ok = o.subadditivity.slack >= -n * kTolEnergy * std::max(1.0, o.subadditivity.parts_sum);
        const bool cov_ok = o.covariance.gap <= 2.0 * kTolEnergy;
        bounds = bounds && o.bound_ok;
        passed += sub_ok && cov_ok && o.bound_ok;
        worst_cov = std::max(worst_cov, o.covariance.gap);
        worst_slack = std::min(worst_slack, o.subadditivity.slack);
    }
    return {passed == 20 && triples.size() == 20,
            std::to_string(passed) + "/20 triples, min slack " + fmt(worst_slack) + ", max covariance gap " +
                fmt(worst_cov) + ", bounds " + (bounds ? "ok" : "violated")};
}

Outcome ergodic_averaging() {
    const auto t0 = std::chrono::steady_clock::now();
    ErgodicTarget target;
    target.A = sym_tensor(e1, e1);
    const ErgodicReport rep =
        ergodic_average(MarkLaw::bernoulli(0.5, 1.0, 2.0), target, kR, seed_range(1, 16), Vec(2), 0.125, {}, 0);
    const bool trend = rep.stddev.back() <= rep.stddev.front();

    const ErgodicReport deg =
        ergodic_average(MarkLaw::bernoulli(1.0, 1.0, 2.0), target, kR, seed_range(1, 8), Vec(2), 0.125, {}, 0);
    const bool zero_std = std::all_of(deg.stddev.begin(), deg.stddev.end(), [](double s) { return s == 0.0; });

    const ErgodicReport per =
        ergodic_average(MarkLaw::periodic(1.0, 2.0), target, kR, seed_range(1, 8), Vec(2), 0.125, {}, 0);
    const ConvergenceRecord det = estimate_f_lim(lib(LibraryName::checkerboard), target.A, kR, Vec(2));
    bool identical = true;
    for (const auto& row : per.values) identical = identical && row == det.normalized_values;

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {trend && zero_std && identical && rep.bounds_ok && secs < 1800.0,
            "std r=4 " + fmt(rep.stddev.front()) + " -> r=16 " + fmt(rep.stddev.back()) + ", degenerate std zero: " +
                (zero_std ? "yes" : "no") + ", single-point law bit-identical: " + (identical ? "yes" : "no") +
                ", runtime " + fmt(secs) + " s (< 1800)"};
}

Outcome gamma_probe() {
    const SymMatrix A = sym_tensor(e1, e1);
    const std::vector<double> eps{0.5, 0.25, 0.125, 0.0625};
    const GammaReport hom = gamma_minima_check(lib(LibraryName::homogeneous_norm), eps, Vec(2), 1.0, A, kR);
    const bool exact = std::all_of(hom.minima.begin(), hom.minima.end(), [&](double m) { return m == hom.minima[0]; });
    const GammaReport lam = gamma_minima_check(lib(LibraryName::laminate), eps, Vec(2), 1.0, A, kR);
    const double gap = lam.relative_gaps.back();
    return {exact && gap <= 0.05, std::string("homogeneous minima identical: ") + (exact ? "yes" : "no") +
                                      ", laminate gap at eps=1/16 " + fmt(gap) + " (<= 0.05)"};
}

Outcome integrand_validator() {
    bool ok = true;
    std::string failed;
    for (LibraryName n : {LibraryName::homogeneous_norm, LibraryName::smooth_nonhomogeneous, LibraryName::laminate,
                          LibraryName::checkerboard, LibraryName::random_checkerboard,
                          LibraryName::hyperplane_weak_surface}) {
        LibraryParams prm;
        if (n == LibraryName::random_checkerboard) prm.field = sample_field(3, MarkLaw::bernoulli(0.5, 1.0, 2.0), 2);
        const IntegrandReport rep = check_integrand(make_library_integrand(n, prm), SamplePlan::standard(2));
        if (!rep.all_pass()) {
            ok = false;
            failed += to_string(n) + " ";
        }
    }
    const IntegrandReport q = check_integrand(quadratic_counterexample(2), SamplePlan::standard(2));
    const ConditionResult* f2 = q.find("f2");
    const bool rejected = !q.all_pass() && f2 && !f2->pass && f2->first_failure.find("|A|=2.000000") != std::string::npos;
    return {ok && rejected, std::string("library pairs ") + (ok ? "all pass" : "failing: " + failed) +
                                ", quadratic rejected by " + (f2 && !f2->pass ? "f2 at " + f2->first_failure : "?")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"jensen_exactness", jensen_exactness},
        {"surface_squeeze", surface_squeeze},
        {"scaling_identity", scaling_identity},
        {"surface_scaling_bound", surface_scaling},
        {"g_equals_f_recession", gj_identity},
        {"homogeneity_symmetry", homogeneity_symmetry},
        {"oracle_1d", oracle_equivalence},
        {"subadditive_process", subadditive_process},
        {"ergodic_averaging", ergodic_averaging},
        {"gamma_minima", gamma_probe},
        {"integrand_validator", integrand_validator},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.pass;
    }
    std::printf("%d failure(s)\n", failures);
    return failures ? 1 : 0;
}
