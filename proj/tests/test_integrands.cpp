#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bdhomog/integrands.hpp"
#include "doctest.h"

using namespace bdhomog;

namespace {

IntegrandPair library(LibraryName n, int dim = 2) {
    LibraryParams p;
    p.dim = dim;
    if (n == LibraryName::random_checkerboard) p.field = RandomField(5, MarkLaw::bernoulli(0.5, 1.0, 2.0), dim);
    return make_library_integrand(n, p);
}

const LibraryName kAll[] = {LibraryName::homogeneous_norm, LibraryName::smooth_nonhomogeneous,
                            LibraryName::laminate,         LibraryName::checkerboard,
                            LibraryName::random_checkerboard, LibraryName::hyperplane_weak_surface};

}  // namespace

TEST_CASE("recession estimate of 1-homogeneous f has zero deviation") {
    const IntegrandPair p = library(LibraryName::homogeneous_norm);
    const RateReport r = recession_estimate(p, Vec(2), SymMatrix::identity(2), default_t_grid());
    CHECK(r.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    for (double dev : r.deviations) CHECK(dev <= 4.0 * std::numeric_limits<double>::epsilon());
    CHECK_FALSE(r.violation);
}

TEST_CASE("recession estimate of the smooth integrand") {
    const IntegrandPair p = library(LibraryName::smooth_nonhomogeneous);
    const RateReport r = recession_estimate(p, Vec(2), SymMatrix(2, {1, 0, 0, 0}), {1.0, 10.0, 100.0, 1e4});
    CHECK(std::abs(r.value - 1.0) < 1e-4);
    CHECK_FALSE(r.violation);
}

TEST_CASE("checkerboard bulk value is a(x)|A|") {
    const IntegrandPair p = library(LibraryName::checkerboard);
    const Vec x{0.25, 0.25};
    CHECK(p.eval_f(x, SymMatrix::identity(2)) == doctest::Approx(checkerboard_weight(x, 1.0, 2.0) * std::sqrt(2.0)));
}

TEST_CASE("g_infinity estimate") {
    const IntegrandPair p = library(LibraryName::homogeneous_norm);
    const Vec z{1.0, 2.0}, nu{0.0, 1.0};
    CHECK(g_infinity_estimate(p, Vec(2), z, nu, default_t_grid()).value ==
          doctest::Approx(sym_tensor(z, nu).norm()).epsilon(1e-15));
    CHECK(g_infinity_estimate(p, Vec(2), Vec(2), nu, default_t_grid()).value == 0.0);

    // bounded perturbation of the norm vanishes in the limit
    IntegrandPair q = p;
    q.g.eval = [](const Vec&, const Vec& z2, const Vec& n2) {
        const double m = sym_tensor(z2, n2).norm();
        return std::min(m, 1.0) + m;
    };
    const RateReport r = g_infinity_estimate(q, Vec(2), z, nu, default_t_grid());
    CHECK(std::abs(r.value - sym_tensor(z, nu).norm()) <= 1.0 / 1e6 + 1e-15);
}

TEST_CASE("every library pair passes the standard plan") {
    const SamplePlan plan = SamplePlan::standard(2);
    for (LibraryName n : kAll) {
        const IntegrandReport rep = check_integrand(library(n), plan);
        INFO(to_string(n));
        CHECK(rep.all_pass());
        for (const auto& c : rep.conditions) CHECK(c.checked > 0);
    }
}

TEST_CASE("homogeneous pair passes in d = 1 and d = 3") {
    for (int d : {1, 3}) CHECK(check_integrand(library(LibraryName::homogeneous_norm, d), SamplePlan::standard(d, 200)).all_pass());
}

TEST_CASE("smooth integrand with c6 = 2 passes (f4)") {
    IntegrandPair p = library(LibraryName::smooth_nonhomogeneous);
    p.consts.c6 = 2.0;
    const IntegrandReport rep = check_integrand(p, SamplePlan::standard(2));
    REQUIRE(rep.find("f4") != nullptr);
    CHECK(rep.find("f4")->pass);
}

TEST_CASE("quadratic integrand fails (f2) first at |A| = 2") {
    const IntegrandReport rep = check_integrand(quadratic_counterexample(2), SamplePlan::standard(2));
    CHECK_FALSE(rep.all_pass());
    const ConditionResult* f2 = rep.find("f2");
    REQUIRE(f2 != nullptr);
    CHECK_FALSE(f2->pass);
    CHECK(f2->first_failure.find("|A|=2.000000") != std::string::npos);
    const auto failed = rep.failed();
    CHECK(std::find(failed.begin(), failed.end(), "f2") != failed.end());
}

TEST_CASE("rescale_pair substitutions") {
    const IntegrandPair cb = library(LibraryName::checkerboard);
    const IntegrandPair cbe = rescale_pair(cb, 0.5);
    const SymMatrix A = SymMatrix::identity(2);
    CHECK(cbe.eval_f(Vec{0.25, 0.0}, A) == cb.eval_f(Vec{0.5, 0.0}, A));

    const IntegrandPair hom = library(LibraryName::homogeneous_norm);
    const IntegrandPair home = rescale_pair(hom, 0.3);
    const Vec z{0.3, -1.0}, nu{0.6, 0.8};
    CHECK(home.eval_g(Vec{0.1, 0.2}, z, nu) == doctest::Approx(hom.eval_g(Vec{0.1, 0.2}, z, nu)).epsilon(1e-14));

    IntegrandPair capped = hom;
    capped.g.eval = [](const Vec&, const Vec& z2, const Vec& n2) { return std::min(sym_tensor(z2, n2).norm(), 1.0); };
    const IntegrandPair ce = rescale_pair(capped, 0.1);
    CHECK(ce.eval_g(Vec(2), Vec{0.05, 0.0}, Vec{1.0, 0.0}) == doctest::Approx(0.05).epsilon(1e-14));

    CHECK_THROWS_AS(rescale_pair(hom, 0.0), std::invalid_argument);
}

TEST_CASE("rescale_pair composes") {
    const IntegrandPair cb = library(LibraryName::checkerboard);
    const IntegrandPair twice = rescale_pair(rescale_pair(cb, 0.5), 0.25);
    const IntegrandPair once = rescale_pair(cb, 0.125);
    const SamplePlan plan = SamplePlan::standard(2, 100);
    for (std::size_t i = 0; i < plan.size(); ++i) {
        CHECK(twice.eval_f(plan.xs[i], plan.As[i]) == doctest::Approx(once.eval_f(plan.xs[i], plan.As[i])));
        CHECK(twice.eval_g(plan.xs[i], plan.zetas[i], plan.nus[i]) ==
              doctest::Approx(once.eval_g(plan.xs[i], plan.zetas[i], plan.nus[i])));
    }
}

TEST_CASE("library construction") {
    const IntegrandPair lam = library(LibraryName::laminate);
    const SymMatrix A = SymMatrix::identity(2);
    CHECK(lam.eval_f(Vec{0.1, 0.7}, A) == doctest::Approx(std::sqrt(2.0)));
    CHECK(lam.eval_f(Vec{0.5, 0.7}, A) == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(lam.eval_f(Vec{1.1, -3.0}, A) == lam.eval_f(Vec{0.1, 0.0}, A));

    const IntegrandPair hp = library(LibraryName::hyperplane_weak_surface);
    const Vec z{1.0, 0.0}, nu{0.0, 1.0};
    CHECK(hp.eval_g(Vec{0.3, 0.0}, z, nu) == doctest::Approx(1.0 * sym_tensor(z, nu).norm()));
    CHECK(hp.eval_g(Vec{0.3, 0.1}, z, nu) == doctest::Approx(2.0 * sym_tensor(z, nu).norm()));

    CHECK_THROWS_AS(parse_library_name("nope"), std::invalid_argument);
    for (LibraryName n : kAll) CHECK(parse_library_name(to_string(n)) == n);
}

TEST_CASE("structural constants are validated") {
    StructuralConstants c;
    c.c1 = 2.0;
    c.c3 = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = StructuralConstants{};
    c.alpha = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
