#include <cmath>

#include "bdhomog/oracle1d.hpp"
#include "doctest.h"

using namespace bdhomog;

namespace {

Profile1D constant_profile(double a, double theta, JumpShape sigma) {
    Profile1D p;
    p.name = "custom";
    p.a = PiecewiseConstant1D::constant(a);
    p.theta = PiecewiseConstant1D::constant(theta);
    p.sigma = std::move(sigma);
    return p;
}

JumpShape capped() {
    JumpShape s;
    s.pieces = {AffinePiece{1.0, 0.0}, AffinePiece{0.5, 0.5}};
    return s;
}

}  // namespace

TEST_CASE("closed-form values") {
    CHECK(exact_cell_value_1d(oracle_profile("homogeneous"), 1.5, 2.0) == doctest::Approx(3.0));
    CHECK(exact_cell_value_1d(oracle_profile("laminate"), 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(exact_cell_value_1d(constant_profile(2.0, 1.0, capped()), 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(exact_cell_value_1d(oracle_profile("pure_jump"), -2.0, 1.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(exact_cell_value_1d(oracle_profile("homogeneous"), 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(oracle_profile("nope"), std::invalid_argument);
}

TEST_CASE("jump shape bookkeeping") {
    const JumpShape s = capped();
    CHECK(s(0.0) == 0.0);
    CHECK(s(2.0) == doctest::Approx(1.5));
    CHECK(s.slope_at_infinity() == 0.5);
    CHECK(s.initial_slope() == 1.0);
    REQUIRE(s.kinks().size() == 1);
    CHECK(s.kinks()[0] == doctest::Approx(1.0));
    CHECK_FALSE(s.is_linear());
    JumpShape bad;
    bad.pieces = {AffinePiece{1.0, 0.1}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("piecewise constant weights") {
    const Profile1D lam = oracle_profile("laminate");
    CHECK(lam.a(0.1) == 1.0);
    CHECK(lam.a(0.5) == 2.0);
    CHECK(lam.a(-0.1) == 1.0);
    CHECK(lam.a(3.5) == 2.0);
    CHECK(lam.a.min_on(0.3, 0.7) == 2.0);
    CHECK(lam.a.min_on(0.3, 0.8) == 1.0);
    CHECK(lam.a.min_on(0.0, 5.0) == 1.0);
    PiecewiseConstant1D bad;
    bad.values = {1.0, 2.0};
    CHECK_THROWS_AS(bad.validate("a"), std::invalid_argument);
}

TEST_CASE("oracle properties") {
    for (const std::string& n : oracle_profile_names()) {
        const Profile1D p = oracle_profile(n);
        const StructuralConstants c = p.constants();
        for (double A : {0.0, 0.5, 1.0, 3.0})
            for (double L : {0.5, 1.0, 2.0}) {
                const double v = exact_cell_value_1d(p, A, L);
                CHECK(v >= c.c1 * A * L - c.c2 * L - 1e-12);
                CHECK(v <= c.c3 * A * L + c.c4 * L + 1e-12);
                CHECK(exact_cell_value_1d(p, 2.0 * A, L) == doctest::Approx(2.0 * v));
            }
    }
    double prev = 0.0;
    for (double a : {0.5, 1.0, 1.5, 3.0}) {
        const double v = exact_cell_value_1d(constant_profile(a, 1.0, capped()), 2.0, 1.0);
        CHECK(v >= prev);
        prev = v;
    }
    prev = 0.0;
    for (double th : {0.5, 1.0, 1.5, 3.0}) {
        const double v = exact_cell_value_1d(constant_profile(1.0, th, capped()), 2.0, 1.0);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("d = 1 pairs satisfy the integrand conditions") {
    for (const std::string& n : oracle_profile_names())
        CHECK(check_integrand(pair_1d(oracle_profile(n)), SamplePlan::standard(1, 200)).all_pass());
    // the bounded part of a capped σ beats any fixed c7 as |ζ| -> 0
    const IntegrandReport capped_rep =
        check_integrand(pair_1d(constant_profile(2.0, 1.0, capped())), SamplePlan::standard(1, 200));
    CHECK(capped_rep.failed() == std::vector<std::string>{"g5"});
    CHECK(capped_rep.find("g5")->first_failure.find("zeta=(0.5)") != std::string::npos);
}

TEST_CASE("lattice matches the oracle") {
    const std::vector<double> hs{0.125, 0.0625, 0.03125};
    for (const std::string& n : oracle_profile_names()) {
        const OracleReport r = validate_lattice_against_oracle(oracle_profile(n), 1.0, 1.0, hs);
        INFO(n);
        CHECK(r.pass);
        CHECK(r.gap_non_increasing);
        if (n == "homogeneous")
            for (const OracleRow& row : r.rows) CHECK(row.rel_gap <= 1e-9);
    }
    const OracleReport c = validate_lattice_against_oracle(constant_profile(2.0, 1.0, capped()), 1.0, 1.0, hs);
    CHECK(c.pass);
    CHECK(c.to_csv().rfind("h,lattice_value,oracle_value,rel_gap\n", 0) == 0);
    CHECK_THROWS_AS(validate_lattice_against_oracle(oracle_profile("laminate"), 1.0, 1.0, {0.1, 0.2}),
                    std::invalid_argument);
}
