#include <cmath>

#include "bdhomog/cell_formulas.hpp"
#include "bdhomog/stochastic.hpp"
#include "doctest.h"

using namespace bdhomog;

namespace {

const SymMatrix kA(2, {1.0, 0.0, 0.0, 0.0});

Rectangle rect(double x0, double y0, double x1, double y1) { return Rectangle{Vec{x0, y0}, Vec{x1, y1}}; }

}  // namespace

TEST_CASE("marks are reproducible and shift-coherent") {
    const RandomField f = sample_field(42, MarkLaw::bernoulli(0.5, 1.0, 2.0), 2);
    const RandomField g = sample_field(42, MarkLaw::bernoulli(0.5, 1.0, 2.0), 2);
    for (std::int64_t i = -8; i < 8; ++i)
        for (std::int64_t j = -8; j < 8; ++j) {
            const CellIndex z{i, j, 0};
            const double m = f.mark(z);
            CHECK((m == 1.0 || m == 2.0));
            CHECK(m == g.mark(z));
        }
    const RandomField s = f.shift_by(CellIndex{1, 0, 0});
    CHECK(s.mark(CellIndex{0, 0, 0}) == f.mark(CellIndex{1, 0, 0}));
    for (std::int64_t i = -5; i < 5; ++i) CHECK(s.mark(CellIndex{i, 3, 0}) == f.mark(CellIndex{i + 1, 3, 0}));

    const RandomField other = sample_field(43, MarkLaw::bernoulli(0.5, 1.0, 2.0), 2);
    bool differ = false;
    for (std::int64_t i = 0; i < 16 && !differ; ++i)
        for (std::int64_t j = 0; j < 16; ++j)
            if (other.mark(CellIndex{i, j, 0}) != f.mark(CellIndex{i, j, 0})) differ = true;
    CHECK(differ);
}

TEST_CASE("bernoulli marks have the requested frequency") {
    const RandomField f = sample_field(9, MarkLaw::bernoulli(0.3, 1.0, 2.0), 2);
    int soft = 0;
    for (std::int64_t i = 0; i < 100; ++i)
        for (std::int64_t j = 0; j < 100; ++j) soft += f.mark(CellIndex{i, j, 0}) == 1.0;
    CHECK(std::abs(soft / 10000.0 - 0.3) < 0.02);
}

TEST_CASE("mu on simple rectangles") {
    const RandomField hom = sample_field(1, MarkLaw::bernoulli(0.5, 1.5, 1.5), 2);
    const SubadditiveSample s = mu(hom, kA, rect(0, 0, 2, 1), 0.25);
    CHECK(std::abs(s.value - 1.5 * kA.norm() * 2.0) <= 1e-9);
    CHECK(s.bound_ok);

    const RandomField f = sample_field(3, MarkLaw::bernoulli(0.5, 1.0, 2.0), 2);
    const SubadditiveSample u = mu(f, kA, rect(0, 0, 1, 1), 0.125);
    CHECK(u.value >= kA.norm() - 1e-12);
    CHECK(u.value <= 2.0 * kA.norm() + 1e-12);
    CHECK(u.to_json().contains("upper_bound"));
}

TEST_CASE("covariance under integer shifts") {
    const RandomField f = sample_field(5, MarkLaw::bernoulli(0.5, 1.0, 2.0), 2);
    const CovarianceReport c = check_covariance(f, kA, rect(0, 0, 2, 2), CellIndex{1, 0, 0}, 0.25);
    CHECK(c.pass);
    CHECK(c.gap <= c.allowed);
}

TEST_CASE("subadditivity") {
    const RandomField hom = sample_field(1, MarkLaw::bernoulli(0.5, 1.0, 1.0), 2);
    const std::vector<Rectangle> quarters{rect(-1, -1, 0, 0), rect(0, -1, 1, 0), rect(-1, 0, 0, 1), rect(0, 0, 1, 1)};
    const SubadditivityReport h = check_subadditivity(hom, kA, rect(-1, -1, 1, 1), quarters, 0.25);
    CHECK(std::abs(h.slack) <= 1e-9);
    CHECK(h.pass);

    const RandomField f = sample_field(11, MarkLaw::bernoulli(0.5, 1.0, 2.0), 2);
    const SubadditivityReport b = check_subadditivity(f, kA, rect(-1, -1, 1, 1), quarters, 0.25);
    CHECK(b.slack >= b.allowed);
    CHECK(b.pass);

    const SubadditivityReport t = check_subadditivity(f, kA, rect(-1, -1, 1, 1), {rect(-1, -1, 1, 1)}, 0.25);
    CHECK(std::abs(t.slack) <= 1e-9 * t.whole);

    CHECK_THROWS_AS(check_subadditivity(f, kA, rect(0, 0, 2, 2), {rect(0, 0, 1, 2)}, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(check_subadditivity(f, kA, rect(0, 0, 2, 2), {rect(0, 0, 1.5, 2), rect(1, 0, 2, 2)}, 0.25),
                    std::invalid_argument);
    CHECK_THROWS_AS(rect(0, 0, 0, 1).validate(), std::invalid_argument);
}

TEST_CASE("random triples are deterministic and valid") {
    const auto a = random_triples(7, 10, 2), b = random_triples(7, 10, 2);
    REQUIRE(a.size() == 10);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].field_seed == b[i].field_seed);
        CHECK(a[i].R.describe() == b[i].R.describe());
        CHECK((a[i].partition.size() == 2 || a[i].partition.size() == 3));
        double vol = 0.0;
        for (const Rectangle& P : a[i].partition) vol += P.volume();
        CHECK(vol == doctest::Approx(a[i].R.volume()));
    }
    const TripleOutcome o = run_triple(MarkLaw::bernoulli(0.5, 1.0, 2.0), a[0]);
    CHECK(o.pass);
}

TEST_CASE("ergodic average: degenerate law and one-point law") {
    const std::vector<double> rs{1.0, 2.0};
    ErgodicTarget t;
    t.A = kA;
    const ErgodicReport deg = ergodic_average(MarkLaw::bernoulli(0.5, 1.5, 1.5), t, rs, seed_range(1, 8), Vec(2));
    for (double s : deg.stddev) CHECK(s == 0.0);
    CHECK(deg.bounds_ok);
    CHECK(deg.to_csv().rfind("seed,r,normalized_value\n", 0) == 0);

    const ErgodicReport per = ergodic_average(MarkLaw::periodic(1.0, 2.0), t, {1.0, 2.0, 4.0}, seed_range(1, 8), Vec(2));
    LibraryParams lp;
    const ConvergenceRecord det =
        estimate_f_lim(make_library_integrand(LibraryName::checkerboard, lp), kA, {1.0, 2.0, 4.0}, Vec(2));
    for (const auto& row : per.values)
        for (std::size_t i = 0; i < row.size(); ++i) CHECK(row[i] == det.normalized_values[i]);

    CHECK_THROWS_AS(ergodic_average(MarkLaw::bernoulli(0.5, 1.0, 2.0), t, rs, seed_range(1, 4), Vec(2)),
                    std::invalid_argument);
}

TEST_CASE("ergodic runs are identical across thread counts") {
    ErgodicTarget t;
    t.A = kA;
    const auto law = MarkLaw::bernoulli(0.5, 1.0, 2.0);
    const ErgodicReport a = ergodic_average(law, t, {1.0, 2.0}, seed_range(3, 8), Vec(2), 0.125, {}, 1);
    const ErgodicReport b = ergodic_average(law, t, {1.0, 2.0}, seed_range(3, 8), Vec(2), 0.125, {}, 4);
    CHECK(a.values == b.values);
}
