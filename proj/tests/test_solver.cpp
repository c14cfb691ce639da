#include <cmath>

#include "bdhomog/solver.hpp"
#include "doctest.h"

using namespace bdhomog;

namespace {

IntegrandPair lib(LibraryName n) { return make_library_integrand(n, LibraryParams{}); }

}  // namespace

TEST_CASE("affine datum is optimal for the homogeneous pair") {
    const IntegrandPair p = lib(LibraryName::homogeneous_norm);
    for (double r : {1.0, 2.0}) {
        const Grid g = Grid::cube(2, r, 0.125, Vec(2));
        const SymMatrix A(2, {1.0, 0.3, 0.3, -0.5});
        const SolveResult res = minimize(p, g, BoundaryDatum::affine(A));
        CHECK(std::abs(res.energy - A.norm() * r * r) <= 1e-9 * A.norm() * r * r);
        CHECK(res.field.shell_matches_datum());
    }
}

TEST_CASE("zero datum gives zero energy") {
    for (LibraryName n : {LibraryName::homogeneous_norm, LibraryName::checkerboard, LibraryName::hyperplane_weak_surface}) {
        const Grid g = Grid::cube(2, 1.0, 0.125, Vec(2));
        const SolveResult res = minimize(lib(n), g, BoundaryDatum::affine(SymMatrix::zero(2)));
        CHECK(res.energy == 0.0);
        for (double v : res.field.values) CHECK(v == 0.0);
    }
}

TEST_CASE("flat interface squeeze for the homogeneous pair") {
    const IntegrandPair p = lib(LibraryName::homogeneous_norm).recession_pair();
    const Vec zeta{1.0, 0.0}, nu{0.0, 1.0};
    const double r = 2.0, h = 0.125;
    const Grid g = Grid::cube(2, r, h, Vec(2), rotation_for_normal(nu));
    const SolveResult res = minimize(p, g, BoundaryDatum::jump(Vec(2), zeta, nu));
    const double v = res.energy / r, zn = sym_tensor(zeta, nu).norm();
    CHECK(v >= zn * (1.0 - 5.0 * h / r));
    CHECK(v <= zn * (1.0 + 5.0 * h / r));
}

TEST_CASE("minimize never exceeds the datum energy and is deterministic") {
    const Grid g = Grid::cube(2, 1.0, 0.125, Vec{0.25, 0.25});
    const SymMatrix A(2, {1.0, 0.0, 0.0, 0.0});
    for (LibraryName n : {LibraryName::checkerboard, LibraryName::smooth_nonhomogeneous, LibraryName::hyperplane_weak_surface}) {
        const IntegrandPair p = lib(n);
        SolveOptions o;
        o.seed = 17;
        const SolveResult a = minimize(p, g, BoundaryDatum::affine(A), o);
        const SolveResult b = minimize(p, g, BoundaryDatum::affine(A), o);
        INFO(to_string(n));
        CHECK(a.energy <= a.datum_energy);
        CHECK(a.energy == b.energy);
        CHECK(a.field.values == b.field.values);
        CHECK(a.field.shell_matches_datum());
    }
}

TEST_CASE("descent stages are monotone") {
    const IntegrandPair p = lib(LibraryName::hyperplane_weak_surface);
    const Grid g = Grid::cube(2, 1.0, 0.125, Vec(2), rotation_for_normal(Vec{0.0, 1.0}));
    SolveOptions o;
    o.convex = false;
    const SolveResult res = minimize(p, g, BoundaryDatum::jump(Vec(2), Vec{1.0, 0.0}, Vec{0.0, 1.0}), o);
    REQUIRE_FALSE(res.trace.empty());
    for (const StageTrace& t : res.trace) {
        if (t.kind != "descent" || t.beta != 0.0) continue;
        for (std::size_t i = 1; i < t.energies.size(); ++i) CHECK(t.energies[i] <= t.energies[i - 1]);
    }
}

TEST_CASE("convex path and descent path agree") {
    const IntegrandPair p = lib(LibraryName::checkerboard);
    const Grid g = Grid::cube(2, 1.0, 0.125, Vec(2));
    const BoundaryDatum dat = BoundaryDatum::affine(SymMatrix(2, {1.0, 0.0, 0.0, 0.0}));
    SolveOptions slow;
    slow.convex = false;
    slow.max_sweeps = 3000;
    const double ec = minimize(p, g, dat).energy, ed = minimize(p, g, dat, slow).energy;
    CHECK(ec <= ed * (1.0 + 1e-4));
    CHECK(ec >= ed * (1.0 - 1e-2));
}

TEST_CASE("solve options are validated") {
    const Grid g = Grid::cube(2, 1.0, 0.25, Vec(2));
    const IntegrandPair p = lib(LibraryName::homogeneous_norm);
    SolveOptions o;
    o.gnc_schedule = {1.0, 0.5};
    CHECK_THROWS_AS(minimize(p, g, BoundaryDatum::affine(SymMatrix::zero(2)), o), std::invalid_argument);
    o = SolveOptions{};
    o.tol_energy = 0.0;
    CHECK_THROWS_AS(minimize(p, g, BoundaryDatum::affine(SymMatrix::zero(2)), o), std::invalid_argument);
    std::vector<double> bad(3, 0.0);
    CHECK_THROWS_AS(minimize(p, g, BoundaryDatum::affine(SymMatrix::zero(2)), SolveOptions{}, {bad}),
                    std::invalid_argument);
}

TEST_CASE("brute force dominates minimize on tiny instances") {
    const std::vector<double> q{-0.2, -0.1, -0.05, 0.0, 0.05, 0.1, 0.2};
    SUBCASE("one free node, homogeneous pair") {
        const IntegrandPair p = lib(LibraryName::homogeneous_norm);
        const Grid g = Grid::cube(2, 0.5, 0.25, Vec(2));
        const BoundaryDatum dat = BoundaryDatum::affine(SymMatrix(2, {1.0, 0.2, 0.2, 0.0}));
        const BruteForceResult bf = brute_force_min(p, g, dat, q);
        const SolveResult res = minimize(p, g, dat);
        CHECK(res.energy >= bf.energy - bf.quantization_gap);
        CHECK(res.energy <= bf.energy + 1e-9);
    }
    SUBCASE("2x2 free block, checkerboard pair") {
        const IntegrandPair p = lib(LibraryName::checkerboard);
        const Grid g = Grid::cube(2, 1.5, 0.5, Vec{0.25, 0.25});
        const BoundaryDatum dat = BoundaryDatum::affine(SymMatrix(2, {0.5, 0.0, 0.0, 0.0}));
        const std::vector<double> q2{-0.1, -0.05, 0.0, 0.05, 0.1};
        const BruteForceResult bf = brute_force_min(p, g, dat, q2);
        const SolveResult res = minimize(p, g, dat);
        CHECK(g.num_free() == 4);
        CHECK(res.energy >= bf.energy - bf.quantization_gap);
        CHECK(res.energy <= bf.energy + 1e-9);
    }
    SUBCASE("grids without a free node are rejected") {
        CHECK_THROWS_AS(Grid::box(Vec{0.0, 0.0}, Vec{0.5, 0.5}, 0.5), std::invalid_argument);
    }
}

TEST_CASE("solve result json") {
    const Grid g = Grid::cube(2, 1.0, 0.25, Vec(2));
    const SolveResult res = minimize(lib(LibraryName::homogeneous_norm), g, BoundaryDatum::affine(SymMatrix::identity(2)));
    const json j = res.to_json();
    for (const char* k : {"energy", "r", "h", "datum", "sweeps", "seed", "wall_time_ms"}) CHECK(j.contains(k));
}
