#include <cmath>
#include <random>
#include <sstream>

#include "bdhomog/lattice.hpp"
#include "doctest.h"

using namespace bdhomog;

namespace {

IntegrandPair homogeneous(int d = 2) {
    LibraryParams p;
    p.dim = d;
    return make_library_integrand(LibraryName::homogeneous_norm, p);
}

IntegrandPair checkerboard() { return make_library_integrand(LibraryName::checkerboard, LibraryParams{}); }

void randomize(DisplacementField& u, std::uint64_t seed, double amp) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-amp, amp);
    const std::size_t d = static_cast<std::size_t>(u.grid.dim());
    for (std::size_t i = 0; i < u.grid.num_nodes(); ++i)
        if (!u.grid.is_shell(i))
            for (std::size_t c = 0; c < d; ++c) u.values[i * d + c] += U(rng);
}

}  // namespace

TEST_CASE("grid geometry and shell") {
    const Grid g = Grid::cube(2, 2.0, 0.25, Vec{0.5, -1.0});
    CHECK(g.n(0) == 9);
    CHECK((g.n(0) - 1) * g.h() == 2.0);
    CHECK(g.num_nodes() == 81);
    CHECK(g.num_free() == 49);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        const MultiIndex m = g.node_multi(i);
        const bool edge = m[0] == 0 || m[0] == 8 || m[1] == 0 || m[1] == 8;
        CHECK(g.is_shell(i) == edge);
        CHECK(g.node_index(m) == i);
    }
    CHECK_THROWS_AS(Grid::cube(2, 1.0, 0.3, Vec(2)), std::invalid_argument);
}

TEST_CASE("discrete strain of affine, rigid and jump fields") {
    const Grid g = Grid::cube(2, 1.0, 0.125, Vec(2));
    const SymMatrix A(2, {0.3, -0.2, -0.2, 1.1});
    const DisplacementField u = apply_datum(g, BoundaryDatum::affine(A));
    for (std::size_t c = 0; c < g.num_cells(); ++c)
        for (const SymMatrix& E : simplex_strains(u, c)) CHECK((E - A).norm() < 1e-12);

    const Matrix W(2, {0.0, 0.7, -0.7, 0.0});
    const DisplacementField r = apply_datum(g, BoundaryDatum::affine(W));
    for (std::size_t c = 0; c < g.num_cells(); ++c) CHECK(discrete_sym_gradient(r, c).norm() < 1e-12);

    const Vec zeta{1.0, 0.5}, nu{0.0, 1.0};
    const Grid gj = Grid::cube(2, 1.0, 0.125, Vec{0.0, 0.0625});
    const DisplacementField uj = apply_datum(gj, BoundaryDatum::jump(Vec(2), zeta, nu));
    const SymMatrix target = sym_tensor(zeta, nu) / gj.h();
    int crossing = 0;
    for (std::size_t c = 0; c < gj.num_cells(); ++c) {
        const SymMatrix E = discrete_sym_gradient(uj, c);
        if (E.norm() == 0.0) continue;
        ++crossing;
        for (const SymMatrix& ES : simplex_strains(uj, c)) CHECK((ES - target).norm() < 1e-9 * target.norm());
    }
    CHECK(crossing == 8);
}

TEST_CASE("apply_datum values") {
    const Grid g = Grid::cube(2, 1.0, 0.25, Vec(2));
    const DisplacementField z = apply_datum(g, BoundaryDatum::affine(SymMatrix::zero(2)));
    for (std::size_t i = 0; i < g.num_nodes(); ++i) CHECK(z.value(i).norm() == 0.0);
    const SymMatrix A(2, {1, 2, 2, 3});
    const DisplacementField a = apply_datum(g, BoundaryDatum::affine(A));
    for (std::size_t i = 0; i < g.num_nodes(); ++i)
        CHECK((a.value(i) - A.full() * g.node_position(i)).norm() < 1e-14);
    const Vec zeta{2.0, -1.0}, nu{0.6, 0.8};
    const DisplacementField j = apply_datum(g, BoundaryDatum::jump(Vec(2), zeta, nu));
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        const double s = g.node_position(i).dot(nu);
        if (std::abs(s) < 1e-12) continue;
        CHECK((j.value(i) - (s > 0.0 ? zeta : Vec(2))).norm() < 1e-14);
    }
    CHECK(j.shell_matches_datum());
    CHECK_THROWS_AS(BoundaryDatum::jump(Vec(2), zeta, Vec{1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("energy of simple fields") {
    const IntegrandPair p = homogeneous();
    for (double r : {1.0, 2.0, 4.0}) {
        const Grid g = Grid::cube(2, r, 0.125, Vec(2));
        const SymMatrix A(2, {1.0, 0.5, 0.5, -0.25});
        const double e = assemble_energy(apply_datum(g, BoundaryDatum::affine(A)), p);
        CHECK(std::abs(e - A.norm() * r * r) <= 1e-12 * A.norm() * r * r);
        CHECK(assemble_energy(apply_datum(g, BoundaryDatum::affine(SymMatrix::zero(2))), checkerboard()) == 0.0);
    }
}

TEST_CASE("flat interface energy") {
    const IntegrandPair p = homogeneous();
    const Vec zeta{1.0, 0.0}, nu{0.0, 1.0};
    for (double r : {2.0, 4.0}) {
        const double h = 0.125;
        const Grid g = Grid::cube(2, r, h, Vec(2), rotation_for_normal(nu));
        const double e = assemble_energy(apply_datum(g, BoundaryDatum::jump(Vec(2), zeta, nu)), p);
        const double expect = sym_tensor(zeta, nu).norm() * r;
        CHECK(e >= expect * (1.0 - 5.0 * h / r));
        CHECK(e <= expect * (1.0 + 5.0 * h / r));
    }
}

TEST_CASE("rigid motions do not change the energy") {
    const Grid g = Grid::cube(2, 2.0, 0.125, Vec{0.3, 0.1});
    for (const IntegrandPair& p : {homogeneous(), checkerboard()}) {
        DisplacementField u = apply_datum(g, BoundaryDatum::affine(SymMatrix(2, {0.2, 0.1, 0.1, 0.0})));
        randomize(u, 4, 0.05);
        const double e0 = assemble_energy(u, p);
        u.add_rigid_motion(Matrix(2, {0.0, 0.4, -0.4, 0.0}), Vec{1.0, -2.0});
        CHECK(std::abs(assemble_energy(u, p) - e0) <= 1e-12 * e0);
    }
}

TEST_CASE("frame invariance for the isotropic pair") {
    const IntegrandPair p = homogeneous();
    const Vec nu{0.6, 0.8};
    const Matrix R = rotation_for_normal(nu);
    const Grid ga = Grid::cube(2, 1.0, 0.125, Vec(2));
    const Grid gr = Grid::cube(2, 1.0, 0.125, Vec(2), R);
    DisplacementField ua = apply_datum(ga, BoundaryDatum::affine(SymMatrix::zero(2)));
    DisplacementField ur = apply_datum(gr, BoundaryDatum::affine(SymMatrix::zero(2)));
    randomize(ua, 9, 0.1);
    for (std::size_t i = 0; i < ga.num_nodes(); ++i) ur.set_relative(i, R * ua.relative(i));
    const double ea = assemble_energy(ua, p), er = assemble_energy(ur, p);
    CHECK(std::abs(ea - er) <= 1e-10 * ea);
}

TEST_CASE("psi is the min of bulk and surface branches") {
    const IntegrandPair p = make_library_integrand(LibraryName::hyperplane_weak_surface, LibraryParams{});
    const Grid g = Grid::cube(2, 1.0, 0.125, Vec(2));
    const LatticeEnergy en(p, g);
    const SymMatrix E(2, {0.0, 0.0, 0.0, 4.0});
    for (std::size_t c = 0; c < g.num_cells(); ++c) {
        const Vec& x = en.cell_x(c);
        const double a = p.eval_f(x, E), b = p.g_hat(x, E * g.h()) / g.h();
        CHECK(en.psi(c, E) == doctest::Approx(std::min(a, b)));
        CHECK(en.psi(c, E, 0.3) >= std::min(a, b));
    }
    CHECK(shifted_softmin(1.0, 2.0, 0.0) == 1.0);
    CHECK(shifted_softmin(1.5, 1.5, 0.7) == 1.5);
}

TEST_CASE("pairwise_sum is deterministic and accurate") {
    std::vector<double> x(1000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 / static_cast<double>(i + 1);
    const double a = pairwise_sum(x), b = pairwise_sum(x);
    CHECK(a == b);
    double ref = 0.0;
    for (double v : x) ref += v;
    CHECK(a == doctest::Approx(ref).epsilon(1e-13));
}

TEST_CASE("binary field round trip") {
    const Grid g = Grid::cube(2, 1.0, 0.25, Vec{1.0, 2.0}, rotation_for_normal(Vec{0.6, 0.8}));
    DisplacementField u = apply_datum(g, BoundaryDatum::affine(SymMatrix(2, {1, 0, 0, 2})));
    randomize(u, 2, 0.1);
    std::stringstream ss;
    write_field_binary(ss, u);
    const DisplacementField v = read_field_binary(ss);
    REQUIRE(v.grid.num_nodes() == g.num_nodes());
    CHECK(v.grid.h() == g.h());
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        CHECK(v.value(i) == u.value(i));
        CHECK(v.grid.node_position(i) == g.node_position(i));
    }
    std::ostringstream csv;
    write_field_csv(csv, u);
    CHECK(csv.str().rfind("node,i0,i1,x0,x1,u0,u1", 0) == 0);
}
