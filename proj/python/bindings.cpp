#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "bdhomog/cell_formulas.hpp"
#include "bdhomog/integrands.hpp"
#include "bdhomog/oracle1d.hpp"
#include "bdhomog/stochastic.hpp"

namespace py = pybind11;
using namespace bdhomog;

namespace {

using Rows = std::vector<std::vector<double>>;

// Results cross the boundary as JSON text; the Python wrapper decodes them.
std::string dump(const json& j) { return j.dump(); }

Vec to_vec(const std::vector<double>& v) {
    Vec out(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
    return out;
}

SymMatrix to_sym(const Rows& rows) {
    SymMatrix A(static_cast<int>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw std::invalid_argument("A must be square");
        for (std::size_t j = 0; j <= i; ++j) {
            if (rows[i][j] != rows[j][i]) throw std::invalid_argument("A must be symmetric");
            A.set(static_cast<int>(i), static_cast<int>(j), rows[i][j]);
        }
    }
    return A;
}

Vec anchor(const std::vector<double>& x, int dim) { return x.empty() ? Vec(dim) : to_vec(x); }

IntegrandPair make_pair(const std::string& name, int dim, double a_soft, double a_hard, int direction) {
    LibraryParams prm;
    prm.dim = dim;
    prm.a_soft = a_soft;
    prm.a_hard = a_hard;
    prm.direction = direction;
    return make_library_integrand(parse_library_name(name), prm);
}

MarkLaw make_law(const std::string& kind, double p, double a_soft, double a_hard) {
    if (kind == "bernoulli") return MarkLaw::bernoulli(p, a_soft, a_hard);
    if (kind == "uniform") return MarkLaw::uniform(a_soft, a_hard);
    if (kind == "periodic") return MarkLaw::periodic(a_soft, a_hard);
    throw std::invalid_argument("unknown law: " + kind);
}

#define PAIR_ARGS                                                                                         \
    py::arg("name"), py::arg("dim") = 2, py::arg("a_soft") = 1.0, py::arg("a_hard") = 2.0, \
        py::arg("direction") = 0

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Lattice cell problems for bulk and surface homogenization";

    m.def("library_names", []() {
        return std::vector<std::string>{"homogeneous_norm", "smooth_nonhomogeneous", "laminate",
                                        "checkerboard", "hyperplane_weak_surface"};
    });

    m.def(
        "check_integrand",
        [](const std::string& name, int dim, double a_soft, double a_hard, int direction, int n_random) {
            const IntegrandPair p = name == "quadratic_counterexample"
                                        ? quadratic_counterexample(dim)
                                        : make_pair(name, dim, a_soft, a_hard, direction);
            return dump(check_integrand(p, SamplePlan::standard(dim, n_random)).to_json());
        },
        PAIR_ARGS, py::arg("n_random") = 1000);

    m.def(
        "estimate_f_lim",
        [](const std::string& name, int dim, double a_soft, double a_hard, int direction, const Rows& A,
           const std::vector<double>& r, const std::vector<double>& x_anchor, double h) {
            py::gil_scoped_release nogil;
            const IntegrandPair p = make_pair(name, dim, a_soft, a_hard, direction);
            return dump(estimate_f_lim(p, to_sym(A), r, anchor(x_anchor, dim), h).to_json());
        },
        PAIR_ARGS, py::arg("A"), py::arg("r"), py::arg("x_anchor") = std::vector<double>{}, py::arg("h") = 0.125);

    m.def(
        "estimate_g_lim",
        [](const std::string& name, int dim, double a_soft, double a_hard, int direction,
           const std::vector<double>& zeta, const std::vector<double>& nu, const std::vector<double>& r,
           const std::vector<double>& x_anchor, double h) {
            py::gil_scoped_release nogil;
            const IntegrandPair p = make_pair(name, dim, a_soft, a_hard, direction);
            return dump(estimate_g_lim(p, to_vec(zeta), to_vec(nu), r, anchor(x_anchor, dim), h).to_json());
        },
        PAIR_ARGS, py::arg("zeta"), py::arg("nu"), py::arg("r"), py::arg("x_anchor") = std::vector<double>{},
        py::arg("h") = 0.125);

    m.def(
        "check_scaling_identity",
        [](const std::string& name, int dim, double a_soft, double a_hard, int direction, const Rows& A, double eps,
           double rho, double h0) {
            py::gil_scoped_release nogil;
            const IntegrandPair p = make_pair(name, dim, a_soft, a_hard, direction);
            return dump(check_scaling_identity(p, to_sym(A), eps, Vec(dim), rho, h0).to_json());
        },
        PAIR_ARGS, py::arg("A"), py::arg("eps"), py::arg("rho") = 1.0, py::arg("h0") = 0.125);

    m.def(
        "check_gj_identity",
        [](const std::string& name, int dim, double a_soft, double a_hard, int direction,
           const std::vector<std::pair<std::vector<double>, std::vector<double>>>& samples,
           const std::vector<double>& r, double h) {
            py::gil_scoped_release nogil;
            const IntegrandPair p = make_pair(name, dim, a_soft, a_hard, direction);
            std::vector<std::pair<Vec, Vec>> s;
            for (const auto& [z, n] : samples) s.emplace_back(to_vec(z), to_vec(n));
            return dump(check_gj_identity(p, s, r, Vec(dim), h).to_json());
        },
        PAIR_ARGS, py::arg("samples"), py::arg("r"), py::arg("h") = 0.125);

    m.def(
        "gamma_minima_check",
        [](const std::string& name, int dim, double a_soft, double a_hard, int direction,
           const std::vector<double>& eps, const Rows& A, const std::vector<double>& limit_r, double side,
           double h0) {
            py::gil_scoped_release nogil;
            const IntegrandPair p = make_pair(name, dim, a_soft, a_hard, direction);
            return dump(gamma_minima_check(p, eps, Vec(dim), side, to_sym(A), limit_r, h0).to_json());
        },
        PAIR_ARGS, py::arg("eps"), py::arg("A"), py::arg("limit_r"), py::arg("side") = 1.0, py::arg("h0") = 0.125);

    m.def("oracle_profile_names", &oracle_profile_names);
    m.def(
        "exact_cell_value_1d",
        [](const std::string& profile, double A, double L) {
            return exact_cell_value_1d(oracle_profile(profile), A, L);
        },
        py::arg("profile"), py::arg("A"), py::arg("L") = 1.0);
    m.def(
        "validate_lattice_against_oracle",
        [](const std::string& profile, double A, double L, const std::vector<double>& h) {
            py::gil_scoped_release nogil;
            return dump(validate_lattice_against_oracle(oracle_profile(profile), A, L, h).to_json());
        },
        py::arg("profile"), py::arg("A") = 1.0, py::arg("L") = 1.0,
        py::arg("h") = std::vector<double>{0.125, 0.0625, 0.03125, 0.015625});

    m.def(
        "subadditive_triples",
        [](std::uint64_t seed, int n, const std::string& law, double p, double a_soft, double a_hard, double h) {
            py::gil_scoped_release nogil;
            const MarkLaw ml = make_law(law, p, a_soft, a_hard);
            json out = json::array();
            for (const SubadditiveTriple& t : random_triples(seed, n, 2)) out.push_back(run_triple(ml, t, h).to_json());
            return dump(out);
        },
        py::arg("seed"), py::arg("n") = 20, py::arg("law") = "bernoulli", py::arg("p") = 0.5,
        py::arg("a_soft") = 1.0, py::arg("a_hard") = 2.0, py::arg("h") = 0.25);

    m.def(
        "ergodic_average",
        [](const Rows& A, const std::vector<double>& r, std::uint64_t seed_base, int n_seeds, const std::string& law,
           double p, double a_soft, double a_hard, double h, int threads) {
            py::gil_scoped_release nogil;
            ErgodicTarget target;
            target.A = to_sym(A);
            const Vec x(static_cast<int>(A.size()));
            return dump(ergodic_average(make_law(law, p, a_soft, a_hard), target, r, seed_range(seed_base, n_seeds), x,
                                        h, {}, threads)
                            .to_json());
        },
        py::arg("A"), py::arg("r"), py::arg("seed_base") = 1, py::arg("n_seeds") = 16, py::arg("law") = "bernoulli",
        py::arg("p") = 0.5, py::arg("a_soft") = 1.0, py::arg("a_hard") = 2.0, py::arg("h") = 0.125,
        py::arg("threads") = 1);
}
