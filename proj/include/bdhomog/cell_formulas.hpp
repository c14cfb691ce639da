#pragma once

#include <string>
#include <vector>

#include "bdhomog/integrands.hpp"
#include "bdhomog/io.hpp"
#include "bdhomog/lattice.hpp"
#include "bdhomog/solver.hpp"

namespace bdhomog {

struct CellProblem {
    IntegrandPair pair;
    BoundaryDatum datum;
    double r = 1.0;
    /// Cube center is r·x_anchor.
    Vec x_anchor;
    /// Replace (f, g) by (f^∞, g^∞); required for jump data.
    bool use_recession_pair = false;
    /// Lattice spacing.
    double h = 0.125;
};

/// The cube Q(r·x_anchor, r), or Q_ν(r·x_anchor, r) with frame R_{ν⁺} for
/// jump data (ν⁺ the canonical representative of ±ν, so that Q_ν and Q_{−ν}
/// are the same grid). Throws std::invalid_argument when r/h < 8.
Grid cell_grid(const CellProblem& cp);

/// Full solver output for the cell problem; for jump data the datum's x0 is
/// moved to the cube center.
SolveResult solve_cell(const CellProblem& cp, const SolveOptions& opts = {});
/// Minimum energy of the cell problem.
double cell_value(const CellProblem& cp, const SolveOptions& opts = {});

struct ConvergenceRecord {
    std::string label;
    std::vector<double> r_values;
    std::vector<double> h_values;
    std::vector<double> normalized_values;
    std::vector<double> wall_time_ms;
    /// Last normalized value.
    double extrapolated = 0.0;
    /// Linear extrapolation in 1/r from the last two values; a diagnostic for
    /// the O(1/r) boundary-layer error.
    double richardson = 0.0;
    /// Last three values within 1% relative spread.
    bool plateau_flag = false;

    /// Columns r, h, normalized_value, wall_time_ms.
    std::string to_csv() const;
    json to_json() const;
    /// Normalized value against 1/r.
    std::string to_svg() const;
};

/// True when the last three values lie within `rel` relative spread.
bool plateau(const std::vector<double>& values, double rel = 0.01);

/// r ↦ m(ℓ_A, Q(r x, r))/r^d over `r_schedule` (increasing, >= 3 entries).
ConvergenceRecord estimate_f_lim(const IntegrandPair& pair, const SymMatrix& A, const std::vector<double>& r_schedule,
                                 const Vec& x_anchor, double h = 0.125, const SolveOptions& opts = {});
/// r ↦ m^{F^∞}(u_{rx,ζ,ν}, Q_ν(r x, r))/r^{d−1}.
ConvergenceRecord estimate_g_lim(const IntegrandPair& pair, const Vec& zeta, const Vec& nu,
                                 const std::vector<double>& r_schedule, const Vec& x_anchor, double h = 0.125,
                                 const SolveOptions& opts = {});

struct ScalingReport {
    double eps = 0.0;
    double rho = 0.0;
    double lhs = 0.0;  ///< m^{F_ε} on the small cube
    double rhs = 0.0;  ///< ε^k m on the blown-up cube (k = d or d−1)
    double difference = 0.0;
    double relative_gap = 0.0;
    /// Allowed |lhs − rhs|: 1e−6 + 2 tol_energy (relative) for the bulk
    /// identity, C ρ^{d−1+α} + C ε ρ^{d−1} for the surface estimate.
    double bound = 0.0;
    double constant_C = 0.0;
    bool pass = false;
    json to_json() const;
};

/// Both sides of m^{F_ε}(ℓ_A, Q(x,ρ)) = ε^d m^F(ℓ_A, Q(x/ε, ρ/ε)), on
/// lattices of spacing ε·h0 and h0 with exact node correspondence.
/// Throws std::invalid_argument for incommensurate grids.
ScalingReport check_scaling_identity(const IntegrandPair& pair, const SymMatrix& A, double eps, const Vec& x,
                                     double rho, double h0 = 0.125, const SolveOptions& opts = {});

/// C = max{c6, c6 c3|ζ|, C1 c3|ζ|, c6 (2 c3|ζ| + C2)^{1−α}} with C1 = 2 c3 c7/c1
/// and C2 = 2c6 + 2c6 (2c6(1−α))^{(1−α)/α}.
double surface_scaling_constant(const StructuralConstants& k, double zeta_norm);

/// m^{F_ε}(u_{x,ζ,ν}, Q_ν(x,ρ)) against ε^{d−1} m^{F^∞}(u_{x/ε,ζ,ν}, Q_ν(x/ε,ρ/ε)).
/// Throws std::invalid_argument unless ε < 1/(2 c6) and the grids are
/// commensurate.
ScalingReport check_surface_scaling(const IntegrandPair& pair, const Vec& zeta, const Vec& nu, double eps,
                                    const Vec& x, double rho, double h0 = 0.125, const SolveOptions& opts = {});

struct GJSample {
    Vec zeta;
    Vec nu;
    double g_lim = 0.0;
    double f_inf_lim = 0.0;
    double gap = 0.0;  ///< |g − f^∞| / max(g, f^∞), 0 when both vanish
    ConvergenceRecord g_record;
    std::vector<ConvergenceRecord> f_records;  ///< one per t
    std::vector<double> t_values;
};

struct GJReport {
    std::vector<GJSample> samples;
    double tolerance = 0.05;
    bool pass = false;
    json to_json() const;
};

/// g_lim(ζ,ν) against f^∞_lim(ζ⊙ν). The right side is the t → ∞ value of
/// f_lim(t ζ⊙ν)/t over t ∈ {1,2,4,8}, fitted by v(t) = v∞ + C t^{−α}. For a
/// positively 1-homogeneous bulk integrand the lattice minimand scales
/// exactly, so only t = 1 is solved and the other values are its multiples.
GJReport check_gj_identity(const IntegrandPair& pair, const std::vector<std::pair<Vec, Vec>>& samples,
                           const std::vector<double>& r_schedule, const Vec& x_anchor, double h = 0.125,
                           const SolveOptions& opts = {}, double tolerance = 0.05);

/// v∞ of the least-squares fit v(t) = v∞ + C t^{−α}.
double fit_recession_limit(const std::vector<double>& t, const std::vector<double>& v, double alpha);

struct GammaReport {
    std::vector<double> eps;
    std::vector<double> minima;
    std::vector<double> h_values;
    double limit_minimum = 0.0;
    std::vector<double> relative_gaps;
    ConvergenceRecord limit_record;
    double tolerance = 0.05;
    bool pass = false;
    json to_json() const;
};

/// Minima of F_ε(·, U) on the cube U = Q(center, side) under an affine datum,
/// on lattices of spacing ε·h0, against the limit minimum f_lim(A)·|U| of
/// F^{f_lim,g_lim} (ℓ_A is a minimizer of the limit cell problem). f_lim(A)
/// is taken from estimate_f_lim over `limit_r` (Richardson value).
/// pass: the gap at the smallest ε is within `tolerance`.
GammaReport gamma_minima_check(const IntegrandPair& pair, const std::vector<double>& eps_schedule, const Vec& center,
                               double side, const SymMatrix& A, const std::vector<double>& limit_r, double h0 = 0.125,
                               const SolveOptions& opts = {}, double tolerance = 0.05);

/// Same probe for a jump datum u_{center,ζ,ν} on Q_ν(center, side); the
/// limit minimum is g_lim(ζ,ν)·side^{d−1} with g_lim from estimate_g_lim.
GammaReport gamma_minima_check_jump(const IntegrandPair& pair, const std::vector<double>& eps_schedule,
                                    const Vec& center, double side, const Vec& zeta, const Vec& nu,
                                    const std::vector<double>& limit_r, double h0 = 0.125,
                                    const SolveOptions& opts = {}, double tolerance = 0.05);

}  // namespace bdhomog
