#pragma once

#include <string>
#include <vector>

#include "bdhomog/integrands.hpp"
#include "bdhomog/io.hpp"
#include "bdhomog/solver.hpp"

namespace bdhomog {

/// Step function with values[i] on [knots[i], knots[i+1]), extended
/// periodically with period knots.back() − knots.front().
struct PiecewiseConstant1D {
    std::vector<double> knots{0.0, 1.0};
    std::vector<double> values{1.0};

    static PiecewiseConstant1D constant(double v);

    double operator()(double x) const;
    /// Smallest value taken on [lo, hi].
    double min_on(double lo, double hi) const;
    double min() const;
    double max() const;
    bool is_constant() const;
    /// Throws std::invalid_argument unless knots increase and values are > 0.
    void validate(const std::string& what) const;
};

struct AffinePiece {
    double slope = 1.0;
    double intercept = 0.0;
};

/// σ(s) = min_i (slope_i s + intercept_i), concave by construction.
struct JumpShape {
    std::vector<AffinePiece> pieces{AffinePiece{}};

    static JumpShape linear(double slope);

    double operator()(double s) const;
    /// Slope at infinity s∞ (the smallest slope).
    double slope_at_infinity() const;
    /// σ'(0+).
    double initial_slope() const;
    double max_intercept() const;
    /// Abscissae s > 0 where two pieces cross.
    std::vector<double> kinks() const;
    bool is_linear() const;
    /// Throws std::invalid_argument unless σ(0) = 0, σ is nondecreasing and
    /// s∞ > 0.
    void validate() const;
};

/// f(x,A) = a(x)|A|, g(x,ζ,ν) = θ(x)σ(|ζ|) on the line.
struct Profile1D {
    std::string name;
    PiecewiseConstant1D a;
    PiecewiseConstant1D theta;
    JumpShape sigma;

    void validate() const;
    /// Constants for the pair built by pair_1d. With a positive intercept in
    /// σ the (g5) constant c7 holds only for |ζ| >= 1.
    StructuralConstants constants() const;
};

/// min over s ∈ [0, |A|L] of (min a)(|A|L − s) + (min θ)σ(s), evaluated at
/// the endpoints and the kinks of σ. Throws std::invalid_argument for L <= 0.
double exact_cell_value_1d(const Profile1D& p, double A, double L);

/// The d = 1 integrand pair of the profile. When σ is linear g carries a
/// norm weight θ·σ'(0) and the lattice takes the convex path.
IntegrandPair pair_1d(const Profile1D& p);

struct OracleRow {
    double h = 0.0;
    double lattice_value = 0.0;
    double oracle_value = 0.0;
    double rel_gap = 0.0;
};

struct OracleReport {
    std::string profile;
    double A = 0.0;
    double L = 0.0;
    std::vector<OracleRow> rows;
    double tolerance = 0.02;
    /// Gap at the finest h within tolerance.
    bool pass = false;
    /// Gaps non-increasing as h decreases, up to 1e-12 of rounding.
    bool gap_non_increasing = false;

    /// Columns h, lattice_value, oracle_value, rel_gap.
    std::string to_csv() const;
    json to_json() const;
};

/// Lattice minimum of the d = 1 problem on [0, L] with datum x ↦ A x for
/// every h (strictly decreasing), against exact_cell_value_1d.
OracleReport validate_lattice_against_oracle(const Profile1D& p, double A, double L,
                                             const std::vector<double>& h_schedule, const SolveOptions& opts = {},
                                             double tolerance = 0.02);

/// "homogeneous" (a ≡ θ ≡ 1, σ(s) = s), "laminate" (a ∈ {1,2} in layers of
/// width 1/2, θ ≡ 1, σ(s) = 2s), "pure_jump" (a ≡ 10, θ ≡ 1, σ(s) = s).
Profile1D oracle_profile(const std::string& name);
std::vector<std::string> oracle_profile_names();

}  // namespace bdhomog
