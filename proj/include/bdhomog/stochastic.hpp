#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bdhomog/integrands.hpp"
#include "bdhomog/io.hpp"
#include "bdhomog/random_field.hpp"
#include "bdhomog/solver.hpp"

namespace bdhomog {

/// RandomField with the given seed and law (validated).
RandomField sample_field(std::uint64_t master_seed, const MarkLaw& law, int dim);

/// The random_checkerboard pair f = a(x)|A|, g = a(x)|ζ⊙ν| backed by `field`.
IntegrandPair pair_for_field(const RandomField& field);

/// Half-open box [lo_1,hi_1) × ... × [lo_d,hi_d).
struct Rectangle {
    Vec lo;
    Vec hi;

    int dim() const { return lo.dim(); }
    double volume() const;
    Rectangle shifted(const CellIndex& z) const;
    /// Throws std::invalid_argument for an empty box or mismatched corners.
    void validate() const;
    std::string describe() const;
};

struct SubadditiveSample {
    std::uint64_t seed = 0;
    Rectangle rect;
    SymMatrix A;
    double value = 0.0;
    double normalized = 0.0;
    /// C·vol(R) with C = c3|A| + c4.
    double upper_bound = 0.0;
    bool bound_ok = false;
    DisplacementField field;
    json to_json() const;
};

/// μ(ω, R) = minimum of the lattice energy with datum ℓ_A on R, spacing h.
SubadditiveSample mu(const RandomField& field, const SymMatrix& A, const Rectangle& R, double h,
                     const SolveOptions& opts = {}, const std::vector<std::vector<double>>& extra_starts = {});

struct SubadditivityReport {
    double whole = 0.0;
    std::vector<double> parts;
    double parts_sum = 0.0;
    /// Σ μ(R_i) − μ(R).
    double slack = 0.0;
    /// −n·tol_energy·max(1, Σ μ(R_i)).
    double allowed = 0.0;
    bool pass = false;
    json to_json() const;
};

/// μ(R) against Σ μ(R_i). The glued minimizers of the parts are offered to
/// the solver on R as an extra start, so the whole never loses to the
/// partition by more than rounding. Throws std::invalid_argument unless the
/// partition is exact and lattice-commensurate.
SubadditivityReport check_subadditivity(const RandomField& field, const SymMatrix& A, const Rectangle& R,
                                        const std::vector<Rectangle>& partition, double h,
                                        const SolveOptions& opts = {});

struct CovarianceReport {
    double shifted_rectangle = 0.0;  ///< μ(ω, R + z)
    double shifted_field = 0.0;      ///< μ(τ_z ω, R)
    double gap = 0.0;                ///< relative
    double allowed = 0.0;            ///< 2 tol_energy
    bool pass = false;
    json to_json() const;
};

CovarianceReport check_covariance(const RandomField& field, const SymMatrix& A, const Rectangle& R,
                                  const CellIndex& z, double h, const SolveOptions& opts = {});

/// One randomized subadditivity/covariance check.
struct SubadditiveTriple {
    std::uint64_t field_seed = 0;
    SymMatrix A;
    Rectangle R;
    std::vector<Rectangle> partition;
    /// Translation for the covariance check.
    CellIndex shift{};
    json to_json() const;
};

/// n triples drawn from `seed`: integer corners, sides in [2, max_side],
/// partitions into 2 or 3 boxes cut at multiples of 1/2, entries of A
/// uniform in [−1, 1], shifts in [−3, 3]^d.
std::vector<SubadditiveTriple> random_triples(std::uint64_t seed, int n, int dim, int max_side = 3);

struct TripleOutcome {
    SubadditiveTriple triple;
    SubadditivityReport subadditivity;
    CovarianceReport covariance;
    /// 0 <= μ(R) <= (c3|A| + c4) vol(R).
    bool bound_ok = false;
    bool pass = false;
    json to_json() const;
};

/// Runs both checks of a triple on the field drawn from (field_seed, law).
/// h must divide 1/2.
TripleOutcome run_triple(const MarkLaw& law, const SubadditiveTriple& t, double h = 0.25,
                         const SolveOptions& opts = {});

/// What the ergodic average measures: ℓ_A on Q(rx, r) normalized by r^d, or
/// the recession pair with u_{rx,ζ,ν} on Q_ν(rx, r) normalized by r^{d−1}.
struct ErgodicTarget {
    bool surface = false;
    SymMatrix A;
    Vec zeta;
    Vec nu;
};

struct ErgodicReport {
    std::vector<std::uint64_t> seeds;
    std::vector<double> r_values;
    /// values[s][i]: seed s at r_values[i].
    std::vector<std::vector<double>> values;
    std::vector<double> mean;
    std::vector<double> stddev;  ///< sample standard deviation (n − 1)
    bool bounds_ok = true;
    /// stddev at the last r does not exceed stddev at the first r.
    bool trend_ok = false;
    /// Columns seed, r, normalized_value.
    std::string to_csv() const;
    json to_json() const;
};

/// Per seed, the normalized cell value over `r_schedule` on the field drawn
/// from (seed, law). Requires at least 8 seeds. Seeds run on up to
/// `threads` workers (<= 0: all cores).
ErgodicReport ergodic_average(const MarkLaw& law, const ErgodicTarget& target, const std::vector<double>& r_schedule,
                              const std::vector<std::uint64_t>& seeds, const Vec& x_anchor, double h = 0.125,
                              const SolveOptions& opts = {}, int threads = 1);

/// Seeds base, base+1, ..., base+n−1.
std::vector<std::uint64_t> seed_range(std::uint64_t base, int n);

}  // namespace bdhomog
