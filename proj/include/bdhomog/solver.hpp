#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bdhomog/integrands.hpp"
#include "bdhomog/io.hpp"
#include "bdhomog/lattice.hpp"

namespace bdhomog {

struct SolveOptions {
    /// Soft-min temperatures, decreasing, last entry 0.
    std::vector<double> gnc_schedule{1.0, 0.3, 0.1, 0.03, 0.0};
    int max_sweeps = 500;
    /// Stage stops when a sweep lowers the energy by less than this fraction.
    double tol_energy = 1e-8;
    int multistart = 3;
    std::uint64_t seed = 0;
    /// Coarse hat and slab moves after every single-node sweep.
    bool multilevel = true;
    /// When every cell is radial the energy is convex: an ADMM solve
    /// (coarse-to-fine warm start) replaces the continuation stages, followed
    /// by at most `polish_sweeps` descent sweeps. All starts then reach the
    /// same minimum, so only the datum start runs.
    bool convex = true;
    int convex_max_iters = 20000;
    double convex_tol = 1e-6;
    int polish_sweeps = 3;

    /// Throws std::invalid_argument on an empty or non-decreasing schedule,
    /// a schedule not ending at 0, or non-positive tolerances/counts.
    void validate() const;
};

struct StageTrace {
    int start = 0;
    /// "descent" or "convex" (best energy at each checkpoint).
    std::string kind = "descent";
    double beta = 0.0;
    /// Energy after each sweep (the stage's start value first).
    std::vector<double> energies;
};

struct SolveResult {
    DisplacementField field;
    double energy = 0.0;
    int sweeps_used = 0;
    int start_index = 0;
    std::string certificate = "candidate_upper_bound";
    std::vector<double> start_energies;
    std::vector<StageTrace> trace;
    double datum_energy = 0.0;
    std::uint64_t seed = 0;
    double wall_time_ms = 0.0;

    /// energy, r, h, datum, sweeps, seed, wall_time_ms and the rest.
    json to_json() const;
};

/// Upper bound for the discrete minimum of the lattice energy under the
/// frozen shell. Multistart: datum; datum plus a deterministic perturbation;
/// for jump data a smeared interface, otherwise a second perturbation.
/// Each start runs the continuation stages by Gauss-Seidel coordinate descent
/// with exact line searches. Stages with β > 0 are skipped when every cell is
/// radial, since the soft-min is then the identity.
SolveResult minimize(const IntegrandPair& pair, const Grid& grid, const BoundaryDatum& datum,
                     const SolveOptions& opts = {});
/// Same, with extra start fields (relative node values on `grid`, shell equal
/// to the datum). Throws std::invalid_argument for a start that moves the
/// shell.
SolveResult minimize(const IntegrandPair& pair, const Grid& grid, const BoundaryDatum& datum, const SolveOptions& opts,
                     const std::vector<std::vector<double>>& extra_starts);

struct BruteForceResult {
    double energy = 0.0;
    DisplacementField field;
    std::size_t states = 0;
    /// Upper bound on how far the continuum-valued minimum over the box of
    /// offsets can lie below `energy`.
    double quantization_gap = 0.0;
};

/// Exhaustive minimum over node values datum + q, q_c in `quantization`
/// for every free node and component. At most 6 free nodes and 9 values.
/// Throws std::invalid_argument above 1e8 states.
BruteForceResult brute_force_min(const IntegrandPair& pair, const Grid& grid, const BoundaryDatum& datum,
                                 const std::vector<double>& quantization);

}  // namespace bdhomog
