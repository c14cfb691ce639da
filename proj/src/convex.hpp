#pragma once

#include <vector>

#include "bdhomog/lattice.hpp"

namespace bdhomog::detail {

enum class ConvexMethod { pdhg, admm };

struct ConvexOptions {
    ConvexMethod method = ConvexMethod::admm;
    int max_iters = 20000;
    /// Stop when the best energy improves by less than this fraction over
    /// one window of iterations.
    double tol = 1e-6;
    int window = 400;
    bool multigrid = true;
};

struct ConvexOutcome {
    int iterations = 0;
    /// Best energy found at each checkpoint (non-increasing).
    std::vector<double> energies;
};

/// Minimizes Σ vol·w·Φ(|E|) for an energy whose cells are all radial, by
/// ADMM (default) or diagonally preconditioned Chambolle-Pock. `values` holds
/// the relative node field on entry (start point) and the best iterate on
/// exit; shell entries are never touched. Works in units of h·scale so that
/// power-of-two rescalings of h or of the datum give bit-identical iterates.
ConvexOutcome convex_minimize(const LatticeEnergy& en, const BoundaryDatum& datum, std::vector<double>& values,
                              const ConvexOptions& opts);

}  // namespace bdhomog::detail
