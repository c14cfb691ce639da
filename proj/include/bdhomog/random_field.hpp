#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "bdhomog/tensor.hpp"

namespace bdhomog {

using CellIndex = std::array<std::int64_t, kMaxDim>;

/// Law of the i.i.d. cell marks.
struct MarkLaw {
    enum class Kind { bernoulli, uniform, periodic };
    Kind kind = Kind::bernoulli;
    double p = 0.5;       ///< bernoulli: probability of a_soft
    double a_soft = 1.0;  ///< bernoulli / periodic
    double a_hard = 2.0;  ///< bernoulli / periodic
    double a_min = 1.0;   ///< uniform
    double a_max = 2.0;   ///< uniform

    static MarkLaw bernoulli(double p, double a_soft, double a_hard);
    static MarkLaw uniform(double a_min, double a_max);
    /// One-point law: the deterministic checkerboard (soft where Σ z_i is even).
    static MarkLaw periodic(double a_soft, double a_hard);

    /// Throws std::invalid_argument on non-positive values or p outside [0,1].
    void validate() const;
    double lower() const;
    double upper() const;
    std::string describe() const;
};

/// Stationary random coefficient on unit cells z + [-1/2, 1/2)^d.
///
/// mark(z) is a pure function of (master_seed, z + shift), so the field is
/// reproducible and the group action τ_z is an exact index shift.
class RandomField {
public:
    RandomField(std::uint64_t master_seed, MarkLaw law, int dim);

    std::uint64_t seed() const { return seed_; }
    const MarkLaw& law() const { return law_; }
    int dim() const { return dim_; }
    const CellIndex& shift() const { return shift_; }

    double mark(const CellIndex& z) const;
    /// Mark of the unit cell containing x.
    double mark_at(const Vec& x) const;
    static CellIndex cell_of(const Vec& x);

    /// τ_{z0}: the returned field satisfies shifted.mark(z) == mark(z + z0).
    RandomField shift_by(const CellIndex& z0) const;

private:
    std::uint64_t seed_;
    MarkLaw law_;
    int dim_;
    CellIndex shift_{};
};

/// 64-bit mixing hash (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

}  // namespace bdhomog
