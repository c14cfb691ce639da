#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "bdhomog/integrands.hpp"
#include "bdhomog/tensor.hpp"

namespace bdhomog {

using MultiIndex = std::array<int, kMaxDim>;

/// Affine datum ℓ_A(y) = Ay or elementary jump u_{x0,ζ,ν}(y) = ζ·[(y − x0)·ν > 0].
struct BoundaryDatum {
    enum class Kind { affine, jump };
    Kind kind = Kind::affine;
    Matrix A;
    Vec x0;
    Vec zeta;
    Vec nu;

    static BoundaryDatum affine(const Matrix& A);
    static BoundaryDatum affine(const SymMatrix& A);
    /// Throws std::invalid_argument unless ν is a unit vector.
    static BoundaryDatum jump(const Vec& x0, const Vec& zeta, const Vec& nu);

    int dim() const;
    /// Continuum value at y.
    Vec eval(const Vec& y) const;
    /// |A| (Frobenius) or |ζ|.
    double scale() const;
    std::string describe() const;
};

/// The representative of {ν, −ν} whose last nonzero coordinate is positive.
Vec canonical_normal(const Vec& nu);

/// Regular node lattice on a (possibly rotated) box.
///
/// Node i sits at local coordinate y_k = (i_k − (n_k − 1)/2)·h and physical
/// position center + frame·y. Each cell is split into d! Kuhn simplices along
/// its main diagonal.
class Grid {
public:
    Grid() = default;

    /// Cube of side `side` = (n − 1)·h. Throws std::invalid_argument when
    /// side/h is not an integer >= 2.
    static Grid cube(int d, double side, double h, const Vec& center, const Matrix& frame);
    static Grid cube(int d, double side, double h, const Vec& center);
    /// Axis-aligned box [lo, hi] with per-axis node counts.
    static Grid box(const Vec& lo, const Vec& hi, double h);

    int dim() const { return d_; }
    int n(int k) const { return n_[static_cast<std::size_t>(k)]; }
    const MultiIndex& n() const { return n_; }
    double h() const { return h_; }
    const Matrix& frame() const { return frame_; }
    const Vec& center() const { return center_; }
    bool rotated() const { return rotated_; }

    std::size_t num_nodes() const { return num_nodes_; }
    std::size_t num_cells() const { return num_cells_; }
    std::size_t stride(int k) const { return stride_[static_cast<std::size_t>(k)]; }

    MultiIndex node_multi(std::size_t idx) const;
    std::size_t node_index(const MultiIndex& m) const;
    MultiIndex cell_multi(std::size_t idx) const;
    std::size_t cell_index(const MultiIndex& m) const;
    /// Node index of the cell's lowest corner.
    std::size_t cell_base_node(std::size_t cell) const;

    Vec node_local(std::size_t idx) const;
    Vec node_position(std::size_t idx) const;
    Vec cell_center_local(std::size_t cell) const;
    Vec cell_center(std::size_t cell) const;

    /// Node lies in the frozen shell: some index is 0 or n_k − 1.
    bool is_shell(std::size_t idx) const;
    std::size_t num_free() const;

    /// Same box with spacing 2h when every n_k − 1 is even and at least
    /// `min_cells`; otherwise an empty grid (dim() == 0).
    Grid coarsened(int min_cells = 4) const;

    double side(int k) const { return (n(k) - 1) * h_; }
    double volume() const;
    std::string describe() const;

private:
    void finalize();

    int d_ = 0;
    MultiIndex n_{1, 1, 1};
    double h_ = 0.0;
    Matrix frame_;
    Vec center_;
    bool rotated_ = false;
    std::size_t num_nodes_ = 0;
    std::size_t num_cells_ = 0;
    std::array<std::size_t, kMaxDim> stride_{};
    std::array<std::size_t, kMaxDim> cell_stride_{};
};

/// Node vectors stored relative to `offset`: the absolute value at node i is
/// offset + relative(i). Energies only see differences, so translated or
/// sign-flipped copies of a problem share bit-identical relative data.
struct DisplacementField {
    Grid grid;
    BoundaryDatum datum;
    Vec offset;
    std::vector<double> values;        ///< relative, node-major (d entries per node)
    std::vector<double> datum_values;  ///< relative datum at every node

    Vec relative(std::size_t node) const;
    Vec value(std::size_t node) const;
    void set_relative(std::size_t node, const Vec& v);
    /// Every shell node carries the datum value exactly.
    bool shell_matches_datum() const;
    /// Adds a rigid motion x ↦ Wx + b (W skew) to every node, shell included.
    void add_rigid_motion(const Matrix& W, const Vec& b);
};

/// For jump data: the signed offset (node − x0)·ν⁺ of every node, with ν⁺ the
/// canonical normal; values within rounding of the plane are set to 0.
/// Affine data yield an empty vector.
std::vector<double> interface_coordinates(const Grid& grid, const BoundaryDatum& datum);

/// The datum evaluated at every node. Jump data classify nodes by the
/// canonical normal, and nodes on the interface plane (within rounding) go
/// to its negative side.
DisplacementField apply_datum(const Grid& grid, const BoundaryDatum& datum);

/// Symmetric P1 gradients of the d! Kuhn simplices of `cell`, physical frame.
std::vector<SymMatrix> simplex_strains(const DisplacementField& u, std::size_t cell);
/// Mean of simplex_strains: the cell's discrete symmetric gradient.
SymMatrix discrete_sym_gradient(const DisplacementField& u, std::size_t cell);

/// sym(J Fᵀ) for J(c, a) = ∂u_c/∂y_a in local coordinates; F = nullptr
/// means the identity frame.
SymMatrix strain_from_jacobian(const double J[kMaxDim][kMaxDim], int d, const Matrix* frame);

/// Number of Kuhn simplices per cell (d!).
int simplices_per_cell(int d);

/// Per-cell energy density ψ_h(x, A) = min(f(x,A), ĝ(x, hA)/h) on a fixed
/// grid, with an optional soft-min temperature β for continuation.
class LatticeEnergy {
public:
    LatticeEnergy(const IntegrandPair& pair, const Grid& grid);

    const Grid& grid() const { return grid_; }
    const IntegrandPair& pair() const { return pair_; }

    /// True when ψ_h reduces to w·Φ(|A|) on the cell.
    bool cell_radial(std::size_t cell) const { return radial_[cell] != 0; }
    double cell_weight(std::size_t cell) const { return weight_[cell]; }
    Profile profile() const { return profile_; }
    bool all_radial() const { return all_radial_; }
    const Vec& cell_x(std::size_t cell) const { return xc_[cell]; }
    double simplex_volume() const { return simplex_volume_; }

    /// ψ_h at a cell for a physical strain E; β > 0 replaces min by the
    /// shifted soft-min with temperature β·f(x,E).
    double psi(std::size_t cell, const SymMatrix& E, double beta = 0.0) const;

    /// Energy of one cell from relative node values.
    double cell_energy(const std::vector<double>& values, std::size_t cell, double beta = 0.0) const;
    /// Σ over cells, summed pairwise in a fixed order.
    double total(const std::vector<double>& values, double beta = 0.0) const;

    /// Physical strain of simplex `s` of `cell` for an arbitrary node vector
    /// field given by `values`.
    SymMatrix strain(const std::vector<double>& values, std::size_t cell, int s) const;

    /// Corner offsets (node index deltas) of simplex s, vertices v_0..v_d.
    const std::vector<std::array<std::size_t, kMaxDim + 1>>& simplex_vertices() const { return simplex_nodes_; }
    /// Axis traversed by edge j of simplex s.
    int simplex_axis(int s, int j) const { return axes_[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)]; }

private:
    IntegrandPair pair_;
    Grid grid_;
    Profile profile_ = Profile::generic;
    bool all_radial_ = false;
    double simplex_volume_ = 0.0;
    std::vector<char> radial_;
    std::vector<double> weight_;
    std::vector<Vec> xc_;
    std::vector<std::array<std::size_t, kMaxDim + 1>> simplex_nodes_;
    std::vector<std::array<int, kMaxDim>> axes_;
};

/// Σ_cells h^d·ψ_h(x_c, E_h u(c)) for the field's grid.
double assemble_energy(const DisplacementField& u, const IntegrandPair& pair);

/// Pairwise (tree) summation, deterministic for a given input order.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

/// ψ_h min replaced by min + T(log 2 − log1p(exp(−|a−b|/T))); equals min(a,b)
/// for T = 0 or a = b.
double shifted_softmin(double a, double b, double T);

// ---------------------------------------------------------------- serialization

/// Little-endian layout: magic "BDHF", u32 version, i32 d, i32 n[d], f64 h,
/// f64 frame[d*d] row-major, f64 center[d], then the absolute node vectors
/// (f64, node-major). Datum information is not stored.
void write_field_binary(std::ostream& os, const DisplacementField& u);
/// Reads a field written by write_field_binary. The result carries zero
/// offset and an affine zero datum.
DisplacementField read_field_binary(std::istream& is);
/// Columns: node, i_0..i_{d-1}, x_0.., u_0..
void write_field_csv(std::ostream& os, const DisplacementField& u);

}  // namespace bdhomog
