#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace bdhomog {

constexpr int kMaxDim = 3;

/// Small fixed-capacity vector of R^d, d in {1,2,3}.
class Vec {
public:
    Vec() = default;
    explicit Vec(int d) : d_(check_dim(d)) {}
    Vec(std::initializer_list<double> xs);

    static Vec unit(int d, int i);

    int dim() const { return d_; }
    double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return v_[static_cast<std::size_t>(i)]; }

    double dot(const Vec& o) const;
    double norm() const { return std::sqrt(dot(*this)); }

    Vec operator+(const Vec& o) const;
    Vec operator-(const Vec& o) const;
    Vec operator-() const;
    Vec operator*(double s) const;
    Vec operator/(double s) const;
    bool operator==(const Vec& o) const;

    static int check_dim(int d);

private:
    int d_ = 0;
    std::array<double, kMaxDim> v_{};
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

/// Full d×d matrix (frames, affine data).
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int d) : d_(Vec::check_dim(d)) {}
    Matrix(int d, std::initializer_list<double> row_major);

    static Matrix identity(int d);
    /// Matrix whose k-th column is cols[k].
    static Matrix from_columns(std::initializer_list<Vec> cols);

    int dim() const { return d_; }
    double operator()(int i, int j) const { return a_[idx(i, j)]; }
    double& operator()(int i, int j) { return a_[idx(i, j)]; }

    Vec operator*(const Vec& x) const;
    Matrix operator*(const Matrix& o) const;
    Matrix transpose() const;
    Vec column(int j) const;
    double det() const;
    double norm() const;

private:
    static std::size_t idx(int i, int j) { return static_cast<std::size_t>(i * kMaxDim + j); }
    int d_ = 0;
    std::array<double, kMaxDim * kMaxDim> a_{};
};

/// Symmetric d×d matrix; every constructor symmetrizes, so entries are
/// exactly symmetric.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int d) : d_(Vec::check_dim(d)) {}
    /// Symmetric part of `m`.
    explicit SymMatrix(const Matrix& m);
    SymMatrix(int d, std::initializer_list<double> row_major);

    static SymMatrix identity(int d);
    static SymMatrix zero(int d) { return SymMatrix(d); }

    int dim() const { return d_; }
    double operator()(int i, int j) const { return a_[idx(i, j)]; }
    /// Sets both (i,j) and (j,i).
    void set(int i, int j, double v);

    /// Frobenius norm.
    double norm() const;
    double trace() const;
    double det() const;

    SymMatrix operator+(const SymMatrix& o) const;
    SymMatrix operator-(const SymMatrix& o) const;
    SymMatrix operator*(double s) const;
    SymMatrix operator/(double s) const;
    bool operator==(const SymMatrix& o) const;

    Matrix full() const;

    /// Eigenvalues in ascending order with orthonormal eigenvectors
    /// (vectors[k] belongs to values[k]).
    struct Eigen {
        std::array<double, kMaxDim> values{};
        std::array<Vec, kMaxDim> vectors{};
    };
    Eigen eigen() const;

    std::string to_string() const;

private:
    static std::size_t idx(int i, int j) { return static_cast<std::size_t>(i * kMaxDim + j); }
    int d_ = 0;
    std::array<double, kMaxDim * kMaxDim> a_{};
};

inline SymMatrix operator*(double s, const SymMatrix& m) { return m * s; }

/// a ⊙ b, the symmetrized tensor product (a_i b_j + a_j b_i) / 2.
SymMatrix sym_tensor(const Vec& a, const Vec& b);

/// The fixed rotation R_ν with R_ν e_d = ν and R_{-ν}(Q) = R_ν(Q).
/// d = 1 returns the 1×1 matrix [ν]; SO(1) cannot map e_1 to -e_1.
Matrix rotation_for_normal(const Vec& nu);

/// One (ζ, ν) pair with ζ ⊙ ν = B, |ν| = 1.
struct RankOneSplit {
    Vec zeta;
    Vec nu;
};

/// All decompositions B = ζ ⊙ ν up to the symmetry (ζ,ν) -> (-ζ,-ν) and
/// swapping roles: at most two. Returns count 0 when B is not of the form
/// ζ ⊙ ν (more than two nonzero eigenvalues, or two of equal sign).
/// B = 0 yields count 0 too; callers treat it separately.
struct RankOneDecomposition {
    int count = 0;
    std::array<RankOneSplit, 2> splits{};
};
RankOneDecomposition decompose_rank_one(const SymMatrix& B, double rel_tol = 1e-9);

/// True when B = ζ ⊙ ν for some ζ and unit ν (B = 0 included).
bool is_rank_one_decomposable(const SymMatrix& B, double rel_tol = 1e-9);

}  // namespace bdhomog
