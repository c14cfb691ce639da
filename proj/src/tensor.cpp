#include "bdhomog/tensor.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace bdhomog {

int Vec::check_dim(int d) {
    if (d < 1 || d > kMaxDim) {
        throw std::invalid_argument("dimension must be 1, 2 or 3, got " + std::to_string(d));
    }
    return d;
}

Vec::Vec(std::initializer_list<double> xs) : d_(check_dim(static_cast<int>(xs.size()))) {
    std::copy(xs.begin(), xs.end(), v_.begin());
}

Vec Vec::unit(int d, int i) {
    Vec e(d);
    if (i < 0 || i >= d) throw std::out_of_range("unit vector index out of range");
    e[i] = 1.0;
    return e;
}

double Vec::dot(const Vec& o) const {
    if (o.d_ != d_) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < d_; ++i) s += (*this)[i] * o[i];
    return s;
}

Vec Vec::operator+(const Vec& o) const {
    if (o.d_ != d_) throw std::invalid_argument("vector add: dimension mismatch");
    Vec r(d_);
    for (int i = 0; i < d_; ++i) r[i] = (*this)[i] + o[i];
    return r;
}

Vec Vec::operator-(const Vec& o) const {
    if (o.d_ != d_) throw std::invalid_argument("vector sub: dimension mismatch");
    Vec r(d_);
    for (int i = 0; i < d_; ++i) r[i] = (*this)[i] - o[i];
    return r;
}

Vec Vec::operator-() const {
    Vec r(d_);
    for (int i = 0; i < d_; ++i) r[i] = -(*this)[i];
    return r;
}

Vec Vec::operator*(double s) const {
    Vec r(d_);
    for (int i = 0; i < d_; ++i) r[i] = (*this)[i] * s;
    return r;
}

Vec Vec::operator/(double s) const {
    Vec r(d_);
    for (int i = 0; i < d_; ++i) r[i] = (*this)[i] / s;
    return r;
}

bool Vec::operator==(const Vec& o) const {
    if (o.d_ != d_) return false;
    for (int i = 0; i < d_; ++i)
        if ((*this)[i] != o[i]) return false;
    return true;
}

Matrix::Matrix(int d, std::initializer_list<double> row_major) : d_(Vec::check_dim(d)) {
    if (static_cast<int>(row_major.size()) != d * d) throw std::invalid_argument("Matrix: expected d*d entries");
    auto it = row_major.begin();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) (*this)(i, j) = *it++;
}

Matrix Matrix::identity(int d) {
    Matrix m(d);
    for (int i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_columns(std::initializer_list<Vec> cols) {
    const int d = static_cast<int>(cols.size());
    Matrix m(d);
    int j = 0;
    for (const Vec& c : cols) {
        if (c.dim() != d) throw std::invalid_argument("from_columns: column dimension mismatch");
        for (int i = 0; i < d; ++i) m(i, j) = c[i];
        ++j;
    }
    return m;
}

Vec Matrix::operator*(const Vec& x) const {
    if (x.dim() != d_) throw std::invalid_argument("matrix-vector: dimension mismatch");
    Vec r(d_);
    for (int i = 0; i < d_; ++i) {
        double s = 0.0;
        for (int j = 0; j < d_; ++j) s += (*this)(i, j) * x[j];
        r[i] = s;
    }
    return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (o.d_ != d_) throw std::invalid_argument("matrix product: dimension mismatch");
    Matrix r(d_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) {
            double s = 0.0;
            for (int k = 0; k < d_; ++k) s += (*this)(i, k) * o(k, j);
            r(i, j) = s;
        }
    return r;
}

Matrix Matrix::transpose() const {
    Matrix r(d_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) r(i, j) = (*this)(j, i);
    return r;
}

Vec Matrix::column(int j) const {
    Vec c(d_);
    for (int i = 0; i < d_; ++i) c[i] = (*this)(i, j);
    return c;
}

double Matrix::det() const {
    const Matrix& m = *this;
    switch (d_) {
        case 1: return m(0, 0);
        case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        default:
            return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                   m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                   m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }
}

double Matrix::norm() const {
    double s = 0.0;
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) s += (*this)(i, j) * (*this)(i, j);
    return std::sqrt(s);
}

SymMatrix::SymMatrix(const Matrix& m) : d_(m.dim()) {
    for (int i = 0; i < d_; ++i)
        for (int j = i; j < d_; ++j) set(i, j, 0.5 * (m(i, j) + m(j, i)));
}

SymMatrix::SymMatrix(int d, std::initializer_list<double> row_major) : SymMatrix(Matrix(d, row_major)) {}

SymMatrix SymMatrix::identity(int d) {
    SymMatrix m(d);
    for (int i = 0; i < d; ++i) m.set(i, i, 1.0);
    return m;
}

void SymMatrix::set(int i, int j, double v) {
    a_[idx(i, j)] = v;
    a_[idx(j, i)] = v;
}

double SymMatrix::norm() const {
    double s = 0.0;
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) s += (*this)(i, j) * (*this)(i, j);
    return std::sqrt(s);
}

double SymMatrix::trace() const {
    double s = 0.0;
    for (int i = 0; i < d_; ++i) s += (*this)(i, i);
    return s;
}

double SymMatrix::det() const { return full().det(); }

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
    if (o.d_ != d_) throw std::invalid_argument("SymMatrix add: dimension mismatch");
    SymMatrix r(d_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
    if (o.d_ != d_) throw std::invalid_argument("SymMatrix sub: dimension mismatch");
    SymMatrix r(d_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
}

SymMatrix SymMatrix::operator*(double s) const {
    SymMatrix r(d_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
    return r;
}

SymMatrix SymMatrix::operator/(double s) const {
    SymMatrix r(d_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] / s;
    return r;
}

bool SymMatrix::operator==(const SymMatrix& o) const { return d_ == o.d_ && a_ == o.a_; }

Matrix SymMatrix::full() const {
    Matrix m(d_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) m(i, j) = (*this)(i, j);
    return m;
}

namespace {

SymMatrix::Eigen eigen_jacobi3(const SymMatrix& s) {
    double a[3][3];
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = s(i, j);
    for (int sweep = 0; sweep < 64; ++sweep) {
        const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        const double diag = a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2];
        if (off <= 1e-36 * diag || off == 0.0) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - sn * akq;
                    a[k][q] = sn * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - sn * aqk;
                    a[q][k] = sn * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - sn * vkq;
                    v[k][q] = sn * vkp + c * vkq;
                }
            }
    }
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int x, int y) { return a[x][x] < a[y][y]; });
    SymMatrix::Eigen e;
    for (int k = 0; k < 3; ++k) {
        const int j = order[static_cast<std::size_t>(k)];
        e.values[static_cast<std::size_t>(k)] = a[j][j];
        e.vectors[static_cast<std::size_t>(k)] = Vec{v[0][j], v[1][j], v[2][j]};
    }
    return e;
}

}  // namespace

SymMatrix::Eigen SymMatrix::eigen() const {
    Eigen e;
    if (d_ == 1) {
        e.values[0] = (*this)(0, 0);
        e.vectors[0] = Vec{1.0};
        return e;
    }
    if (d_ == 2) {
        const double a = (*this)(0, 0), b = (*this)(0, 1), c = (*this)(1, 1);
        const double mean = 0.5 * (a + c);
        const double rad = std::hypot(0.5 * (a - c), b);
        e.values[0] = mean - rad;
        e.values[1] = mean + rad;
        // eigenvector of the larger eigenvalue
        double vx, vy;
        if (rad == 0.0) {
            vx = 1.0;
            vy = 0.0;
        } else if (a >= c) {
            vx = e.values[1] - c;
            vy = b;
        } else {
            vx = b;
            vy = e.values[1] - a;
        }
        const double nv = std::hypot(vx, vy);
        vx /= nv;
        vy /= nv;
        e.vectors[1] = Vec{vx, vy};
        e.vectors[0] = Vec{-vy, vx};
        return e;
    }
    return eigen_jacobi3(*this);
}

std::string SymMatrix::to_string() const {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < d_; ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < d_; ++j) os << (j ? ", " : "") << (*this)(i, j);
        os << ']';
    }
    os << ']';
    return os.str();
}

SymMatrix sym_tensor(const Vec& a, const Vec& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("sym_tensor: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                                    std::to_string(b.dim()) + ")");
    }
    const int d = a.dim();
    SymMatrix m(d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) m.set(i, j, 0.5 * (a[i] * b[j] + a[j] * b[i]));
    return m;
}

namespace {

bool in_upper_hemisphere(const Vec& nu) {
    for (int i = nu.dim() - 1; i >= 0; --i)
        if (nu[i] != 0.0) return nu[i] > 0.0;
    return true;
}

}  // namespace

Matrix rotation_for_normal(const Vec& nu) {
    const int d = nu.dim();
    if (std::abs(nu.norm() - 1.0) > 1e-12) throw std::invalid_argument("rotation_for_normal: ν must be a unit vector");
    if (d == 1) return Matrix(1, {nu[0]});
    if (d == 2) return Matrix(2, {nu[1], nu[0], -nu[0], nu[1]});
    if (!in_upper_hemisphere(nu)) {
        Matrix r = rotation_for_normal(-nu);
        for (int i = 0; i < 3; ++i) {
            r(i, 1) = -r(i, 1);
            r(i, 2) = -r(i, 2);
        }
        return r;
    }
    // Rodrigues rotation taking e3 to ν; ν3 >= 0 here so 1 + ν3 > 0.
    const double c = nu[2];
    const double vx = -nu[1], vy = nu[0];
    Matrix k(3, {0.0, 0.0, vy, 0.0, 0.0, -vx, -vy, vx, 0.0});
    Matrix k2 = k * k;
    Matrix r = Matrix::identity(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) += k(i, j) + k2(i, j) / (1.0 + c);
    return r;
}

RankOneDecomposition decompose_rank_one(const SymMatrix& B, double rel_tol) {
    RankOneDecomposition out;
    const int d = B.dim();
    if (d == 1) {
        if (B(0, 0) == 0.0) return out;
        out.count = 1;
        out.splits[0] = {Vec{B(0, 0)}, Vec{1.0}};
        return out;
    }
    const SymMatrix::Eigen e = B.eigen();
    double scale = 0.0;
    for (int k = 0; k < d; ++k) scale = std::max(scale, std::abs(e.values[static_cast<std::size_t>(k)]));
    if (scale == 0.0) return out;
    const double tol = rel_tol * scale;
    const double lo = e.values[0];
    const double hi = e.values[static_cast<std::size_t>(d - 1)];
    for (int k = 1; k + 1 < d; ++k)
        if (std::abs(e.values[static_cast<std::size_t>(k)]) > tol) return out;
    const double lp = hi > tol ? hi : 0.0;
    const double lm = lo < -tol ? lo : 0.0;
    if (lo > tol || hi < -tol) return out;  // two nonzero eigenvalues of equal sign
    const Vec& vp = e.vectors[static_cast<std::size_t>(d - 1)];
    const Vec& vm = e.vectors[0];
    const Vec a = vp * std::sqrt(lp) + vm * std::sqrt(-lm);
    const Vec b = vp * std::sqrt(lp) - vm * std::sqrt(-lm);
    const double na = a.norm(), nb = b.norm();
    out.splits[0] = {a * nb, b / nb};
    out.count = 1;
    if (lp > 0.0 && lm < 0.0) {
        out.splits[1] = {b * na, a / na};
        out.count = 2;
    }
    return out;
}

bool is_rank_one_decomposable(const SymMatrix& B, double rel_tol) {
    return B.norm() == 0.0 || decompose_rank_one(B, rel_tol).count > 0;
}

}  // namespace bdhomog
