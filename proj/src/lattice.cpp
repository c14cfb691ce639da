#include "bdhomog/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bdhomog {

// ---------------------------------------------------------------- datum

BoundaryDatum BoundaryDatum::affine(const Matrix& A) {
    BoundaryDatum b;
    b.kind = Kind::affine;
    b.A = A;
    return b;
}

BoundaryDatum BoundaryDatum::affine(const SymMatrix& A) { return affine(A.full()); }

BoundaryDatum BoundaryDatum::jump(const Vec& x0, const Vec& zeta, const Vec& nu) {
    if (x0.dim() != zeta.dim() || zeta.dim() != nu.dim()) throw std::invalid_argument("jump datum: dimension mismatch");
    if (std::abs(nu.norm() - 1.0) > 1e-12) throw std::invalid_argument("jump datum: ν must be a unit vector");
    BoundaryDatum b;
    b.kind = Kind::jump;
    b.x0 = x0;
    b.zeta = zeta;
    b.nu = nu;
    return b;
}

int BoundaryDatum::dim() const { return kind == Kind::affine ? A.dim() : zeta.dim(); }

Vec BoundaryDatum::eval(const Vec& y) const {
    if (kind == Kind::affine) return A * y;
    return (y - x0).dot(nu) > 0.0 ? zeta : Vec(zeta.dim());
}

double BoundaryDatum::scale() const { return kind == Kind::affine ? A.norm() : zeta.norm(); }

namespace {

std::string vec_repr(const Vec& v) {
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (int i = 0; i < v.dim(); ++i) os << (i ? ", " : "") << v[i];
    os << ']';
    return os.str();
}

std::string mat_repr(const Matrix& m) {
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (int i = 0; i < m.dim(); ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < m.dim(); ++j) os << (j ? ", " : "") << m(i, j);
        os << ']';
    }
    os << ']';
    return os.str();
}

}  // namespace

std::string BoundaryDatum::describe() const {
    if (kind == Kind::affine) return "affine(A=" + mat_repr(A) + ")";
    return "jump(x0=" + vec_repr(x0) + ", zeta=" + vec_repr(zeta) + ", nu=" + vec_repr(nu) + ")";
}

Vec canonical_normal(const Vec& nu) {
    for (int i = nu.dim() - 1; i >= 0; --i)
        if (nu[i] != 0.0) return nu[i] > 0.0 ? nu : -nu;
    throw std::invalid_argument("canonical_normal: zero vector");
}

// ---------------------------------------------------------------- grid

namespace {

int node_count(double side, double h) {
    if (!(h > 0.0) || !(side > 0.0)) throw std::invalid_argument("grid: side and h must be positive");
    const double q = side / h;
    const double qr = std::round(q);
    if (std::abs(q - qr) > 1e-9 * std::max(1.0, q) || qr < 2.0)
        throw std::invalid_argument("grid: side/h must be an integer >= 2 (incommensurate grid)");
    if (qr > 1e6) throw std::invalid_argument("grid: too many nodes");
    return static_cast<int>(qr) + 1;
}

void check_frame(const Matrix& F) {
    const int d = F.dim();
    const Matrix P = F.transpose() * F;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (std::abs(P(i, j) - (i == j ? 1.0 : 0.0)) > 1e-12) throw std::invalid_argument("grid: frame must be orthonormal");
    if (!(F.det() > 0.0)) throw std::invalid_argument("grid: frame must have det +1");
}

bool is_identity(const Matrix& F) {
    for (int i = 0; i < F.dim(); ++i)
        for (int j = 0; j < F.dim(); ++j)
            if (F(i, j) != (i == j ? 1.0 : 0.0)) return false;
    return true;
}

}  // namespace

void Grid::finalize() {
    num_nodes_ = 1;
    num_cells_ = 1;
    for (int k = 0; k < d_; ++k) {
        stride_[static_cast<std::size_t>(k)] = num_nodes_;
        cell_stride_[static_cast<std::size_t>(k)] = num_cells_;
        num_nodes_ *= static_cast<std::size_t>(n(k));
        num_cells_ *= static_cast<std::size_t>(n(k) - 1);
    }
    rotated_ = !is_identity(frame_);
}

Grid Grid::cube(int d, double side, double h, const Vec& center, const Matrix& frame) {
    Vec::check_dim(d);
    if (center.dim() != d || frame.dim() != d) throw std::invalid_argument("grid: dimension mismatch");
    check_frame(frame);
    Grid g;
    g.d_ = d;
    const int nn = node_count(side, h);
    for (int k = 0; k < d; ++k) g.n_[static_cast<std::size_t>(k)] = nn;
    g.h_ = h;
    g.frame_ = frame;
    g.center_ = center;
    g.finalize();
    return g;
}

Grid Grid::cube(int d, double side, double h, const Vec& center) {
    return cube(d, side, h, center, Matrix::identity(d));
}

Grid Grid::box(const Vec& lo, const Vec& hi, double h) {
    const int d = lo.dim();
    if (hi.dim() != d) throw std::invalid_argument("grid: dimension mismatch");
    Grid g;
    g.d_ = d;
    for (int k = 0; k < d; ++k) g.n_[static_cast<std::size_t>(k)] = node_count(hi[k] - lo[k], h);
    g.h_ = h;
    g.frame_ = Matrix::identity(d);
    g.center_ = (lo + hi) * 0.5;
    g.finalize();
    return g;
}

Grid Grid::coarsened(int min_cells) const {
    Grid g = *this;
    for (int k = 0; k < d_; ++k) {
        const int cells = n(k) - 1;
        if (cells % 2 != 0 || cells / 2 < min_cells) return Grid();
        g.n_[static_cast<std::size_t>(k)] = cells / 2 + 1;
    }
    g.h_ = 2.0 * h_;
    g.finalize();
    return g;
}

MultiIndex Grid::node_multi(std::size_t idx) const {
    MultiIndex m{0, 0, 0};
    for (int k = 0; k < d_; ++k) {
        m[static_cast<std::size_t>(k)] = static_cast<int>(idx % static_cast<std::size_t>(n(k)));
        idx /= static_cast<std::size_t>(n(k));
    }
    return m;
}

std::size_t Grid::node_index(const MultiIndex& m) const {
    std::size_t idx = 0;
    for (int k = 0; k < d_; ++k) {
        const int mk = m[static_cast<std::size_t>(k)];
        if (mk < 0 || mk >= n(k)) throw std::out_of_range("grid: node index out of range");
        idx += static_cast<std::size_t>(mk) * stride(k);
    }
    return idx;
}

MultiIndex Grid::cell_multi(std::size_t idx) const {
    if (idx >= num_cells_) throw std::out_of_range("grid: cell index out of range");
    MultiIndex m{0, 0, 0};
    for (int k = 0; k < d_; ++k) {
        m[static_cast<std::size_t>(k)] = static_cast<int>(idx % static_cast<std::size_t>(n(k) - 1));
        idx /= static_cast<std::size_t>(n(k) - 1);
    }
    return m;
}

std::size_t Grid::cell_index(const MultiIndex& m) const {
    std::size_t idx = 0;
    for (int k = 0; k < d_; ++k) {
        const int mk = m[static_cast<std::size_t>(k)];
        if (mk < 0 || mk >= n(k) - 1) throw std::out_of_range("grid: cell index out of range");
        idx += static_cast<std::size_t>(mk) * cell_stride_[static_cast<std::size_t>(k)];
    }
    return idx;
}

std::size_t Grid::cell_base_node(std::size_t cell) const {
    const MultiIndex m = cell_multi(cell);
    std::size_t idx = 0;
    for (int k = 0; k < d_; ++k) idx += static_cast<std::size_t>(m[static_cast<std::size_t>(k)]) * stride(k);
    return idx;
}

Vec Grid::node_local(std::size_t idx) const {
    const MultiIndex m = node_multi(idx);
    Vec y(d_);
    for (int k = 0; k < d_; ++k) y[k] = (2.0 * m[static_cast<std::size_t>(k)] - (n(k) - 1)) * (0.5 * h_);
    return y;
}

Vec Grid::node_position(std::size_t idx) const {
    const Vec y = node_local(idx);
    return rotated_ ? center_ + frame_ * y : center_ + y;
}

Vec Grid::cell_center_local(std::size_t cell) const {
    const MultiIndex m = cell_multi(cell);
    Vec y(d_);
    for (int k = 0; k < d_; ++k) y[k] = (2.0 * m[static_cast<std::size_t>(k)] + 1.0 - (n(k) - 1)) * (0.5 * h_);
    return y;
}

Vec Grid::cell_center(std::size_t cell) const {
    const Vec y = cell_center_local(cell);
    return rotated_ ? center_ + frame_ * y : center_ + y;
}

bool Grid::is_shell(std::size_t idx) const {
    const MultiIndex m = node_multi(idx);
    for (int k = 0; k < d_; ++k) {
        const int mk = m[static_cast<std::size_t>(k)];
        if (mk == 0 || mk == n(k) - 1) return true;
    }
    return false;
}

std::size_t Grid::num_free() const {
    std::size_t f = 1;
    for (int k = 0; k < d_; ++k) f *= static_cast<std::size_t>(std::max(0, n(k) - 2));
    return f;
}

double Grid::volume() const {
    double v = 1.0;
    for (int k = 0; k < d_; ++k) v *= side(k);
    return v;
}

std::string Grid::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "grid(d=" << d_ << ", n=[";
    for (int k = 0; k < d_; ++k) os << (k ? ", " : "") << n(k);
    os << "], h=" << h_ << ", center=" << vec_repr(center_) << ", frame=" << mat_repr(frame_) << ")";
    return os.str();
}

// ---------------------------------------------------------------- field

Vec DisplacementField::relative(std::size_t node) const {
    const int d = grid.dim();
    Vec v(d);
    for (int c = 0; c < d; ++c) v[c] = values[node * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)];
    return v;
}

Vec DisplacementField::value(std::size_t node) const { return offset + relative(node); }

void DisplacementField::set_relative(std::size_t node, const Vec& v) {
    const int d = grid.dim();
    for (int c = 0; c < d; ++c) values[node * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] = v[c];
}

bool DisplacementField::shell_matches_datum() const {
    const std::size_t d = static_cast<std::size_t>(grid.dim());
    for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
        if (!grid.is_shell(i)) continue;
        for (std::size_t c = 0; c < d; ++c)
            if (values[i * d + c] != datum_values[i * d + c]) return false;
    }
    return true;
}

void DisplacementField::add_rigid_motion(const Matrix& W, const Vec& b) {
    const std::size_t d = static_cast<std::size_t>(grid.dim());
    for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
        const Vec w = W * grid.node_position(i) + b;
        for (std::size_t c = 0; c < d; ++c) {
            values[i * d + c] += w[static_cast<int>(c)];
            datum_values[i * d + c] += w[static_cast<int>(c)];
        }
    }
}

std::vector<double> interface_coordinates(const Grid& grid, const BoundaryDatum& datum) {
    if (datum.kind != BoundaryDatum::Kind::jump) return {};
    if (datum.dim() != grid.dim()) throw std::invalid_argument("interface_coordinates: dimension mismatch");
    const Vec np = canonical_normal(datum.nu);
    const Vec w = grid.rotated() ? grid.frame().transpose() * np : np;
    const Vec c0v = grid.center() - datum.x0;
    const double c0 = c0v.dot(np);
    std::vector<double> out(grid.num_nodes());
    for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
        const Vec y = grid.node_local(i);
        const double s = c0 + y.dot(w);
        const double tol = 1e-12 * (grid.h() + c0v.norm() + y.norm());
        out[i] = std::abs(s) <= tol ? 0.0 : s;
    }
    return out;
}

DisplacementField apply_datum(const Grid& grid, const BoundaryDatum& datum) {
    const int d = grid.dim();
    if (datum.dim() != d) throw std::invalid_argument("apply_datum: dimension mismatch");
    DisplacementField u;
    u.grid = grid;
    u.datum = datum;
    u.values.assign(grid.num_nodes() * static_cast<std::size_t>(d), 0.0);
    const std::size_t du = static_cast<std::size_t>(d);
    if (datum.kind == BoundaryDatum::Kind::affine) {
        u.offset = datum.A * grid.center();
        for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
            const Vec y = grid.node_local(i);
            const Vec rel = datum.A * (grid.rotated() ? grid.frame() * y : y);
            for (std::size_t c = 0; c < du; ++c) u.values[i * du + c] = rel[static_cast<int>(c)];
        }
    } else {
        const Vec np = canonical_normal(datum.nu);
        const double sigma = np.dot(datum.nu) > 0.0 ? 1.0 : -1.0;
        const Vec pos_rel = datum.zeta * sigma;
        u.offset = sigma > 0.0 ? Vec(d) : datum.zeta;
        const std::vector<double> s = interface_coordinates(grid, datum);
        for (std::size_t i = 0; i < grid.num_nodes(); ++i)
            if (s[i] > 0.0)
                for (std::size_t c = 0; c < du; ++c) u.values[i * du + c] = pos_rel[static_cast<int>(c)];
    }
    u.datum_values = u.values;
    return u;
}

// ---------------------------------------------------------------- strains

int simplices_per_cell(int d) {
    int f = 1;
    for (int k = 2; k <= d; ++k) f *= k;
    return f;
}

namespace {

struct KuhnTable {
    std::vector<std::array<int, kMaxDim>> perms;
};

KuhnTable kuhn_table(int d) {
    KuhnTable t;
    std::array<int, kMaxDim> p{0, 1, 2};
    do {
        t.perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.begin() + d));
    return t;
}

}  // namespace

SymMatrix strain_from_jacobian(const double J[kMaxDim][kMaxDim], int d, const Matrix* F) {
    SymMatrix E(d);
    if (F == nullptr) {
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) E.set(i, j, 0.5 * (J[i][j] + J[j][i]));
        return E;
    }
    double M[kMaxDim][kMaxDim];
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += J[i][k] * (*F)(j, k);
            M[i][j] = s;
        }
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) E.set(i, j, 0.5 * (M[i][j] + M[j][i]));
    return E;
}

namespace {

SymMatrix simplex_strain_impl(const Grid& g, const std::vector<double>& values, std::size_t base,
                              const std::array<int, kMaxDim>& perm) {
    const int d = g.dim();
    const std::size_t du = static_cast<std::size_t>(d);
    double J[kMaxDim][kMaxDim] = {};
    std::size_t cur = base;
    for (int j = 0; j < d; ++j) {
        const int a = perm[static_cast<std::size_t>(j)];
        const std::size_t nxt = cur + g.stride(a);
        for (int c = 0; c < d; ++c)
            J[c][a] = (values[nxt * du + static_cast<std::size_t>(c)] - values[cur * du + static_cast<std::size_t>(c)]) / g.h();
        cur = nxt;
    }
    return strain_from_jacobian(J, d, g.rotated() ? &g.frame() : nullptr);
}

}  // namespace

std::vector<SymMatrix> simplex_strains(const DisplacementField& u, std::size_t cell) {
    const Grid& g = u.grid;
    if (cell >= g.num_cells()) throw std::out_of_range("simplex_strains: cell index out of range");
    const KuhnTable t = kuhn_table(g.dim());
    const std::size_t base = g.cell_base_node(cell);
    std::vector<SymMatrix> out;
    for (const auto& p : t.perms) out.push_back(simplex_strain_impl(g, u.values, base, p));
    return out;
}

SymMatrix discrete_sym_gradient(const DisplacementField& u, std::size_t cell) {
    const std::vector<SymMatrix> es = simplex_strains(u, cell);
    SymMatrix m(u.grid.dim());
    for (const SymMatrix& e : es) m = m + e;
    return m / static_cast<double>(es.size());
}

// ---------------------------------------------------------------- energy

double shifted_softmin(double a, double b, double T) {
    const double m = std::min(a, b);
    if (!(T > 0.0) || a == b) return m;
    const double gap = std::abs(a - b);
    return m + T * (std::log(2.0) - std::log1p(std::exp(-gap / T)));
}

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

LatticeEnergy::LatticeEnergy(const IntegrandPair& pair, const Grid& grid) : pair_(pair), grid_(grid) {
    if (pair.dim != grid.dim()) throw std::invalid_argument("LatticeEnergy: integrand and grid dimensions differ");
    const int d = grid.dim();
    double hd = 1.0;
    for (int k = 0; k < d; ++k) hd *= grid.h();
    simplex_volume_ = hd / simplices_per_cell(d);
    const KuhnTable t = kuhn_table(d);
    for (const auto& p : t.perms) {
        std::array<std::size_t, kMaxDim + 1> v{};
        std::size_t cur = 0;
        v[0] = 0;
        for (int j = 0; j < d; ++j) {
            cur += grid.stride(p[static_cast<std::size_t>(j)]);
            v[static_cast<std::size_t>(j) + 1] = cur;
        }
        simplex_nodes_.push_back(v);
        axes_.push_back(p);
    }
    const std::size_t nc = grid.num_cells();
    radial_.assign(nc, 0);
    weight_.assign(nc, 0.0);
    xc_.resize(nc);
    profile_ = pair.f.profile;
    all_radial_ = true;
    for (std::size_t c = 0; c < nc; ++c) {
        xc_[c] = grid.cell_center(c);
        if (pair.radial()) {
            const double wf = pair.f.weight(xc_[c]);
            const double wg = pair.g.norm_weight(xc_[c]);
            // Φ(s) <= s for every profile, so the surface branch loses when wg >= wf.
            if (wg >= wf) {
                radial_[c] = 1;
                weight_[c] = wf;
            } else if (grid.dim() == 1 && profile_ == Profile::linear) {
                // every 1x1 strain is rank one, so psi = min(wf, wg)|E|
                radial_[c] = 1;
                weight_[c] = wg;
            }
        }
        if (!radial_[c]) all_radial_ = false;
    }
}

double LatticeEnergy::psi(std::size_t cell, const SymMatrix& E, double beta) const {
    const Vec& x = xc_[cell];
    if (radial_[cell]) return weight_[cell] * profile_value(profile_, E.norm());
    const double a = pair_.f.eval(x, E);
    const double h = grid_.h();
    const double b = pair_.g_hat(x, E * h) / h;
    if (beta > 0.0) return shifted_softmin(a, b, beta * a);
    return std::min(a, b);
}

SymMatrix LatticeEnergy::strain(const std::vector<double>& values, std::size_t cell, int s) const {
    return simplex_strain_impl(grid_, values, grid_.cell_base_node(cell), axes_[static_cast<std::size_t>(s)]);
}

double LatticeEnergy::cell_energy(const std::vector<double>& values, std::size_t cell, double beta) const {
    const std::size_t base = grid_.cell_base_node(cell);
    double e = 0.0;
    for (const auto& p : axes_) e += psi(cell, simplex_strain_impl(grid_, values, base, p), beta);
    return simplex_volume_ * e;
}

double LatticeEnergy::total(const std::vector<double>& values, double beta) const {
    std::vector<double> ce(grid_.num_cells());
    for (std::size_t c = 0; c < ce.size(); ++c) ce[c] = cell_energy(values, c, beta);
    return pairwise_sum(ce);
}

double assemble_energy(const DisplacementField& u, const IntegrandPair& pair) {
    if (!u.shell_matches_datum()) throw std::logic_error("assemble_energy: boundary datum violated");
    return LatticeEnergy(pair, u.grid).total(u.values);
}

// ---------------------------------------------------------------- serialization

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
    unsigned char b[sizeof(T)];
    is.read(reinterpret_cast<char*>(b), sizeof(T));
    if (!is) throw std::runtime_error("read_field_binary: truncated input");
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

}  // namespace

void write_field_binary(std::ostream& os, const DisplacementField& u) {
    const Grid& g = u.grid;
    const int d = g.dim();
    os.write("BDHF", 4);
    put_le<std::uint32_t>(os, 1);
    put_le<std::int32_t>(os, d);
    for (int k = 0; k < d; ++k) put_le<std::int32_t>(os, g.n(k));
    put_le<double>(os, g.h());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) put_le<double>(os, g.frame()(i, j));
    for (int k = 0; k < d; ++k) put_le<double>(os, g.center()[k]);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        const Vec v = u.value(i);
        for (int c = 0; c < d; ++c) put_le<double>(os, v[c]);
    }
}

DisplacementField read_field_binary(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "BDHF", 4) != 0) throw std::runtime_error("read_field_binary: bad magic");
    if (get_le<std::uint32_t>(is) != 1) throw std::runtime_error("read_field_binary: unsupported version");
    const int d = get_le<std::int32_t>(is);
    Vec::check_dim(d);
    MultiIndex n{1, 1, 1};
    for (int k = 0; k < d; ++k) n[static_cast<std::size_t>(k)] = get_le<std::int32_t>(is);
    const double h = get_le<double>(is);
    Matrix F(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) F(i, j) = get_le<double>(is);
    Vec center(d);
    for (int k = 0; k < d; ++k) center[k] = get_le<double>(is);
    Vec lo(d), hi(d);
    bool cubic = true;
    for (int k = 0; k < d; ++k) {
        lo[k] = center[k] - 0.5 * (n[static_cast<std::size_t>(k)] - 1) * h;
        hi[k] = center[k] + 0.5 * (n[static_cast<std::size_t>(k)] - 1) * h;
        if (n[static_cast<std::size_t>(k)] != n[0]) cubic = false;
    }
    DisplacementField u;
    u.grid = cubic ? Grid::cube(d, (n[0] - 1) * h, h, center, F) : Grid::box(lo, hi, h);
    u.offset = Vec(d);
    u.datum = BoundaryDatum::affine(Matrix(d));
    u.values.resize(u.grid.num_nodes() * static_cast<std::size_t>(d));
    for (double& v : u.values) v = get_le<double>(is);
    u.datum_values = u.values;
    return u;
}

void write_field_csv(std::ostream& os, const DisplacementField& u) {
    const Grid& g = u.grid;
    const int d = g.dim();
    os << "node";
    for (int k = 0; k < d; ++k) os << ",i" << k;
    for (int k = 0; k < d; ++k) os << ",x" << k;
    for (int k = 0; k < d; ++k) os << ",u" << k;
    os << '\n';
    char buf[64];
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        const MultiIndex m = g.node_multi(i);
        const Vec x = g.node_position(i);
        const Vec v = u.value(i);
        os << i;
        for (int k = 0; k < d; ++k) os << ',' << m[static_cast<std::size_t>(k)];
        for (int k = 0; k < d; ++k) {
            std::snprintf(buf, sizeof buf, "%.12e", x[k]);
            os << ',' << buf;
        }
        for (int k = 0; k < d; ++k) {
            std::snprintf(buf, sizeof buf, "%.12e", v[k]);
            os << ',' << buf;
        }
        os << '\n';
    }
}

}  // namespace bdhomog
