#include "bdhomog/oracle1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bdhomog {

PiecewiseConstant1D PiecewiseConstant1D::constant(double v) {
    PiecewiseConstant1D p;
    p.values = {v};
    return p;
}

double PiecewiseConstant1D::operator()(double x) const {
    const double lo = knots.front(), period = knots.back() - knots.front();
    double y = std::fmod(x - lo, period);
    if (y < 0.0) y += period;
    y += lo;
    const auto it = std::upper_bound(knots.begin(), knots.end(), y);
    const std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - knots.begin() - 1));
    return values[std::min(i, values.size() - 1)];
}

double PiecewiseConstant1D::min_on(double lo, double hi) const {
    const double period = knots.back() - knots.front();
    if (hi - lo >= period) return min();
    double m = std::min((*this)(lo), (*this)(hi));
    // every knot image inside (lo, hi) starts a new piece
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double k0 = knots[i];
        const double shift = std::ceil((lo - k0) / period) * period;
        for (double k = k0 + shift; k < hi; k += period)
            if (k >= lo) m = std::min(m, values[i]);
    }
    return m;
}

double PiecewiseConstant1D::min() const { return *std::min_element(values.begin(), values.end()); }
double PiecewiseConstant1D::max() const { return *std::max_element(values.begin(), values.end()); }

bool PiecewiseConstant1D::is_constant() const { return min() == max(); }

void PiecewiseConstant1D::validate(const std::string& what) const {
    if (values.empty() || knots.size() != values.size() + 1)
        throw std::invalid_argument(what + ": need one more knot than values");
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        if (!(knots[i] < knots[i + 1])) throw std::invalid_argument(what + ": knots must increase");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(what + ": values must be positive");
}

JumpShape JumpShape::linear(double slope) {
    JumpShape s;
    s.pieces = {AffinePiece{slope, 0.0}};
    return s;
}

double JumpShape::operator()(double s) const {
    double v = std::numeric_limits<double>::infinity();
    for (const AffinePiece& p : pieces) v = std::min(v, p.slope * s + p.intercept);
    return v;
}

double JumpShape::slope_at_infinity() const {
    double m = std::numeric_limits<double>::infinity();
    for (const AffinePiece& p : pieces) m = std::min(m, p.slope);
    return m;
}

double JumpShape::initial_slope() const {
    double m = std::numeric_limits<double>::infinity();
    for (const AffinePiece& p : pieces)
        if (p.intercept == 0.0) m = std::min(m, p.slope);
    return m;
}

double JumpShape::max_intercept() const {
    double m = 0.0;
    for (const AffinePiece& p : pieces) m = std::max(m, p.intercept);
    return m;
}

std::vector<double> JumpShape::kinks() const {
    std::vector<double> k;
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const double dm = pieces[i].slope - pieces[j].slope;
            if (dm == 0.0) continue;
            const double s = (pieces[j].intercept - pieces[i].intercept) / dm;
            if (s > 0.0) k.push_back(s);
        }
    std::sort(k.begin(), k.end());
    return k;
}

bool JumpShape::is_linear() const { return max_intercept() == 0.0; }

void JumpShape::validate() const {
    if (pieces.empty()) throw std::invalid_argument("sigma_jump: no pieces");
    for (const AffinePiece& p : pieces) {
        if (!(p.slope > 0.0) || !std::isfinite(p.slope)) throw std::invalid_argument("sigma_jump: slopes must be positive");
        if (!(p.intercept >= 0.0) || !std::isfinite(p.intercept))
            throw std::invalid_argument("sigma_jump: intercepts must be non-negative");
    }
    if ((*this)(0.0) != 0.0) throw std::invalid_argument("sigma_jump: sigma(0) must vanish");
}

void Profile1D::validate() const {
    a.validate("profile a");
    theta.validate("profile theta");
    sigma.validate();
}

StructuralConstants Profile1D::constants() const {
    StructuralConstants c;
    const double sinf = sigma.slope_at_infinity(), s0 = sigma.initial_slope();
    c.c1 = std::min(a.min(), theta.min() * sinf);
    c.c2 = 0.0;
    c.c3 = std::max(a.max(), theta.max() * s0);
    c.c4 = 0.0;
    c.c5 = a.max();
    c.c6 = 0.0;
    // |σ(s)/s − σ(t)/t| <= b_max (1/s + 1/t) and g(sζ)/s >= θ_min s∞ |ζ|;
    // covers |ζ| >= 1 only, no uniform c7 exists once b_max > 0
    c.c7 = theta.max() * sigma.max_intercept() / (2.0 * theta.min() * sinf);
    c.alpha = 0.5;
    c.sigma1 = theta.max() * s0;
    return c;
}

double exact_cell_value_1d(const Profile1D& p, double A, double L) {
    if (!(L > 0.0)) throw std::invalid_argument("exact_cell_value_1d: L must be positive");
    p.validate();
    const double budget = std::abs(A) * L;
    const double amin = p.a.min_on(0.0, L), tmin = p.theta.min_on(0.0, L);
    auto cost = [&](double s) { return amin * (budget - s) + tmin * p.sigma(s); };
    double best = std::min(cost(0.0), cost(budget));
    for (double s : p.sigma.kinks())
        if (s < budget) best = std::min(best, cost(s));
    return best;
}

IntegrandPair pair_1d(const Profile1D& prof) {
    prof.validate();
    IntegrandPair p;
    p.name = "profile1d:" + prof.name;
    p.dim = 1;
    p.consts = prof.constants();
    p.periodicity = prof.a.is_constant() && prof.theta.is_constant() ? Periodicity::homogeneous : Periodicity::periodic;
    const PiecewiseConstant1D a = prof.a, theta = prof.theta;
    const JumpShape sigma = prof.sigma;
    const double sinf = sigma.slope_at_infinity();
    p.f.weight = [a](const Vec& x) { return a(x[0]); };
    p.f.eval = [a](const Vec& x, const SymMatrix& A) { return a(x[0]) * A.norm(); };
    p.f.recession = p.f.eval;
    p.f.profile = Profile::linear;
    p.g.eval = [theta, sigma](const Vec& x, const Vec& z, const Vec& n) {
        return theta(x[0]) * sigma(sym_tensor(z, n).norm());
    };
    p.g.recession = [theta, sinf](const Vec& x, const Vec& z, const Vec& n) {
        return theta(x[0]) * sinf * sym_tensor(z, n).norm();
    };
    p.g.rank_one_inf = [theta, sigma](const Vec& x, const SymMatrix& B) { return theta(x[0]) * sigma(B.norm()); };
    p.g.recession_rank_one_inf = [theta, sinf](const Vec& x, const SymMatrix& B) {
        return theta(x[0]) * sinf * B.norm();
    };
    if (sigma.is_linear()) p.g.norm_weight = [theta, sinf](const Vec& x) { return theta(x[0]) * sinf; };
    return p;
}

std::string OracleReport::to_csv() const {
    std::ostringstream os;
    os << "h,lattice_value,oracle_value,rel_gap\n";
    for (const OracleRow& r : rows)
        os << csv_number(r.h) << ',' << csv_number(r.lattice_value) << ',' << csv_number(r.oracle_value) << ','
           << csv_number(r.rel_gap) << '\n';
    return os.str();
}

json OracleReport::to_json() const {
    json j;
    j["profile"] = profile;
    j["A"] = A;
    j["L"] = L;
    json rs = json::array();
    for (const OracleRow& r : rows)
        rs.push_back({{"h", r.h}, {"lattice_value", r.lattice_value}, {"oracle_value", r.oracle_value},
                      {"rel_gap", r.rel_gap}});
    j["rows"] = rs;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    j["gap_non_increasing"] = gap_non_increasing;
    return j;
}

OracleReport validate_lattice_against_oracle(const Profile1D& p, double A, double L,
                                             const std::vector<double>& h_schedule, const SolveOptions& opts,
                                             double tolerance) {
    if (h_schedule.empty()) throw std::invalid_argument("oracle: empty h schedule");
    for (std::size_t i = 1; i < h_schedule.size(); ++i)
        if (!(h_schedule[i] < h_schedule[i - 1])) throw std::invalid_argument("oracle: h schedule must decrease");
    OracleReport rep;
    rep.profile = p.name;
    rep.A = A;
    rep.L = L;
    rep.tolerance = tolerance;
    const IntegrandPair pair = pair_1d(p);
    const double exact = exact_cell_value_1d(p, A, L);
    const BoundaryDatum datum = BoundaryDatum::affine(SymMatrix(1, {A}));
    for (double h : h_schedule) {
        const Grid g = Grid::box(Vec{0.0}, Vec{L}, h);
        OracleRow row;
        row.h = h;
        row.lattice_value = minimize(pair, g, datum, opts).energy;
        row.oracle_value = exact;
        const double m = std::max(std::abs(exact), std::abs(row.lattice_value));
        row.rel_gap = m > 0.0 ? std::abs(row.lattice_value - exact) / m : 0.0;
        rep.rows.push_back(row);
    }
    rep.pass = rep.rows.back().rel_gap <= tolerance;
    rep.gap_non_increasing = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (rep.rows[i].rel_gap > rep.rows[i - 1].rel_gap + 1e-12) rep.gap_non_increasing = false;
    return rep;
}

std::vector<std::string> oracle_profile_names() { return {"homogeneous", "laminate", "pure_jump"}; }

Profile1D oracle_profile(const std::string& name) {
    Profile1D p;
    p.name = name;
    if (name == "homogeneous") {
        p.a = PiecewiseConstant1D::constant(1.0);
        p.theta = PiecewiseConstant1D::constant(1.0);
        p.sigma = JumpShape::linear(1.0);
    } else if (name == "laminate") {
        // same layers as laminate_weight: soft on [k − 1/4, k + 1/4)
        p.a.knots = {0.0, 0.25, 0.75, 1.0};
        p.a.values = {1.0, 2.0, 1.0};
        p.theta = PiecewiseConstant1D::constant(1.0);
        p.sigma = JumpShape::linear(2.0);
    } else if (name == "pure_jump") {
        p.a = PiecewiseConstant1D::constant(10.0);
        p.theta = PiecewiseConstant1D::constant(1.0);
        p.sigma = JumpShape::linear(1.0);
    } else {
        throw std::invalid_argument("unknown oracle profile: " + name);
    }
    return p;
}

}  // namespace bdhomog
