#include "bdhomog/stochastic.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "bdhomog/cell_formulas.hpp"
#include "bdhomog/parallel.hpp"

namespace bdhomog {

RandomField sample_field(std::uint64_t master_seed, const MarkLaw& law, int dim) {
    law.validate();
    return RandomField(master_seed, law, dim);
}

IntegrandPair pair_for_field(const RandomField& field) {
    LibraryParams p;
    p.dim = field.dim();
    p.field = field;
    return make_library_integrand(LibraryName::random_checkerboard, p);
}

double Rectangle::volume() const {
    double v = 1.0;
    for (int k = 0; k < dim(); ++k) v *= hi[k] - lo[k];
    return v;
}

Rectangle Rectangle::shifted(const CellIndex& z) const {
    Rectangle r = *this;
    for (int k = 0; k < dim(); ++k) {
        r.lo[k] += static_cast<double>(z[static_cast<std::size_t>(k)]);
        r.hi[k] += static_cast<double>(z[static_cast<std::size_t>(k)]);
    }
    return r;
}

void Rectangle::validate() const {
    if (lo.dim() == 0 || lo.dim() != hi.dim()) throw std::invalid_argument("rectangle: corner dimensions differ");
    for (int k = 0; k < dim(); ++k)
        if (!(lo[k] < hi[k])) throw std::invalid_argument("rectangle: empty interior");
}

std::string Rectangle::describe() const {
    std::ostringstream os;
    os.precision(17);
    for (int k = 0; k < dim(); ++k) os << (k ? " x " : "") << '[' << lo[k] << ',' << hi[k] << ')';
    return os.str();
}

json SubadditiveSample::to_json() const {
    json j;
    j["seed"] = seed;
    j["rectangle"] = rect.describe();
    j["A"] = bdhomog::to_json(A);
    j["value"] = value;
    j["normalized"] = normalized;
    j["upper_bound"] = upper_bound;
    j["bound_ok"] = bound_ok;
    return j;
}

SubadditiveSample mu(const RandomField& field, const SymMatrix& A, const Rectangle& R, double h,
                     const SolveOptions& opts, const std::vector<std::vector<double>>& extra_starts) {
    R.validate();
    if (R.dim() != field.dim() || A.dim() != field.dim()) throw std::invalid_argument("mu: dimension mismatch");
    const IntegrandPair pair = pair_for_field(field);
    const Grid g = Grid::box(R.lo, R.hi, h);
    const SolveResult res = minimize(pair, g, BoundaryDatum::affine(A), opts, extra_starts);
    SubadditiveSample s;
    s.seed = field.seed();
    s.rect = R;
    s.A = A;
    s.value = res.energy;
    s.normalized = res.energy / R.volume();
    s.upper_bound = (pair.consts.c3 * A.norm() + pair.consts.c4) * R.volume();
    s.bound_ok = s.value >= 0.0 && s.value <= s.upper_bound * (1.0 + 1e-12);
    s.field = res.field;
    return s;
}

json SubadditivityReport::to_json() const {
    json j;
    j["whole"] = whole;
    j["parts"] = parts;
    j["parts_sum"] = parts_sum;
    j["slack"] = slack;
    j["allowed"] = allowed;
    j["pass"] = pass;
    return j;
}

namespace {

bool overlaps(const Rectangle& a, const Rectangle& b) {
    for (int k = 0; k < a.dim(); ++k)
        if (!(a.lo[k] < b.hi[k] && b.lo[k] < a.hi[k])) return false;
    return true;
}

bool contains(const Rectangle& outer, const Rectangle& inner) {
    for (int k = 0; k < outer.dim(); ++k)
        if (inner.lo[k] < outer.lo[k] || inner.hi[k] > outer.hi[k]) return false;
    return true;
}

bool closed_contains(const Rectangle& r, const Vec& x) {
    for (int k = 0; k < r.dim(); ++k)
        if (x[k] < r.lo[k] || x[k] > r.hi[k]) return false;
    return true;
}

}  // namespace

SubadditivityReport check_subadditivity(const RandomField& field, const SymMatrix& A, const Rectangle& R,
                                        const std::vector<Rectangle>& partition, double h,
                                        const SolveOptions& opts) {
    R.validate();
    if (partition.empty()) throw std::invalid_argument("check_subadditivity: empty partition");
    double vol = 0.0;
    for (std::size_t i = 0; i < partition.size(); ++i) {
        partition[i].validate();
        if (!contains(R, partition[i])) throw std::invalid_argument("check_subadditivity: part outside the rectangle");
        for (std::size_t j = 0; j < i; ++j)
            if (overlaps(partition[i], partition[j]))
                throw std::invalid_argument("check_subadditivity: parts overlap");
        vol += partition[i].volume();
    }
    if (std::abs(vol - R.volume()) > 1e-12 * R.volume())
        throw std::invalid_argument("check_subadditivity: parts do not cover the rectangle");

    SubadditivityReport rep;
    std::vector<SubadditiveSample> parts;
    for (const Rectangle& P : partition) {
        parts.push_back(mu(field, A, P, h, opts));
        rep.parts.push_back(parts.back().value);
    }
    rep.parts_sum = pairwise_sum(rep.parts);

    // glue the part minimizers into a competitor on R
    const Grid g = Grid::box(R.lo, R.hi, h);
    const BoundaryDatum datum = BoundaryDatum::affine(A);
    DisplacementField glued = apply_datum(g, datum);
    const std::size_t du = static_cast<std::size_t>(g.dim());
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        if (g.is_shell(i)) continue;
        const Vec x = g.node_position(i);
        for (const SubadditiveSample& s : parts) {
            if (!closed_contains(s.rect, x)) continue;
            const Grid& pg = s.field.grid;
            MultiIndex m{0, 0, 0};
            for (int k = 0; k < g.dim(); ++k)
                m[static_cast<std::size_t>(k)] = static_cast<int>(std::lround((x[k] - s.rect.lo[k]) / h));
            const Vec v = s.field.value(pg.node_index(m)) - glued.offset;
            for (std::size_t c = 0; c < du; ++c) glued.values[i * du + c] = v[static_cast<int>(c)];
            break;
        }
    }
    rep.whole = mu(field, A, R, h, opts, {glued.values}).value;
    rep.slack = rep.parts_sum - rep.whole;
    rep.allowed = -static_cast<double>(partition.size()) * opts.tol_energy * std::max(1.0, rep.parts_sum);
    rep.pass = rep.slack >= rep.allowed;
    return rep;
}

json CovarianceReport::to_json() const {
    json j;
    j["shifted_rectangle"] = shifted_rectangle;
    j["shifted_field"] = shifted_field;
    j["gap"] = gap;
    j["allowed"] = allowed;
    j["pass"] = pass;
    return j;
}

CovarianceReport check_covariance(const RandomField& field, const SymMatrix& A, const Rectangle& R,
                                  const CellIndex& z, double h, const SolveOptions& opts) {
    CovarianceReport rep;
    rep.shifted_rectangle = mu(field, A, R.shifted(z), h, opts).value;
    rep.shifted_field = mu(field.shift_by(z), A, R, h, opts).value;
    const double m = std::max(std::abs(rep.shifted_rectangle), std::abs(rep.shifted_field));
    rep.gap = m > 0.0 ? std::abs(rep.shifted_rectangle - rep.shifted_field) / m : 0.0;
    rep.allowed = 2.0 * opts.tol_energy;
    rep.pass = rep.gap <= rep.allowed;
    return rep;
}

json SubadditiveTriple::to_json() const {
    json j;
    j["field_seed"] = field_seed;
    j["A"] = bdhomog::to_json(A);
    j["rectangle"] = R.describe();
    json parts = json::array();
    for (const Rectangle& P : partition) parts.push_back(P.describe());
    j["partition"] = parts;
    json z = json::array();
    for (int k = 0; k < R.dim(); ++k) z.push_back(shift[static_cast<std::size_t>(k)]);
    j["shift"] = z;
    return j;
}

std::vector<SubadditiveTriple> random_triples(std::uint64_t seed, int n, int dim, int max_side) {
    Vec::check_dim(dim);
    if (max_side < 2) throw std::invalid_argument("random_triples: max_side must be at least 2");
    std::mt19937_64 rng(mix64(seed ^ 0x5ab5add1ULL));
    std::uniform_int_distribution<int> corner(-5, 5), side(2, max_side), shift(-3, 3), axis(0, dim - 1), coin(0, 1);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    auto cut = [&](const Rectangle& box, int k) {
        // a multiple of 1/2 strictly inside the box along axis k
        const int halves = static_cast<int>(std::lround(2.0 * (box.hi[k] - box.lo[k])));
        std::uniform_int_distribution<int> at(1, halves - 1);
        const double c = box.lo[k] + 0.5 * at(rng);
        Rectangle a = box, b = box;
        a.hi[k] = c;
        b.lo[k] = c;
        return std::pair<Rectangle, Rectangle>{a, b};
    };
    std::vector<SubadditiveTriple> out;
    for (int i = 0; i < n; ++i) {
        SubadditiveTriple t;
        t.field_seed = rng();
        t.A = SymMatrix(dim);
        for (int a = 0; a < dim; ++a)
            for (int b = a; b < dim; ++b) t.A.set(a, b, entry(rng));
        t.R.lo = Vec(dim);
        t.R.hi = Vec(dim);
        for (int k = 0; k < dim; ++k) {
            t.R.lo[k] = corner(rng);
            t.R.hi[k] = t.R.lo[k] + side(rng);
        }
        auto [p, q] = cut(t.R, axis(rng));
        t.partition.push_back(p);
        int k2 = axis(rng);
        if (q.hi[k2] - q.lo[k2] < 1.0) k2 = (k2 + 1) % dim;
        if (coin(rng) && q.hi[k2] - q.lo[k2] >= 1.0) {
            auto [q1, q2] = cut(q, k2);
            t.partition.push_back(q1);
            t.partition.push_back(q2);
        } else {
            t.partition.push_back(q);
        }
        for (int k = 0; k < dim; ++k) t.shift[static_cast<std::size_t>(k)] = shift(rng);
        out.push_back(t);
    }
    return out;
}

json TripleOutcome::to_json() const {
    json j = triple.to_json();
    j["subadditivity"] = subadditivity.to_json();
    j["covariance"] = covariance.to_json();
    j["bound_ok"] = bound_ok;
    j["pass"] = pass;
    return j;
}

TripleOutcome run_triple(const MarkLaw& law, const SubadditiveTriple& t, double h, const SolveOptions& opts) {
    const RandomField field = sample_field(t.field_seed, law, t.R.dim());
    TripleOutcome o;
    o.triple = t;
    o.subadditivity = check_subadditivity(field, t.A, t.R, t.partition, h, opts);
    o.covariance = check_covariance(field, t.A, t.R, t.shift, h, opts);
    const StructuralConstants& c = pair_for_field(field).consts;
    const double upper = (c.c3 * t.A.norm() + c.c4) * t.R.volume();
    const double w = o.subadditivity.whole;
    o.bound_ok = w >= 0.0 && w <= upper * (1.0 + 1e-12);
    o.pass = o.bound_ok && o.subadditivity.pass && o.covariance.pass;
    return o;
}

std::string ErgodicReport::to_csv() const {
    std::ostringstream os;
    os << "seed,r,normalized_value\n";
    for (std::size_t s = 0; s < seeds.size(); ++s)
        for (std::size_t i = 0; i < r_values.size(); ++i)
            os << seeds[s] << ',' << csv_number(r_values[i]) << ',' << csv_number(values[s][i]) << '\n';
    return os.str();
}

json ErgodicReport::to_json() const {
    json j;
    j["seeds"] = seeds;
    j["r_values"] = r_values;
    j["mean"] = mean;
    j["std"] = stddev;
    j["bounds_ok"] = bounds_ok;
    j["trend_ok"] = trend_ok;
    return j;
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, int n) {
    std::vector<std::uint64_t> s;
    for (int i = 0; i < n; ++i) s.push_back(base + static_cast<std::uint64_t>(i));
    return s;
}

ErgodicReport ergodic_average(const MarkLaw& law, const ErgodicTarget& target, const std::vector<double>& r_schedule,
                              const std::vector<std::uint64_t>& seeds, const Vec& x_anchor, double h,
                              const SolveOptions& opts, int threads) {
    if (seeds.size() < 8) throw std::invalid_argument("ergodic_average: at least 8 seeds required");
    if (r_schedule.empty()) throw std::invalid_argument("ergodic_average: empty r_schedule");
    law.validate();
    const int d = target.surface ? target.zeta.dim() : target.A.dim();
    ErgodicReport rep;
    rep.seeds = seeds;
    rep.r_values = r_schedule;
    rep.values.assign(seeds.size(), {});
    std::vector<char> in_bounds(seeds.size(), 1);
    parallel_for(seeds.size(), threads, [&](std::size_t si) {
        const RandomField field = sample_field(seeds[si], law, d);
        const IntegrandPair pair = pair_for_field(field);
        std::vector<double> row;
        for (double r : r_schedule) {
            CellProblem cp;
            cp.pair = pair;
            cp.r = r;
            cp.h = h;
            cp.x_anchor = x_anchor;
            double norm = 1.0, bound = 0.0, lower = 0.0;
            if (target.surface) {
                cp.datum = BoundaryDatum::jump(Vec(d), target.zeta, target.nu);
                cp.use_recession_pair = true;
                for (int k = 0; k < d - 1; ++k) norm *= r;
                const double zn = sym_tensor(target.zeta, target.nu).norm();
                const double band = 5.0 * h / r * pair.consts.c3 * target.zeta.norm();
                lower = pair.consts.c1 * zn - band;
                bound = pair.consts.c3 * zn + band;
            } else {
                cp.datum = BoundaryDatum::affine(target.A);
                for (int k = 0; k < d; ++k) norm *= r;
                lower = pair.consts.c1 * target.A.norm() - pair.consts.c2;
                bound = pair.consts.c3 * target.A.norm() + pair.consts.c4;
            }
            const double v = cell_value(cp, opts) / norm;
            const double slack = 1e-9 * std::max(1.0, std::abs(bound));
            if (v < lower - slack || v > bound + slack) in_bounds[si] = 0;
            row.push_back(v);
        }
        rep.values[si] = row;
    });
    for (char ok : in_bounds)
        if (!ok) rep.bounds_ok = false;
    const double n = static_cast<double>(seeds.size());
    for (std::size_t i = 0; i < r_schedule.size(); ++i) {
        double m = 0.0;
        for (const auto& row : rep.values) m += row[i];
        m /= n;
        double q = 0.0;
        for (const auto& row : rep.values) q += (row[i] - m) * (row[i] - m);
        rep.mean.push_back(m);
        rep.stddev.push_back(std::sqrt(q / (n - 1.0)));
    }
    rep.trend_ok = rep.stddev.back() <= rep.stddev.front();
    return rep;
}

}  // namespace bdhomog
