#include "bdhomog/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "bdhomog/random_field.hpp"
#include "convex.hpp"

namespace bdhomog {

void SolveOptions::validate() const {
    if (gnc_schedule.empty()) throw std::invalid_argument("solver: gnc_schedule must be nonempty");
    if (gnc_schedule.back() != 0.0) throw std::invalid_argument("solver: gnc_schedule must end at 0");
    for (std::size_t i = 0; i < gnc_schedule.size(); ++i) {
        if (!(gnc_schedule[i] >= 0.0)) throw std::invalid_argument("solver: gnc temperatures must be non-negative");
        if (i > 0 && !(gnc_schedule[i] < gnc_schedule[i - 1]))
            throw std::invalid_argument("solver: gnc_schedule must be decreasing");
    }
    if (max_sweeps < 1) throw std::invalid_argument("solver: max_sweeps must be >= 1");
    if (!(tol_energy > 0.0)) throw std::invalid_argument("solver: tol_energy must be positive");
    if (multistart < 1) throw std::invalid_argument("solver: multistart must be >= 1");
    if (convex_max_iters < 0 || polish_sweeps < 0) throw std::invalid_argument("solver: iteration caps must be >= 0");
    if (!(convex_tol > 0.0)) throw std::invalid_argument("solver: convex_tol must be positive");
}

namespace {

constexpr int kMaxPacked = 6;

/// Packs a symmetric matrix so that |E|^2 = Σ m_k e_k^2 with m = 1 on the
/// diagonal entries (first d) and 2 on the rest.
int pack(const SymMatrix& m, double* out) {
    const int d = m.dim();
    int k = 0;
    for (int i = 0; i < d; ++i) out[k++] = m(i, i);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) out[k++] = m(i, j);
    return k;
}

struct RadialTerm {
    double w;
    double e0[kMaxPacked];
    double de[kMaxPacked];
};

struct GenericTerm {
    std::size_t cell;
    SymMatrix e0;
    SymMatrix de;
};

/// t ↦ energy of the cells touched by a move of size t.
class LineProblem {
public:
    LineProblem(const LatticeEnergy& en, double beta)
        : en_(en), beta_(beta), d_(en.grid().dim()), np_(d_ * (d_ + 1) / 2) {}

    void clear() {
        rad_.clear();
        gen_.clear();
    }
    bool empty() const { return rad_.empty() && gen_.empty(); }
    bool radial_only() const { return gen_.empty(); }

    void add(std::size_t cell, const SymMatrix& e0, const SymMatrix& de) {
        if (en_.cell_radial(cell)) {
            RadialTerm t{};
            t.w = en_.simplex_volume() * en_.cell_weight(cell);
            pack(e0, t.e0);
            pack(de, t.de);
            rad_.push_back(t);
        } else {
            gen_.push_back({cell, e0, de});
        }
    }

    double value(double t) const {
        double s = 0.0;
        const Profile prof = en_.profile();
        for (const RadialTerm& r : rad_) s += r.w * profile_value(prof, norm_at(r, t));
        for (const GenericTerm& g : gen_) s += en_.simplex_volume() * en_.psi(g.cell, g.e0 + g.de * t, beta_);
        return s;
    }

    /// One-sided derivative (side = +1 right, −1 left); radial terms only.
    double slope(double t, int side) const {
        double s = 0.0;
        const Profile prof = en_.profile();
        for (const RadialTerm& r : rad_) {
            double q2 = 0.0, ed = 0.0, dd = 0.0;
            for (int k = 0; k < np_; ++k) {
                const double m = k < d_ ? 1.0 : 2.0;
                const double e = r.e0[k] + t * r.de[k];
                q2 += m * e * e;
                ed += m * e * r.de[k];
                dd += m * r.de[k] * r.de[k];
            }
            const double q = std::sqrt(q2);
            if (q > 0.0)
                s += r.w * profile_slope(prof, q) * ed / q;
            else
                s += side * r.w * profile_slope(prof, 0.0) * std::sqrt(dd);
        }
        return s;
    }

private:
    double norm_at(const RadialTerm& r, double t) const {
        double q2 = 0.0;
        for (int k = 0; k < np_; ++k) {
            const double e = r.e0[k] + t * r.de[k];
            q2 += (k < d_ ? 1.0 : 2.0) * e * e;
        }
        return std::sqrt(q2);
    }

    const LatticeEnergy& en_;
    double beta_;
    int d_;
    int np_;
    std::vector<RadialTerm> rad_;
    std::vector<GenericTerm> gen_;
};

/// Exact 1-D minimization. Returns the step and writes the new local energy.
double line_minimize(const LineProblem& lp, double delta, double f0, double& f_new) {
    f_new = f0;
    if (lp.empty() || !(f0 > 0.0)) return 0.0;
    if (lp.radial_only()) {
        const double gp = lp.slope(0.0, +1), gm = lp.slope(0.0, -1);
        if (gp >= 0.0 && gm <= 0.0) return 0.0;
        const int dir = gp < 0.0 ? +1 : -1;
        auto dpsi = [&](double tau) { return dir * lp.slope(dir * tau, dir); };
        double lo = 0.0, flo = dir * (dir > 0 ? gp : gm);
        double hi = delta, fhi = dpsi(hi);
        for (int it = 0; it < 80 && fhi < 0.0; ++it) {
            lo = hi;
            flo = fhi;
            hi *= 4.0;
            fhi = dpsi(hi);
        }
        double cands[3] = {lo, hi, hi};
        int nc = 2;
        if (fhi > 0.0 && flo < 0.0) {
            std::uintmax_t max_iter = 100;
            const auto br = boost::math::tools::toms748_solve(dpsi, lo, hi, flo, fhi,
                                                              boost::math::tools::eps_tolerance<double>(50), max_iter);
            cands[0] = br.first;
            cands[1] = br.second;
            cands[2] = 0.5 * (br.first + br.second);
            nc = 3;
        }
        double best_t = 0.0;
        for (int i = 0; i < nc; ++i) {
            const double t = dir * cands[i];
            if (t == 0.0) continue;
            const double v = lp.value(t);
            if (v < f_new) {
                f_new = v;
                best_t = t;
            }
        }
        return best_t;
    }
    // generic sections: bracket, then Brent
    const double fp = lp.value(delta), fm = lp.value(-delta);
    double a, b, fb, tb;
    if (f0 <= fp && f0 <= fm) {
        a = -delta;
        b = delta;
        fb = f0;
        tb = 0.0;
    } else {
        const int dir = fp <= fm ? +1 : -1;
        double lo = 0.0, mid = delta, fmid = std::min(fp, fm);
        double hi = 2.0 * delta, fhi = lp.value(dir * hi);
        for (int it = 0; it < 60 && fhi < fmid; ++it) {
            lo = mid;
            mid = hi;
            fmid = fhi;
            hi *= 2.0;
            fhi = lp.value(dir * hi);
        }
        a = std::min(dir * lo, dir * hi);
        b = std::max(dir * lo, dir * hi);
        fb = fmid;
        tb = dir * mid;
    }
    std::uintmax_t max_iter = 200;
    const auto r = boost::math::tools::brent_find_minima([&](double t) { return lp.value(t); }, a, b, 40, max_iter);
    double best_t = 0.0;
    if (fb < f_new) {
        f_new = fb;
        best_t = tb;
    }
    if (r.second < f_new) {
        f_new = r.second;
        best_t = r.first;
    }
    return best_t;
}

/// Tensor-product move profile: a hat of half-width s_k around p_k on hat
/// axes, the indicator of interior indices on flat axes.
struct MoveShape {
    MultiIndex p{0, 0, 0};
    MultiIndex s{1, 1, 1};
    std::array<bool, kMaxDim> flat{false, false, false};
    MultiIndex lo{0, 0, 0};
    MultiIndex hi{0, 0, 0};

    double weight(const MultiIndex& i, const Grid& g) const {
        double w = 1.0;
        for (int k = 0; k < g.dim(); ++k) {
            const std::size_t kk = static_cast<std::size_t>(k);
            if (flat[kk]) {
                if (i[kk] < 1 || i[kk] > g.n(k) - 2) return 0.0;
            } else {
                const double r = 1.0 - std::abs(i[kk] - p[kk]) / static_cast<double>(s[kk]);
                if (r <= 0.0) return 0.0;
                w *= r;
            }
        }
        return w;
    }
};

class Descent {
public:
    Descent(const LatticeEnergy& en, double scale, const SolveOptions& opts)
        : en_(en), g_(en.grid()), d_(g_.dim()), scale_(scale > 0.0 ? scale : 1.0), opts_(opts) {
        for (std::size_t i = 0; i < g_.num_nodes(); ++i)
            if (!g_.is_shell(i)) free_.push_back(i);
    }

    /// Runs one stage; appends per-sweep energies; returns sweeps used.
    int run_stage(std::vector<double>& values, double beta, std::vector<double>& energies, int max_sweeps) {
        double e_prev = en_.total(values, beta);
        energies.push_back(e_prev);
        int used = 0;
        if (free_.empty()) return 0;
        std::vector<double> backup;
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            backup = values;
            this->sweep(values, beta);
            const double e = en_.total(values, beta);
            ++used;
            if (e > e_prev) {
                values.swap(backup);
                break;
            }
            energies.push_back(e);
            const bool done = !(e_prev - e > opts_.tol_energy * e_prev);
            e_prev = e;
            if (done) break;
        }
        return used;
    }

private:
    void sweep(std::vector<double>& values, double beta) {
        LineProblem lp(en_, beta);
        for (std::size_t node : free_) {
            MoveShape m;
            m.p = g_.node_multi(node);
            m.lo = m.p;
            m.hi = m.p;
            for (int c = 0; c < d_; ++c) move(values, lp, m, c, 1.0);
        }
        if (!opts_.multilevel) return;
        int nmin = g_.n(0);
        for (int k = 1; k < d_; ++k) nmin = std::min(nmin, g_.n(k));
        for (int s = 2; 2 * s <= nmin - 1; s *= 2) {
            MultiIndex cnt{1, 1, 1};
            for (int k = 0; k < d_; ++k) cnt[static_cast<std::size_t>(k)] = (g_.n(k) - 1) / s - 1;
            MultiIndex j{0, 0, 0};
            for (j[2] = 0; j[2] < cnt[2]; ++j[2])
                for (j[1] = 0; j[1] < cnt[1]; ++j[1])
                    for (j[0] = 0; j[0] < cnt[0]; ++j[0]) {
                        MoveShape m;
                        for (int k = 0; k < d_; ++k) {
                            const std::size_t kk = static_cast<std::size_t>(k);
                            m.p[kk] = s * (j[kk] + 1);
                            m.s[kk] = s;
                            m.lo[kk] = m.p[kk] - s + 1;
                            m.hi[kk] = m.p[kk] + s - 1;
                        }
                        for (int c = 0; c < d_; ++c) move(values, lp, m, c, s);
                    }
        }
        if (d_ == 1) return;
        for (int axis = 0; axis < d_; ++axis) {
            const int na = g_.n(axis);
            for (int s = 1; 2 * s <= na - 1; s *= 2) {
                for (int p = s; p + s <= na - 1; p += s) {
                    MoveShape m;
                    for (int k = 0; k < d_; ++k) {
                        const std::size_t kk = static_cast<std::size_t>(k);
                        if (k == axis) {
                            m.p[kk] = p;
                            m.s[kk] = s;
                            m.lo[kk] = p - s + 1;
                            m.hi[kk] = p + s - 1;
                        } else {
                            m.flat[kk] = true;
                            m.lo[kk] = 1;
                            m.hi[kk] = g_.n(k) - 2;
                        }
                    }
                    for (int c = 0; c < d_; ++c) move(values, lp, m, c, s);
                }
            }
        }
    }

    void move(std::vector<double>& values, LineProblem& lp, const MoveShape& m, int c, double width) {
        lp.clear();
        const Matrix* F = g_.rotated() ? &g_.frame() : nullptr;
        const double h = g_.h();
        const int ns = simplices_per_cell(d_);
        MultiIndex clo{0, 0, 0}, chi{0, 0, 0};
        for (int k = 0; k < d_; ++k) {
            const std::size_t kk = static_cast<std::size_t>(k);
            clo[kk] = std::max(0, m.lo[kk] - 1);
            chi[kk] = std::min(g_.n(k) - 2, m.hi[kk]);
        }
        MultiIndex b{0, 0, 0};
        for (b[2] = clo[2]; b[2] <= chi[2]; ++b[2])
            for (b[1] = clo[1]; b[1] <= chi[1]; ++b[1])
                for (b[0] = clo[0]; b[0] <= chi[0]; ++b[0]) {
                    const std::size_t cell = g_.cell_index(b);
                    for (int s = 0; s < ns; ++s) {
                        double phi[kMaxDim + 1];
                        MultiIndex v = b;
                        phi[0] = m.weight(v, g_);
                        bool varies = false;
                        for (int j = 0; j < d_; ++j) {
                            ++v[static_cast<std::size_t>(en_.simplex_axis(s, j))];
                            phi[j + 1] = m.weight(v, g_);
                            if (phi[j + 1] != phi[0]) varies = true;
                        }
                        if (!varies) continue;
                        double dJ[kMaxDim][kMaxDim] = {};
                        for (int j = 0; j < d_; ++j) dJ[c][en_.simplex_axis(s, j)] = (phi[j + 1] - phi[j]) / h;
                        lp.add(cell, en_.strain(values, cell, s), strain_from_jacobian(dJ, d_, F));
                    }
                }
        if (lp.empty()) return;
        const double f0 = lp.value(0.0);
        double f1 = f0;
        const double t = line_minimize(lp, scale_ * h * width, f0, f1);
        if (t == 0.0 || !(f1 < f0 - 1e-14 * f0)) return;
        const std::size_t du = static_cast<std::size_t>(d_);
        MultiIndex i{0, 0, 0};
        for (i[2] = m.lo[2]; i[2] <= m.hi[2]; ++i[2])
            for (i[1] = m.lo[1]; i[1] <= m.hi[1]; ++i[1])
                for (i[0] = m.lo[0]; i[0] <= m.hi[0]; ++i[0]) {
                    const double w = m.weight(i, g_);
                    if (w != 0.0) values[g_.node_index(i) * du + static_cast<std::size_t>(c)] += t * w;
                }
    }

    const LatticeEnergy& en_;
    const Grid& g_;
    int d_;
    double scale_;
    const SolveOptions& opts_;
    std::vector<std::size_t> free_;
};

double hash_unit(std::uint64_t seed, std::uint64_t k) {
    const std::uint64_t h = mix64(mix64(seed) ^ mix64(k + 0x632be59bd9b4e019ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

std::vector<double> initial_values(const DisplacementField& datum, int start, std::uint64_t seed) {
    std::vector<double> v = datum.values;
    if (start == 0) return v;
    const Grid& g = datum.grid;
    const std::size_t du = static_cast<std::size_t>(g.dim());
    const double scale = datum.datum.scale();
    const bool jump = datum.datum.kind == BoundaryDatum::Kind::jump;
    if (start == 2 && jump) {
        const std::vector<double> s = interface_coordinates(g, datum.datum);
        const Vec np = canonical_normal(datum.datum.nu);
        const Vec pos = datum.datum.zeta * (np.dot(datum.datum.nu) > 0.0 ? 1.0 : -1.0);
        const double w = 2.0 * g.h();
        for (std::size_t i = 0; i < g.num_nodes(); ++i) {
            if (g.is_shell(i) || std::abs(s[i]) >= w) continue;
            const double lam = (s[i] + w) / (2.0 * w);
            for (std::size_t c = 0; c < du; ++c) v[i * du + c] = lam * pos[static_cast<int>(c)];
        }
        return v;
    }
    const double amp = 0.25 * g.h() * scale;
    const std::uint64_t sd = seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(start);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        if (g.is_shell(i)) continue;
        for (std::size_t c = 0; c < du; ++c) v[i * du + c] += amp * hash_unit(sd, i * du + c);
    }
    return v;
}

}  // namespace

json SolveResult::to_json() const {
    json j;
    j["energy"] = energy;
    j["r"] = field.grid.side(0);
    j["h"] = field.grid.h();
    j["grid"] = field.grid.describe();
    j["datum"] = field.datum.describe();
    j["sweeps"] = sweeps_used;
    j["start_index"] = start_index;
    j["start_energies"] = start_energies;
    j["datum_energy"] = datum_energy;
    j["certificate"] = certificate;
    j["seed"] = seed;
    j["wall_time_ms"] = wall_time_ms;
    return j;
}

SolveResult minimize(const IntegrandPair& pair, const Grid& grid, const BoundaryDatum& datum, const SolveOptions& opts) {
    return minimize(pair, grid, datum, opts, {});
}

SolveResult minimize(const IntegrandPair& pair, const Grid& grid, const BoundaryDatum& datum, const SolveOptions& opts,
                     const std::vector<std::vector<double>>& extra_starts) {
    opts.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const LatticeEnergy en(pair, grid);
    const DisplacementField u0 = apply_datum(grid, datum);
    SolveResult res;
    res.seed = opts.seed;
    res.datum_energy = en.total(u0.values);
    if (!std::isfinite(res.datum_energy)) throw std::runtime_error("minimize: non-finite energy (integrand misconfigured)");
    for (const auto& v : extra_starts) {
        if (v.size() != u0.values.size()) throw std::invalid_argument("minimize: start field has the wrong size");
        for (std::size_t i = 0; i < grid.num_nodes(); ++i)
            if (grid.is_shell(i))
                for (std::size_t c = 0; c < static_cast<std::size_t>(grid.dim()); ++c)
                    if (v[i * grid.dim() + c] != u0.values[i * grid.dim() + c])
                        throw std::invalid_argument("minimize: start field violates the datum");
    }
    Descent descent(en, datum.scale(), opts);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_values;
    const bool convex = opts.convex && en.all_radial();
    const int builtin = convex ? 1 : opts.multistart;
    const int total = builtin + (convex ? 0 : static_cast<int>(extra_starts.size()));
    for (int k = 0; k < total; ++k) {
        std::vector<double> v = k < builtin ? initial_values(u0, k, opts.seed)
                                            : extra_starts[static_cast<std::size_t>(k - builtin)];
        int index = k;
        if (convex) {
            // every start leads to the same convex minimum: begin at the lowest one
            double e0 = en.total(v);
            for (std::size_t j = 0; j < extra_starts.size(); ++j) {
                const double ej = en.total(extra_starts[j]);
                if (ej < e0) {
                    e0 = ej;
                    v = extra_starts[j];
                    index = builtin + static_cast<int>(j);
                }
            }
            detail::ConvexOptions co;
            co.max_iters = opts.convex_max_iters;
            co.tol = opts.convex_tol;
            StageTrace st;
            st.start = index;
            st.kind = "convex";
            st.energies = detail::convex_minimize(en, datum, v, co).energies;
            res.trace.push_back(std::move(st));
            StageTrace polish;
            polish.start = index;
            res.sweeps_used += descent.run_stage(v, 0.0, polish.energies, opts.polish_sweeps);
            res.trace.push_back(std::move(polish));
        }
        for (double beta : opts.gnc_schedule) {
            if (convex || (beta > 0.0 && en.all_radial())) continue;
            StageTrace st;
            st.start = index;
            st.beta = beta;
            res.sweeps_used += descent.run_stage(v, beta, st.energies, opts.max_sweeps);
            res.trace.push_back(std::move(st));
        }
        const double e = en.total(v);
        if (!std::isfinite(e)) throw std::runtime_error("minimize: non-finite energy (integrand misconfigured)");
        res.start_energies.push_back(e);
        if (e < best) {
            best = e;
            best_values = std::move(v);
            res.start_index = index;
        }
    }
    res.field = u0;
    res.field.values = std::move(best_values);
    res.energy = en.total(res.field.values);
    if (!res.field.shell_matches_datum()) throw std::logic_error("minimize: shell moved");
    res.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

BruteForceResult brute_force_min(const IntegrandPair& pair, const Grid& grid, const BoundaryDatum& datum,
                                 const std::vector<double>& quantization) {
    const std::size_t nf = grid.num_free();
    if (nf > 6) throw std::invalid_argument("brute_force_min: at most 6 free nodes");
    if (quantization.empty() || quantization.size() > 9)
        throw std::invalid_argument("brute_force_min: quantization needs 1 to 9 values");
    const std::size_t d = static_cast<std::size_t>(grid.dim());
    const std::size_t digits = nf * d;
    const std::size_t q = quantization.size();
    double states_d = std::pow(static_cast<double>(q), static_cast<double>(digits));
    if (states_d > 1e8) throw std::invalid_argument("brute_force_min: search space above 1e8 states");
    const std::size_t states = static_cast<std::size_t>(std::llround(states_d));

    const LatticeEnergy en(pair, grid);
    BruteForceResult res;
    res.field = apply_datum(grid, datum);
    res.states = states;
    std::vector<double>& v = res.field.values;
    const std::vector<double> base = v;

    std::vector<std::size_t> free_nodes;
    for (std::size_t i = 0; i < grid.num_nodes(); ++i)
        if (!grid.is_shell(i)) free_nodes.push_back(i);

    // cells touching each free node
    std::vector<std::vector<std::size_t>> node_cells(free_nodes.size());
    std::vector<char> touched(grid.num_cells(), 0);
    for (std::size_t a = 0; a < free_nodes.size(); ++a) {
        const MultiIndex m = grid.node_multi(free_nodes[a]);
        for (int mask = 0; mask < (1 << grid.dim()); ++mask) {
            MultiIndex b = m;
            bool ok = true;
            for (int k = 0; k < grid.dim(); ++k) {
                const std::size_t kk = static_cast<std::size_t>(k);
                if (mask & (1 << k)) b[kk] -= 1;
                if (b[kk] < 0 || b[kk] > grid.n(k) - 2) ok = false;
            }
            if (!ok) continue;
            const std::size_t cell = grid.cell_index(b);
            node_cells[a].push_back(cell);
            touched[cell] = 1;
        }
    }
    std::vector<double> cell_e(grid.num_cells());
    for (std::size_t c = 0; c < cell_e.size(); ++c) cell_e[c] = en.cell_energy(v, c);

    std::vector<std::size_t> digit(digits, 0);
    auto set_digit = [&](std::size_t k) {
        const std::size_t node = free_nodes[k / d];
        v[node * d + k % d] = base[node * d + k % d] + quantization[digit[k]];
    };
    for (std::size_t k = 0; k < digits; ++k) set_digit(k);
    auto refresh = [&](std::size_t a) {
        for (std::size_t c : node_cells[a]) cell_e[c] = en.cell_energy(v, c);
    };
    for (std::size_t a = 0; a < free_nodes.size(); ++a) refresh(a);

    double best = pairwise_sum(cell_e);
    std::vector<double> best_v = v;
    for (std::size_t st = 1; st < states; ++st) {
        std::size_t k = 0;
        while (true) {
            digit[k] = (digit[k] + 1) % q;
            set_digit(k);
            refresh(k / d);
            if (digit[k] != 0) break;
            ++k;
        }
        const double e = pairwise_sum(cell_e);
        if (e < best) {
            best = e;
            best_v = v;
        }
    }
    v = best_v;
    res.energy = en.total(v);

    std::vector<double> qs = quantization;
    std::sort(qs.begin(), qs.end());
    double spacing = 0.0;
    for (std::size_t i = 1; i < qs.size(); ++i) spacing = std::max(spacing, qs[i] - qs[i - 1]);
    std::size_t n_touched = 0;
    for (char t : touched) n_touched += t ? 1 : 0;
    const double L = std::max(pair.consts.c3, pair.consts.c5);
    const double half = 0.5 * spacing;
    double hd = 1.0;
    for (std::size_t k = 0; k < d; ++k) hd *= grid.h();
    res.quantization_gap = L * static_cast<double>(n_touched) * hd * 2.0 * static_cast<double>(d) * half / grid.h();
    return res;
}

}  // namespace bdhomog
