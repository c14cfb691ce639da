#include "convex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace bdhomog::detail {

namespace {

constexpr int kMaxPacked = 6;

/// Packed strain rows per simplex type: p_k = Σ_{a,c} G[k][a][c]·x[v_a][c],
/// with off-diagonal entries carrying √2 so that |p| = |E|.
struct Operator {
    int d = 0;
    int np = 0;
    int nv = 0;
    int ns = 0;
    std::vector<double> G;
    std::vector<std::array<std::size_t, kMaxDim + 1>> offsets;

    double& at(int s, int k, int a, int c) {
        return G[static_cast<std::size_t>(((s * np + k) * nv + a) * d + c)];
    }
    double at(int s, int k, int a, int c) const {
        return G[static_cast<std::size_t>(((s * np + k) * nv + a) * d + c)];
    }
};

Operator build_operator(const LatticeEnergy& en) {
    const Grid& g = en.grid();
    Operator op;
    op.d = g.dim();
    op.np = op.d * (op.d + 1) / 2;
    op.nv = op.d + 1;
    op.ns = simplices_per_cell(op.d);
    op.G.assign(static_cast<std::size_t>(op.ns * op.np * op.nv * op.d), 0.0);
    op.offsets = en.simplex_vertices();
    const Matrix* F = g.rotated() ? &g.frame() : nullptr;
    for (int s = 0; s < op.ns; ++s)
        for (int a = 0; a < op.nv; ++a)
            for (int c = 0; c < op.d; ++c) {
                double J[kMaxDim][kMaxDim] = {};
                for (int j = 0; j < op.d; ++j) {
                    const double v = (j + 1 == a ? 1.0 : 0.0) - (j == a ? 1.0 : 0.0);
                    J[c][en.simplex_axis(s, j)] = v;
                }
                const SymMatrix E = strain_from_jacobian(J, op.d, F);
                int k = 0;
                for (int i = 0; i < op.d; ++i) op.at(s, k++, a, c) = E(i, i);
                for (int i = 0; i < op.d; ++i)
                    for (int j = i + 1; j < op.d; ++j) op.at(s, k++, a, c) = std::sqrt(2.0) * E(i, j);
            }
    return op;
}

/// Radius of prox_{λΦ̃}(u) for Φ̃(ρ) = Φ(Sρ)/S: the root of ρ + λΦ'(Sρ) = |u|.
double prox_radius(Profile prof, double S, double lambda, double un) {
    const double r0 = std::max(0.0, un - lambda);
    if (prof == Profile::linear || un == 0.0) return r0;
    double r = r0;
    for (int it = 0; it < 60; ++it) {
        const double t = S * r;
        const double q = std::sqrt(1.0 + t * t);
        const double f = r + lambda * t / q - un;
        const double fp = 1.0 + lambda * S / (q * q * q);
        const double nr = std::min(un, r - f / fp);
        if (!(std::abs(nr - r) > 1e-16 * un)) {
            r = nr;
            break;
        }
        r = nr;
    }
    return r;
}

double phi_tilde(Profile prof, double S, double s) {
    return prof == Profile::linear ? s : profile_value(prof, S * s) / S;
}

std::vector<double> prolong(const Grid& coarse, const std::vector<double>& cv, const Grid& fine,
                            const std::vector<double>& fine_start) {
    std::vector<double> out = fine_start;
    const std::size_t du = static_cast<std::size_t>(fine.dim());
    for (std::size_t i = 0; i < fine.num_nodes(); ++i) {
        if (fine.is_shell(i)) continue;
        const MultiIndex m = fine.node_multi(i);
        MultiIndex lo{0, 0, 0}, hi{0, 0, 0};
        for (int k = 0; k < fine.dim(); ++k) {
            const std::size_t kk = static_cast<std::size_t>(k);
            lo[kk] = m[kk] / 2;
            hi[kk] = (m[kk] + 1) / 2;
        }
        const std::size_t a = coarse.node_index(lo), b = coarse.node_index(hi);
        for (std::size_t c = 0; c < du; ++c) out[i * du + c] = 0.5 * (cv[a * du + c] + cv[b * du + c]);
    }
    return out;
}

/// ADMM on z = Kx: exact x-steps through one sparse Cholesky factorization of
/// KᵀK (free columns), radial shrinkage for z, residual-balanced penalty.
void admm_solve(const LatticeEnergy& en, const BoundaryDatum& datum, std::vector<double>& values,
                const ConvexOptions& opts, ConvexOutcome& out) {
    const Grid& g = en.grid();
    const double S = datum.scale() > 0.0 ? datum.scale() : 1.0;
    const double unit = g.h() * S;
    const Profile prof = en.profile();
    const Operator op = build_operator(en);
    const int d = op.d, np = op.np, nv = op.nv, ns = op.ns;
    const std::size_t du = static_cast<std::size_t>(d);
    const std::size_t nn = g.num_nodes(), nc = g.num_cells();
    const std::size_t nrow = nc * static_cast<std::size_t>(ns);
    const std::size_t nz = nrow * static_cast<std::size_t>(np);

    std::vector<long> col(nn * du, -1);
    long nfree = 0;
    for (std::size_t i = 0; i < nn; ++i)
        if (!g.is_shell(i))
            for (std::size_t c = 0; c < du; ++c) col[i * du + c] = nfree++;
    if (nfree == 0) return;

    std::vector<double> x(values.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = values[i] / unit;

    // K restricted to free columns, and the constant part b from the shell.
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nz));
    std::vector<double> wrow(nrow);
    for (std::size_t c = 0; c < nc; ++c) {
        const std::size_t base = g.cell_base_node(c);
        for (int s = 0; s < ns; ++s) {
            const std::size_t row = c * static_cast<std::size_t>(ns) + static_cast<std::size_t>(s);
            wrow[row] = en.cell_weight(c);
            for (int a = 0; a < nv; ++a) {
                const std::size_t v = base + op.offsets[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
                for (int cc = 0; cc < d; ++cc) {
                    const std::size_t j = v * du + static_cast<std::size_t>(cc);
                    for (int k = 0; k < np; ++k) {
                        const double gk = op.at(s, k, a, cc);
                        if (gk == 0.0) continue;
                        const Eigen::Index r = static_cast<Eigen::Index>(row * static_cast<std::size_t>(np)) + k;
                        if (col[j] >= 0)
                            trip.emplace_back(r, col[j], gk);
                        else
                            b[r] += gk * x[j];
                    }
                }
            }
        }
    }
    Eigen::SparseMatrix<double> K(static_cast<Eigen::Index>(nz), nfree);
    K.setFromTriplets(trip.begin(), trip.end());
    const Eigen::SparseMatrix<double> Kt = K.transpose();
    const Eigen::SparseMatrix<double> A = Kt * K;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(A);
    if (chol.info() != Eigen::Success) throw std::runtime_error("convex_minimize: factorization failed");

    Eigen::VectorXd u(nfree);
    for (std::size_t j = 0; j < col.size(); ++j)
        if (col[j] >= 0) u[col[j]] = x[j];

    auto objective_of = [&](const Eigen::VectorXd& Ku) {
        std::vector<double> ce(nc, 0.0);
        for (std::size_t row = 0; row < nrow; ++row) {
            double q = 0.0;
            for (int k = 0; k < np; ++k) {
                const double v = Ku[static_cast<Eigen::Index>(row * static_cast<std::size_t>(np)) + k];
                q += v * v;
            }
            ce[row / static_cast<std::size_t>(ns)] += wrow[row] * phi_tilde(prof, S, std::sqrt(q));
        }
        return pairwise_sum(ce);
    };

    Eigen::VectorXd Ku = K * u + b;
    Eigen::VectorXd z = Ku, lam = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nz));
    double wsum = 0.0;
    for (double w : wrow) wsum += w;
    double rho = wsum / static_cast<double>(nrow);

    const double vol_unit = en.simplex_volume() * S;
    double best_obj = objective_of(Ku);
    Eigen::VectorXd best = u;
    bool improved = false;
    out.energies.push_back(best_obj * vol_unit);
    double window_ref = best_obj;
    const int check = 10;

    for (int it = 1; it <= opts.max_iters; ++it) {
        u = chol.solve(Kt * (z - lam - b));
        Ku = K * u + b;
        const Eigen::VectorXd zold = z;
        for (std::size_t row = 0; row < nrow; ++row) {
            const Eigen::Index r0 = static_cast<Eigen::Index>(row * static_cast<std::size_t>(np));
            double q = 0.0;
            for (int k = 0; k < np; ++k) {
                const double v = Ku[r0 + k] + lam[r0 + k];
                z[r0 + k] = v;
                q += v * v;
            }
            q = std::sqrt(q);
            const double keep = q > 0.0 ? prox_radius(prof, S, wrow[row] / rho, q) / q : 0.0;
            for (int k = 0; k < np; ++k) z[r0 + k] *= keep;
        }
        lam += Ku - z;
        out.iterations = it;
        if (it % check == 0) {
            const double e = objective_of(Ku);
            if (e < best_obj) {
                best_obj = e;
                best = u;
                improved = true;
            }
            out.energies.push_back(best_obj * vol_unit);
            const double rp = (Ku - z).norm();
            const double rd = rho * (Kt * (z - zold)).norm();
            if (rp > 10.0 * rd) {
                rho *= 2.0;
                lam *= 0.5;
            } else if (rd > 10.0 * rp) {
                rho *= 0.5;
                lam *= 2.0;
            }
            if (it % opts.window == 0) {
                if (!(window_ref - best_obj > opts.tol * best_obj)) break;
                window_ref = best_obj;
            }
        }
    }
    if (improved)
        for (std::size_t j = 0; j < col.size(); ++j)
            if (col[j] >= 0) values[j] = best[col[j]] * unit;
}

}  // namespace

ConvexOutcome convex_minimize(const LatticeEnergy& en, const BoundaryDatum& datum, std::vector<double>& values,
                              const ConvexOptions& opts) {
    if (!en.all_radial()) throw std::logic_error("convex_minimize: energy has non-radial cells");
    const Grid& g = en.grid();
    ConvexOutcome out;

    if (opts.multigrid) {
        const Grid cg = g.coarsened();
        if (cg.dim() > 0) {
            const LatticeEnergy cen(en.pair(), cg);
            if (cen.all_radial()) {
                std::vector<double> cv = apply_datum(cg, datum).values;
                convex_minimize(cen, datum, cv, opts);
                std::vector<double> pv = prolong(cg, cv, g, values);
                if (en.total(pv) < en.total(values)) values.swap(pv);
            }
        }
    }

    if (opts.method == ConvexMethod::admm) {
        admm_solve(en, datum, values, opts, out);
        return out;
    }

    const double S = datum.scale() > 0.0 ? datum.scale() : 1.0;
    const double unit = g.h() * S;
    const Profile prof = en.profile();
    const Operator op = build_operator(en);
    const int d = op.d, np = op.np, nv = op.nv, ns = op.ns;
    const std::size_t du = static_cast<std::size_t>(d);
    const std::size_t nn = g.num_nodes(), nc = g.num_cells();

    std::vector<char> free(nn, 0);
    for (std::size_t i = 0; i < nn; ++i) free[i] = g.is_shell(i) ? 0 : 1;

    std::vector<double> x(values.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = values[i] / unit;

    // Step sizes.
    std::vector<double> tau(x.size(), 0.0);
    std::vector<double> sigma(nc * static_cast<std::size_t>(ns), 1.0);
    std::vector<std::size_t> base(nc);
    for (std::size_t c = 0; c < nc; ++c) base[c] = g.cell_base_node(c);
    for (std::size_t c = 0; c < nc; ++c)
        for (int s = 0; s < ns; ++s) {
            double rowmax = 0.0;
            for (int k = 0; k < np; ++k) {
                double row = 0.0;
                for (int a = 0; a < nv; ++a) {
                    const std::size_t v = base[c] + op.offsets[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
                    if (!free[v]) continue;
                    for (int cc = 0; cc < d; ++cc) {
                        const double gk = std::abs(op.at(s, k, a, cc));
                        row += gk;
                        tau[v * du + static_cast<std::size_t>(cc)] += gk;
                    }
                }
                rowmax = std::max(rowmax, row);
            }
            if (rowmax > 0.0) sigma[c * static_cast<std::size_t>(ns) + static_cast<std::size_t>(s)] = 1.0 / rowmax;
        }
    for (std::size_t j = 0; j < tau.size(); ++j) tau[j] = (free[j / du] && tau[j] > 0.0) ? 1.0 / tau[j] : 0.0;

    auto packed = [&](const std::vector<double>& xv, std::size_t c, int s, double* p) {
        for (int k = 0; k < np; ++k) p[k] = 0.0;
        for (int a = 0; a < nv; ++a) {
            const std::size_t v = base[c] + op.offsets[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
            for (int cc = 0; cc < d; ++cc) {
                const double xa = xv[v * du + static_cast<std::size_t>(cc)];
                if (xa == 0.0) continue;
                for (int k = 0; k < np; ++k) p[k] += op.at(s, k, a, cc) * xa;
            }
        }
    };
    auto norm = [&](const double* p) {
        double q = 0.0;
        for (int k = 0; k < np; ++k) q += p[k] * p[k];
        return std::sqrt(q);
    };
    std::vector<double> cell_obj(nc);
    auto objective = [&](const std::vector<double>& xv) {
        double p[kMaxPacked];
        for (std::size_t c = 0; c < nc; ++c) {
            double e = 0.0;
            for (int s = 0; s < ns; ++s) {
                packed(xv, c, s, p);
                e += phi_tilde(prof, S, norm(p));
            }
            cell_obj[c] = en.cell_weight(c) * e;
        }
        return pairwise_sum(cell_obj);
    };

    // Dual start: a subgradient of the objective at x.
    const std::size_t nrow = nc * static_cast<std::size_t>(ns);
    std::vector<double> y(nrow * static_cast<std::size_t>(np), 0.0);
    for (std::size_t c = 0; c < nc; ++c)
        for (int s = 0; s < ns; ++s) {
            double p[kMaxPacked];
            packed(x, c, s, p);
            const double pn = norm(p);
            if (pn == 0.0) continue;
            const double scale = en.cell_weight(c) * profile_slope(prof, S * pn) / pn;
            double* yr = &y[(c * static_cast<std::size_t>(ns) + static_cast<std::size_t>(s)) * static_cast<std::size_t>(np)];
            for (int k = 0; k < np; ++k) yr[k] = scale * p[k];
        }

    const double vol_unit = en.simplex_volume() * S;
    std::vector<double> best = x;
    double best_obj = objective(x);
    out.energies.push_back(best_obj * vol_unit);
    double window_ref = best_obj;
    bool improved = false;

    std::vector<double> xbar = x, grad(x.size());
    // running mean of the iterates since the last window boundary
    std::vector<double> avg(x.size(), 0.0), xa = x;
    int navg = 0;
    const int check = 20;
    for (int it = 1; it <= opts.max_iters; ++it) {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t c = 0; c < nc; ++c) {
            const double w = en.cell_weight(c);
            for (int s = 0; s < ns; ++s) {
                const std::size_t row = c * static_cast<std::size_t>(ns) + static_cast<std::size_t>(s);
                double* yr = &y[row * static_cast<std::size_t>(np)];
                const double sg = sigma[row];
                double p[kMaxPacked];
                packed(xbar, c, s, p);
                double un = 0.0;
                for (int k = 0; k < np; ++k) {
                    p[k] = yr[k] + sg * p[k];
                    un += p[k] * p[k];
                }
                un = std::sqrt(un);
                double keep = 1.0;
                if (un > 0.0) {
                    const double lam = w / sg;
                    keep = 1.0 - prox_radius(prof, S, lam, un / sg) / (un / sg);
                }
                for (int k = 0; k < np; ++k) yr[k] = keep * p[k];
                for (int a = 0; a < nv; ++a) {
                    const std::size_t v = base[c] + op.offsets[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
                    if (!free[v]) continue;
                    for (int cc = 0; cc < d; ++cc) {
                        double acc = 0.0;
                        for (int k = 0; k < np; ++k) acc += op.at(s, k, a, cc) * yr[k];
                        grad[v * du + static_cast<std::size_t>(cc)] += acc;
                    }
                }
            }
        }
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (tau[j] == 0.0) continue;
            const double xn = x[j] - tau[j] * grad[j];
            xbar[j] = 2.0 * xn - x[j];
            x[j] = xn;
            avg[j] += xn;
        }
        ++navg;
        out.iterations = it;
        if (it % check == 0) {
            for (std::size_t j = 0; j < x.size(); ++j)
                if (tau[j] != 0.0) xa[j] = avg[j] / navg;
            const double ea = objective(xa);
            if (ea < best_obj) {
                best_obj = ea;
                best = xa;
                improved = true;
            }
            const double e = objective(x);
            if (e < best_obj) {
                best_obj = e;
                best = x;
                improved = true;
            }
            out.energies.push_back(best_obj * vol_unit);
            if (it % opts.window == 0) {
                if (!(window_ref - best_obj > opts.tol * best_obj)) break;
                window_ref = best_obj;
                std::fill(avg.begin(), avg.end(), 0.0);
                navg = 0;
            }
        }
    }
    if (improved)
        for (std::size_t j = 0; j < values.size(); ++j)
            if (free[j / du]) values[j] = best[j] * unit;
    return out;
}

}  // namespace bdhomog::detail
