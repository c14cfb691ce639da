#include "bdhomog/cell_formulas.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace bdhomog {

namespace {

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

Vec zeros(int d) { return Vec(d); }

void check_schedule(const std::vector<double>& rs, const char* who) {
    if (rs.size() < 3) throw std::invalid_argument(std::string(who) + ": r_schedule needs at least 3 entries");
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (!(rs[i] > 0.0)) throw std::invalid_argument(std::string(who) + ": r values must be positive");
        if (i > 0 && !(rs[i] > rs[i - 1])) throw std::invalid_argument(std::string(who) + ": r_schedule must increase");
    }
}

double rel_gap(double a, double b) {
    const double m = std::max(std::abs(a), std::abs(b));
    return m > 0.0 ? std::abs(a - b) / m : 0.0;
}

double richardson(const std::vector<double>& r, const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n == 1 || v[n - 1] == v[n - 2]) return v[n - 1];
    return (r[n - 1] * v[n - 1] - r[n - 2] * v[n - 2]) / (r[n - 1] - r[n - 2]);
}

json vec_list(const std::vector<double>& v) { return json(v); }

}  // namespace

Grid cell_grid(const CellProblem& cp) {
    const int d = cp.pair.dim;
    if (!(cp.r > 0.0) || !(cp.h > 0.0)) throw std::invalid_argument("cell_grid: r and h must be positive");
    if (cp.r / cp.h < 8.0 - 1e-9) throw std::invalid_argument("cell_grid: r/h must be at least 8");
    const Vec x = cp.x_anchor.dim() == 0 ? zeros(d) : cp.x_anchor;
    if (x.dim() != d) throw std::invalid_argument("cell_grid: anchor dimension mismatch");
    const Vec center = x * cp.r;
    if (cp.datum.kind == BoundaryDatum::Kind::jump)
        return Grid::cube(d, cp.r, cp.h, center, rotation_for_normal(canonical_normal(cp.datum.nu)));
    return Grid::cube(d, cp.r, cp.h, center);
}

SolveResult solve_cell(const CellProblem& cp, const SolveOptions& opts) {
    const Grid g = cell_grid(cp);
    BoundaryDatum datum = cp.datum;
    if (datum.kind == BoundaryDatum::Kind::jump) datum = BoundaryDatum::jump(g.center(), datum.zeta, datum.nu);
    if (cp.use_recession_pair) return minimize(cp.pair.recession_pair(), g, datum, opts);
    return minimize(cp.pair, g, datum, opts);
}

double cell_value(const CellProblem& cp, const SolveOptions& opts) { return solve_cell(cp, opts).energy; }

bool plateau(const std::vector<double>& values, double rel) {
    if (values.size() < 3) return false;
    const auto first = values.end() - 3;
    const double lo = *std::min_element(first, values.end());
    const double hi = *std::max_element(first, values.end());
    if (hi == lo) return true;
    return (hi - lo) <= rel * std::max(std::abs(hi), std::abs(lo));
}

std::string ConvergenceRecord::to_csv() const {
    std::ostringstream os;
    os << "r,h,normalized_value,wall_time_ms\n";
    for (std::size_t i = 0; i < r_values.size(); ++i)
        os << csv_number(r_values[i]) << ',' << csv_number(h_values[i]) << ',' << csv_number(normalized_values[i])
           << ',' << csv_number(wall_time_ms[i]) << '\n';
    return os.str();
}

json ConvergenceRecord::to_json() const {
    json j;
    j["label"] = label;
    j["r_values"] = vec_list(r_values);
    j["h_values"] = vec_list(h_values);
    j["normalized_values"] = vec_list(normalized_values);
    j["wall_time_ms"] = vec_list(wall_time_ms);
    j["extrapolated"] = extrapolated;
    j["richardson"] = richardson;
    j["plateau_flag"] = plateau_flag;
    return j;
}

std::string ConvergenceRecord::to_svg() const {
    const double W = 480, H = 320, L = 70, R = 20, T = 30, B = 50;
    std::vector<double> xs, ys = normalized_values;
    for (double r : r_values) xs.push_back(1.0 / r);
    double x0 = 0.0, x1 = xs.empty() ? 1.0 : *std::max_element(xs.begin(), xs.end());
    double y0 = ys.empty() ? 0.0 : *std::min_element(ys.begin(), ys.end());
    double y1 = ys.empty() ? 1.0 : *std::max_element(ys.begin(), ys.end());
    if (y1 - y0 < 1e-12 * std::max(1.0, std::abs(y1))) {
        y0 -= 0.5 * std::max(1e-3, std::abs(y0) * 0.05);
        y1 += 0.5 * std::max(1e-3, std::abs(y1) * 0.05);
    }
    const double pad = 0.08 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    if (x1 <= x0) x1 = x0 + 1.0;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    char buf[256];
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" << label << "</text>\n";
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n"
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  L, H - B, W - R, H - B, L, H - B, L, T);
    os << buf;
    for (int i = 0; i <= 4; ++i) {
        const double yv = y0 + (y1 - y0) * i / 4.0;
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" font-size=\"10\">%.5g</text>\n",
                      L - 4, py(yv) + 3, yv);
        os << buf;
        const double xv = x0 + (x1 - x0) * i / 4.0;
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"10\">%.4g</text>\n",
                      px(xv), H - B + 14, xv);
        os << buf;
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"11\">1/r</text>\n";
    if (!xs.empty()) {
        os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(xs[i]), py(ys[i]));
            os << buf;
        }
        os << "\"/>\n";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"steelblue\"/>\n", px(xs[i]),
                          py(ys[i]));
            os << buf;
        }
    }
    os << "</svg>\n";
    return os.str();
}

namespace {

ConvergenceRecord run_record(const CellProblem& base, const std::vector<double>& r_schedule, int power,
                             const SolveOptions& opts) {
    ConvergenceRecord rec;
    for (double r : r_schedule) {
        CellProblem cp = base;
        cp.r = r;
        const auto t0 = std::chrono::steady_clock::now();
        const double m = cell_value(cp, opts);
        rec.r_values.push_back(r);
        rec.h_values.push_back(cp.h);
        rec.normalized_values.push_back(m / ipow(r, power));
        rec.wall_time_ms.push_back(
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    rec.extrapolated = rec.normalized_values.back();
    rec.richardson = richardson(rec.r_values, rec.normalized_values);
    rec.plateau_flag = plateau(rec.normalized_values);
    return rec;
}

}  // namespace

ConvergenceRecord estimate_f_lim(const IntegrandPair& pair, const SymMatrix& A, const std::vector<double>& r_schedule,
                                 const Vec& x_anchor, double h, const SolveOptions& opts) {
    check_schedule(r_schedule, "estimate_f_lim");
    CellProblem cp;
    cp.pair = pair;
    cp.datum = BoundaryDatum::affine(A);
    cp.x_anchor = x_anchor;
    cp.h = h;
    ConvergenceRecord rec = run_record(cp, r_schedule, pair.dim, opts);
    rec.label = "f_lim " + pair.name + " A=" + A.to_string();
    return rec;
}

ConvergenceRecord estimate_g_lim(const IntegrandPair& pair, const Vec& zeta, const Vec& nu,
                                 const std::vector<double>& r_schedule, const Vec& x_anchor, double h,
                                 const SolveOptions& opts) {
    check_schedule(r_schedule, "estimate_g_lim");
    CellProblem cp;
    cp.pair = pair;
    cp.datum = BoundaryDatum::jump(Vec(pair.dim), zeta, nu);
    cp.x_anchor = x_anchor;
    cp.h = h;
    cp.use_recession_pair = true;
    ConvergenceRecord rec = run_record(cp, r_schedule, pair.dim - 1, opts);
    rec.label = "g_lim " + pair.name + " zeta=" + cp.datum.describe();
    return rec;
}

json ScalingReport::to_json() const {
    json j;
    j["eps"] = eps;
    j["rho"] = rho;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["difference"] = difference;
    j["relative_gap"] = relative_gap;
    j["bound"] = bound;
    j["constant_C"] = constant_C;
    j["pass"] = pass;
    return j;
}

ScalingReport check_scaling_identity(const IntegrandPair& pair, const SymMatrix& A, double eps, const Vec& x,
                                     double rho, double h0, const SolveOptions& opts) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("check_scaling_identity: eps must lie in (0,1]");
    const int d = pair.dim;
    const Grid small = Grid::cube(d, rho, eps * h0, x);
    const Grid large = Grid::cube(d, rho / eps, h0, x / eps);
    if (small.n() != large.n()) throw std::invalid_argument("check_scaling_identity: incommensurate grids");
    ScalingReport rep;
    rep.eps = eps;
    rep.rho = rho;
    rep.lhs = minimize(rescale_pair(pair, eps), small, BoundaryDatum::affine(A), opts).energy;
    rep.rhs = ipow(eps, d) * minimize(pair, large, BoundaryDatum::affine(A), opts).energy;
    rep.difference = rep.lhs - rep.rhs;
    rep.relative_gap = rel_gap(rep.lhs, rep.rhs);
    rep.bound = 1e-6 + 2.0 * opts.tol_energy;
    rep.pass = rep.relative_gap <= rep.bound;
    return rep;
}

double surface_scaling_constant(const StructuralConstants& k, double zn) {
    const double a = k.alpha;
    const double C1 = 2.0 * k.c3 * k.c7 / k.c1;
    const double C2 = 2.0 * k.c6 + 2.0 * k.c6 * std::pow(2.0 * k.c6 * (1.0 - a), (1.0 - a) / a);
    return std::max({k.c6, k.c6 * k.c3 * zn, C1 * k.c3 * zn, k.c6 * std::pow(2.0 * k.c3 * zn + C2, 1.0 - a)});
}

ScalingReport check_surface_scaling(const IntegrandPair& pair, const Vec& zeta, const Vec& nu, double eps,
                                    const Vec& x, double rho, double h0, const SolveOptions& opts) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("check_surface_scaling: eps must lie in (0,1]");
    if (pair.consts.c6 > 0.0 && !(eps < 1.0 / (2.0 * pair.consts.c6)))
        throw std::invalid_argument("check_surface_scaling: eps must be below 1/(2 c6)");
    const int d = pair.dim;
    const Matrix frame = rotation_for_normal(canonical_normal(nu));
    const Grid small = Grid::cube(d, rho, eps * h0, x, frame);
    const Grid large = Grid::cube(d, rho / eps, h0, x / eps, frame);
    if (small.n() != large.n()) throw std::invalid_argument("check_surface_scaling: incommensurate grids");
    ScalingReport rep;
    rep.eps = eps;
    rep.rho = rho;
    rep.lhs = minimize(rescale_pair(pair, eps), small, BoundaryDatum::jump(x, zeta, nu), opts).energy;
    rep.rhs = ipow(eps, d - 1) *
              minimize(pair.recession_pair(), large, BoundaryDatum::jump(x / eps, zeta, nu), opts).energy;
    rep.difference = rep.lhs - rep.rhs;
    rep.relative_gap = rel_gap(rep.lhs, rep.rhs);
    rep.constant_C = surface_scaling_constant(pair.consts, zeta.norm());
    const double a = pair.consts.alpha;
    rep.bound = rep.constant_C * std::pow(rho, d - 1 + a) + rep.constant_C * eps * ipow(rho, d - 1);
    rep.pass = std::abs(rep.difference) <= rep.bound;
    return rep;
}

double fit_recession_limit(const std::vector<double>& t, const std::vector<double>& v, double alpha) {
    if (t.size() != v.size() || t.empty()) throw std::invalid_argument("fit_recession_limit: bad input");
    if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) return v.front();
    if (t.size() == 1) return v.front();
    double n = 0, S = 0, SS = 0, Sv = 0, Ssv = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double s = std::pow(t[i], -alpha);
        n += 1;
        S += s;
        SS += s * s;
        Sv += v[i];
        Ssv += s * v[i];
    }
    return (SS * Sv - S * Ssv) / (n * SS - S * S);
}

json GJReport::to_json() const {
    json j;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    j["samples"] = json::array();
    for (const GJSample& s : samples) {
        json e;
        e["zeta"] = bdhomog::to_json(s.zeta);
        e["nu"] = bdhomog::to_json(s.nu);
        e["g_lim"] = s.g_lim;
        e["f_inf_lim"] = s.f_inf_lim;
        e["gap"] = s.gap;
        e["t_values"] = s.t_values;
        e["g_record"] = s.g_record.to_json();
        e["f_records"] = json::array();
        for (const auto& r : s.f_records) e["f_records"].push_back(r.to_json());
        j["samples"].push_back(e);
    }
    return j;
}

GJReport check_gj_identity(const IntegrandPair& pair, const std::vector<std::pair<Vec, Vec>>& samples,
                           const std::vector<double>& r_schedule, const Vec& x_anchor, double h,
                           const SolveOptions& opts, double tolerance) {
    GJReport rep;
    rep.tolerance = tolerance;
    rep.pass = true;
    const std::vector<double> ts{1.0, 2.0, 4.0, 8.0};
    const bool homogeneous = pair.f.profile == Profile::linear;
    for (const auto& [zeta, nu] : samples) {
        GJSample s;
        s.zeta = zeta;
        s.nu = nu;
        s.t_values = ts;
        s.g_record = estimate_g_lim(pair, zeta, nu, r_schedule, x_anchor, h, opts);
        s.g_lim = s.g_record.extrapolated;
        const SymMatrix B = sym_tensor(zeta, nu);
        std::vector<double> vt;
        if (homogeneous) {
            s.f_records.push_back(estimate_f_lim(pair, B, r_schedule, x_anchor, h, opts));
            vt.assign(ts.size(), s.f_records.back().extrapolated);
        } else {
            for (double t : ts) {
                s.f_records.push_back(estimate_f_lim(pair, B * t, r_schedule, x_anchor, h, opts));
                vt.push_back(s.f_records.back().extrapolated / t);
            }
        }
        s.f_inf_lim = fit_recession_limit(ts, vt, pair.consts.alpha);
        s.gap = rel_gap(s.g_lim, s.f_inf_lim);
        if (!(s.gap <= tolerance)) rep.pass = false;
        rep.samples.push_back(std::move(s));
    }
    return rep;
}

json GammaReport::to_json() const {
    json j;
    j["eps"] = eps;
    j["minima"] = minima;
    j["h_values"] = h_values;
    j["limit_minimum"] = limit_minimum;
    j["relative_gaps"] = relative_gaps;
    j["limit_record"] = limit_record.to_json();
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    return j;
}

namespace {

void check_eps_schedule(const std::vector<double>& eps) {
    if (eps.empty()) throw std::invalid_argument("gamma_minima_check: empty eps schedule");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0 && eps[i] <= 1.0)) throw std::invalid_argument("gamma_minima_check: eps must lie in (0,1]");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw std::invalid_argument("gamma_minima_check: eps must decrease");
    }
}

void finish_gamma(GammaReport& rep, double tolerance) {
    rep.tolerance = tolerance;
    for (double m : rep.minima) rep.relative_gaps.push_back(rel_gap(m, rep.limit_minimum));
    rep.pass = !rep.relative_gaps.empty() && rep.relative_gaps.back() <= tolerance;
}

}  // namespace

GammaReport gamma_minima_check(const IntegrandPair& pair, const std::vector<double>& eps_schedule, const Vec& center,
                               double side, const SymMatrix& A, const std::vector<double>& limit_r, double h0,
                               const SolveOptions& opts, double tolerance) {
    check_eps_schedule(eps_schedule);
    const int d = pair.dim;
    GammaReport rep;
    for (double eps : eps_schedule) {
        const Grid g = Grid::cube(d, side, eps * h0, center);
        rep.eps.push_back(eps);
        rep.h_values.push_back(eps * h0);
        rep.minima.push_back(minimize(rescale_pair(pair, eps), g, BoundaryDatum::affine(A), opts).energy);
    }
    rep.limit_record = estimate_f_lim(pair, A, limit_r, Vec(d), h0, opts);
    rep.limit_minimum = rep.limit_record.richardson * ipow(side, d);
    finish_gamma(rep, tolerance);
    return rep;
}

GammaReport gamma_minima_check_jump(const IntegrandPair& pair, const std::vector<double>& eps_schedule,
                                    const Vec& center, double side, const Vec& zeta, const Vec& nu,
                                    const std::vector<double>& limit_r, double h0, const SolveOptions& opts,
                                    double tolerance) {
    check_eps_schedule(eps_schedule);
    const int d = pair.dim;
    const Matrix frame = rotation_for_normal(canonical_normal(nu));
    GammaReport rep;
    for (double eps : eps_schedule) {
        const Grid g = Grid::cube(d, side, eps * h0, center, frame);
        rep.eps.push_back(eps);
        rep.h_values.push_back(eps * h0);
        rep.minima.push_back(minimize(rescale_pair(pair, eps), g, BoundaryDatum::jump(center, zeta, nu), opts).energy);
    }
    rep.limit_record = estimate_g_lim(pair, zeta, nu, limit_r, Vec(d), h0, opts);
    rep.limit_minimum = rep.limit_record.richardson * ipow(side, d - 1);
    finish_gamma(rep, tolerance);
    return rep;
}

}  // namespace bdhomog
