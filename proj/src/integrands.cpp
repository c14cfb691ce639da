#include "bdhomog/integrands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bdhomog {

void StructuralConstants::validate() const {
    if (!(c1 > 0.0)) throw std::invalid_argument("constants: c1 must be positive");
    if (!(c3 >= c1)) throw std::invalid_argument("constants: need c1 <= c3");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("constants: alpha must lie in (0,1)");
    for (double c : {c2, c4, c5, c6, c7, sigma1})
        if (!(c >= 0.0)) throw std::invalid_argument("constants: c2, c4..c7 and sigma1 must be non-negative");
}

double IntegrandPair::g_hat(const Vec& x, const SymMatrix& B) const {
    const double nb = B.norm();
    if (nb == 0.0) return 0.0;
    if (g.rank_one_inf) {
        return is_rank_one_decomposable(B) ? g.rank_one_inf(x, B) : f.recession(x, B);
    }
    const RankOneDecomposition dec = decompose_rank_one(B);
    if (dec.count == 0) return f.recession(x, B);
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < dec.count; ++k) {
        const RankOneSplit& s = dec.splits[static_cast<std::size_t>(k)];
        best = std::min(best, g.eval(x, s.zeta, s.nu));
    }
    return best;
}

IntegrandPair IntegrandPair::recession_pair() const {
    IntegrandPair r = *this;
    r.name = name + "^inf";
    r.f.eval = f.recession;
    if (f.profile != Profile::generic) r.f.profile = Profile::linear;
    r.g.eval = g.recession;
    r.g.rank_one_inf = g.recession_rank_one_inf;
    return r;
}

IntegrandPair rescale_pair(const IntegrandPair& p, double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("rescale_pair: eps must be positive");
    IntegrandPair r = p;
    {
        std::ostringstream os;
        os.precision(17);
        os << p.name << "@eps=" << eps;
        r.name = os.str();
    }
    const BulkIntegrand f = p.f;
    const SurfaceIntegrand g = p.g;
    r.f.eval = [f, eps](const Vec& x, const SymMatrix& A) { return f.eval(x / eps, A); };
    r.f.recession = [f, eps](const Vec& x, const SymMatrix& A) { return f.recession(x / eps, A); };
    if (f.weight) r.f.weight = [f, eps](const Vec& x) { return f.weight(x / eps); };
    r.g.eval = [g, eps](const Vec& x, const Vec& z, const Vec& n) { return eps * g.eval(x / eps, z / eps, n); };
    r.g.recession = [g, eps](const Vec& x, const Vec& z, const Vec& n) {
        return eps * g.recession(x / eps, z / eps, n);
    };
    if (g.rank_one_inf)
        r.g.rank_one_inf = [g, eps](const Vec& x, const SymMatrix& B) { return eps * g.rank_one_inf(x / eps, B / eps); };
    if (g.recession_rank_one_inf)
        r.g.recession_rank_one_inf = [g, eps](const Vec& x, const SymMatrix& B) {
            return eps * g.recession_rank_one_inf(x / eps, B / eps);
        };
    if (g.norm_weight) r.g.norm_weight = [g, eps](const Vec& x) { return g.norm_weight(x / eps); };
    return r;
}

double profile_value(Profile p, double s) {
    switch (p) {
        case Profile::linear: return s;
        case Profile::smooth: return s * s / (std::sqrt(1.0 + s * s) + 1.0);
        case Profile::generic: break;
    }
    throw std::logic_error("profile_value: generic profile has no closed form");
}

double profile_slope(Profile p, double s) {
    switch (p) {
        case Profile::linear: return 1.0;
        case Profile::smooth: return s / std::sqrt(1.0 + s * s);
        case Profile::generic: break;
    }
    throw std::logic_error("profile_slope: generic profile has no closed form");
}

// ---------------------------------------------------------------- estimates

std::vector<double> default_t_grid(double t_max) {
    if (!(t_max >= 1.0)) throw std::invalid_argument("default_t_grid: t_max must be >= 1");
    std::vector<double> ts;
    for (double t = 1.0; t < t_max * (1.0 + 1e-12); t *= 10.0) ts.push_back(t);
    if (ts.back() != t_max) ts.push_back(t_max);
    return ts;
}

namespace {

void check_t_grid(const std::vector<double>& ts) {
    if (ts.empty()) throw std::invalid_argument("t_grid must be nonempty");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!(ts[i] > 0.0)) throw std::invalid_argument("t_grid entries must be positive");
        if (i > 0 && !(ts[i] > ts[i - 1])) throw std::invalid_argument("t_grid must be increasing");
    }
}

}  // namespace

RateReport recession_estimate(const IntegrandPair& p, const Vec& x, const SymMatrix& A,
                              const std::vector<double>& t_grid) {
    check_t_grid(t_grid);
    const StructuralConstants& c = p.consts;
    const double t_max = t_grid.back();
    RateReport rep;
    rep.t_grid = t_grid;
    rep.value = p.f.eval(x, A * t_max) / t_max;
    const double na = A.norm();
    const double CA = c.c6 + std::pow(c.c4, 1.0 - c.alpha) + c.c6 * std::pow(c.c3, 1.0 - c.alpha) * std::pow(na, 1.0 - c.alpha);
    for (double t : t_grid) {
        const double dev = std::abs(p.f.eval(x, A * t) / t - rep.value);
        const double bound = CA / std::pow(t, c.alpha);
        rep.deviations.push_back(dev);
        rep.bounds.push_back(bound);
        if (dev > bound + 1e-12 * (rep.value + bound)) rep.violation = true;
    }
    return rep;
}

RateReport g_infinity_estimate(const IntegrandPair& p, const Vec& x, const Vec& zeta, const Vec& nu,
                               const std::vector<double>& t_grid) {
    check_t_grid(t_grid);
    const StructuralConstants& c = p.consts;
    const double t_max = t_grid.back();
    RateReport rep;
    rep.t_grid = t_grid;
    rep.value = p.g.eval(x, zeta * t_max, nu) / t_max;
    const double nzn = sym_tensor(zeta, nu).norm();
    for (double t : t_grid) {
        const double dev = std::abs(p.g.eval(x, zeta * t, nu) / t - rep.value);
        const double bound = 2.0 * c.c3 * c.c7 * nzn / t;
        rep.deviations.push_back(dev);
        rep.bounds.push_back(bound);
        if (dev > bound + 1e-12 * (rep.value + bound)) rep.violation = true;
    }
    return rep;
}

// ---------------------------------------------------------------- validation

void SamplePlan::validate(int dim) const {
    const std::size_t n = xs.size();
    if (As.size() != n || A2s.size() != n || zetas.size() != n || zeta2s.size() != n || nus.size() != n)
        throw std::invalid_argument("SamplePlan: sample lists must have equal length");
    for (std::size_t i = 0; i < n; ++i) {
        if (xs[i].dim() != dim || As[i].dim() != dim || A2s[i].dim() != dim || zetas[i].dim() != dim ||
            zeta2s[i].dim() != dim || nus[i].dim() != dim)
            throw std::invalid_argument("SamplePlan: dimension mismatch");
        if (std::abs(nus[i].norm() - 1.0) > 1e-12) throw std::invalid_argument("SamplePlan: normals must be unit");
    }
    for (double s : s_values)
        if (!(s > 0.0)) throw std::invalid_argument("SamplePlan: s values must be positive");
    for (double t : t_values)
        if (!(t > 0.0)) throw std::invalid_argument("SamplePlan: t values must be positive");
}

SamplePlan SamplePlan::standard(int dim, int n_random, std::uint64_t seed) {
    Vec::check_dim(dim);
    SamplePlan plan;
    plan.s_values = {0.5, 1.0, 2.0, 10.0, 100.0};
    plan.t_values = plan.s_values;
    const Vec e1 = Vec::unit(dim, 0);
    const Vec ed = Vec::unit(dim, dim - 1);
    const SymMatrix E11 = sym_tensor(e1, e1);
    const SymMatrix I = SymMatrix::identity(dim);

    auto add = [&](const Vec& x, const SymMatrix& A, const SymMatrix& A2, const Vec& z, const Vec& z2, const Vec& n) {
        plan.xs.push_back(x);
        plan.As.push_back(A);
        plan.A2s.push_back(A2);
        plan.zetas.push_back(z);
        plan.zeta2s.push_back(z2);
        plan.nus.push_back(n);
    };
    Vec origin(dim);
    Vec x1(dim);
    for (int i = 0; i < dim; ++i) x1[i] = 0.25 + 0.1 * i;
    for (double s : {0.0, 0.5, 1.0, 2.0, 10.0}) add(x1, E11 * s, I, e1 * s, ed, ed);
    add(origin, I, E11, e1, e1 * 2.0, e1);
    add(origin, I * 3.0, I * -1.0, ed * 0.5, e1, ed);
    if (dim >= 2) {
        const Vec e2 = Vec::unit(dim, 1);
        const SymMatrix E12 = sym_tensor(e1, e2);
        add(x1, E12, E11, e1, e2, e2);
        add(origin, E12 * 4.0, E12 * -4.0, e2 * 3.0, e1 * -1.0, (e1 + e2) / std::sqrt(2.0));
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto log_scale = [&]() { return std::pow(10.0, 2.0 * unif(rng)); };
    auto rand_vec = [&](double scale) {
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = scale * gauss(rng);
        return v;
    };
    auto rand_sym = [&](double scale) {
        SymMatrix m(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) m.set(i, j, scale * gauss(rng));
        return m;
    };
    for (int k = 0; k < n_random; ++k) {
        Vec x(dim);
        for (int i = 0; i < dim; ++i) x[i] = 4.0 * unif(rng);
        Vec n = rand_vec(1.0);
        while (n.norm() < 1e-3) n = rand_vec(1.0);
        n = n / n.norm();
        const double sa = log_scale(), sz = log_scale();
        add(x, rand_sym(sa), rand_sym(sa), rand_vec(sz), rand_vec(sz), n);
    }
    return plan;
}

bool IntegrandReport::all_pass() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.pass; });
}

const ConditionResult* IntegrandReport::find(const std::string& name) const {
    for (const auto& c : conditions)
        if (c.name == name) return &c;
    return nullptr;
}

std::vector<std::string> IntegrandReport::failed() const {
    std::vector<std::string> out;
    for (const auto& c : conditions)
        if (!c.pass) out.push_back(c.name);
    return out;
}

json IntegrandReport::to_json() const {
    json j;
    j["pair"] = pair_name;
    j["all_pass"] = all_pass();
    json cs = json::array();
    for (const auto& c : conditions)
        cs.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"checked", c.checked},
                      {"worst_excess", c.worst_excess},
                      {"worst_sample", c.worst_sample},
                      {"first_failure", c.first_failure}});
    j["conditions"] = cs;
    j["failed"] = failed();
    return j;
}

namespace {

constexpr double kRoundingSlack = 1e-12;

std::string vec_str(const Vec& v) {
    std::ostringstream os;
    os.precision(6);
    os << '(';
    for (int i = 0; i < v.dim(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

/// Accumulates "lhs <= rhs" checks; `scale` sets the rounding slack.
class Checker {
public:
    explicit Checker(std::string name) { res_.name = std::move(name); }

    template <class Describe>
    void le(double lhs, double rhs, double scale, Describe&& describe) {
        ++res_.checked;
        const double excess = lhs - rhs;
        if (!std::isfinite(lhs) || !std::isfinite(rhs) || excess > kRoundingSlack * scale) {
            const double shown = std::isfinite(excess) ? excess : std::numeric_limits<double>::infinity();
            if (res_.pass) res_.first_failure = describe();
            res_.pass = false;
            if (shown > res_.worst_excess || res_.worst_sample.empty()) {
                res_.worst_excess = shown;
                res_.worst_sample = describe();
            }
        }
    }

    ConditionResult result() const { return res_; }

private:
    ConditionResult res_;
};

}  // namespace

IntegrandReport check_integrand(const IntegrandPair& p, const SamplePlan& plan) {
    plan.validate(p.dim);
    const StructuralConstants& c = p.consts;
    IntegrandReport rep;
    rep.pair_name = p.name;
    Checker f2("f2"), f3("f3"), f4("f4"), frec("f_recession"), g2("g2"), g3("g3"), g4("g4"), g5("g5"),
        grec("g_recession");
    const double a1 = 1.0 - c.alpha;

    for (std::size_t i = 0; i < plan.size(); ++i) {
        const Vec& x = plan.xs[i];
        const SymMatrix& A = plan.As[i];
        const SymMatrix& A2 = plan.A2s[i];
        const Vec& z = plan.zetas[i];
        const Vec& z2 = plan.zeta2s[i];
        const Vec& n = plan.nus[i];
        const double na = A.norm();
        auto at_A = [&]() { return "x=" + vec_str(x) + " A=" + A.to_string() + " |A|=" + std::to_string(na); };

        const double fa = p.f.eval(x, A);
        f2.le(c.c1 * na - c.c2, fa, c.c1 * na + c.c2 + fa, at_A);
        f2.le(fa, c.c3 * na + c.c4, c.c3 * na + c.c4 + fa, at_A);
        f2.le(0.0, fa, fa, at_A);

        const double fa2 = p.f.eval(x, A2);
        f3.le(std::abs(fa - fa2), c.c5 * (A - A2).norm(), fa + fa2, [&]() { return at_A() + " A2=" + A2.to_string(); });

        for (double s : plan.s_values)
            for (double t : plan.t_values) {
                const double fs = p.f.eval(x, A * s), ft = p.f.eval(x, A * t);
                const double lhs = std::abs(fs / s - ft / t);
                const double rhs = c.c6 / s * std::pow(fs, a1) + c.c6 / s + c.c6 / t * std::pow(ft, a1) + c.c6 / t;
                f4.le(lhs, rhs, fs / s + ft / t + rhs,
                      [&]() { return at_A() + " s=" + std::to_string(s) + " t=" + std::to_string(t); });
            }

        const double finf = p.f.recession(x, A);
        frec.le(c.c1 * na, finf, c.c1 * na + finf, at_A);
        frec.le(finf, c.c3 * na, c.c3 * na + finf, at_A);
        for (double s : plan.s_values) {
            const double fsi = p.f.recession(x, A * s);
            frec.le(std::abs(fsi - s * finf), 0.0, fsi + s * finf, at_A);
        }

        const SymMatrix zn = sym_tensor(z, n);
        const double nzn = zn.norm();
        auto at_g = [&]() { return "x=" + vec_str(x) + " zeta=" + vec_str(z) + " nu=" + vec_str(n); };
        const double gz = p.g.eval(x, z, n);
        const double gm = p.g.eval(x, -z, -n);
        g2.le(std::abs(gz - gm), 0.0, gz + gm, at_g);
        g3.le(c.c1 * nzn, gz, c.c1 * nzn + gz, at_g);
        g3.le(gz, c.c3 * nzn, c.c3 * nzn + gz, at_g);

        const double gz2 = p.g.eval(x, z2, n);
        g4.le(std::abs(gz - gz2), c.sigma1 * (z - z2).norm(), gz + gz2,
              [&]() { return at_g() + " zeta2=" + vec_str(z2); });

        for (double s : plan.s_values)
            for (double t : plan.t_values) {
                const double gs = p.g.eval(x, z * s, n) / s, gt = p.g.eval(x, z * t, n) / t;
                const double lhs = std::abs(gs - gt);
                const double rhs = c.c7 * (gs + gt) * (1.0 / s + 1.0 / t);
                g5.le(lhs, rhs, gs + gt + rhs,
                      [&]() { return at_g() + " s=" + std::to_string(s) + " t=" + std::to_string(t); });
            }

        const double ginf = p.g.recession(x, z, n);
        grec.le(c.c1 * nzn, ginf, c.c1 * nzn + ginf, at_g);
        grec.le(ginf, c.c3 * nzn, c.c3 * nzn + ginf, at_g);
        for (double s : plan.s_values) {
            const double gsi = p.g.recession(x, z * s, n);
            grec.le(std::abs(gsi - s * ginf), 0.0, gsi + s * ginf, at_g);
        }
    }
    for (const Checker* ch : {&f2, &f3, &f4, &frec, &g2, &g3, &g4, &g5, &grec}) rep.conditions.push_back(ch->result());
    return rep;
}

// ---------------------------------------------------------------- library

LibraryName parse_library_name(const std::string& s) {
    if (s == "homogeneous_norm") return LibraryName::homogeneous_norm;
    if (s == "smooth_nonhomogeneous") return LibraryName::smooth_nonhomogeneous;
    if (s == "laminate") return LibraryName::laminate;
    if (s == "checkerboard") return LibraryName::checkerboard;
    if (s == "random_checkerboard") return LibraryName::random_checkerboard;
    if (s == "hyperplane_weak_surface") return LibraryName::hyperplane_weak_surface;
    throw std::invalid_argument("unknown integrand name: " + s);
}

std::string to_string(LibraryName n) {
    switch (n) {
        case LibraryName::homogeneous_norm: return "homogeneous_norm";
        case LibraryName::smooth_nonhomogeneous: return "smooth_nonhomogeneous";
        case LibraryName::laminate: return "laminate";
        case LibraryName::checkerboard: return "checkerboard";
        case LibraryName::random_checkerboard: return "random_checkerboard";
        case LibraryName::hyperplane_weak_surface: return "hyperplane_weak_surface";
    }
    return "?";
}

double laminate_weight(double xk, double a_soft, double a_hard) {
    const double t = xk + 0.25;
    return (t - std::floor(t) < 0.5) ? a_soft : a_hard;
}

double checkerboard_weight(const Vec& x, double a_soft, double a_hard) {
    long long s = 0;
    for (int i = 0; i < x.dim(); ++i) s += static_cast<long long>(std::floor(x[i] + 0.5));
    return (s % 2 == 0) ? a_soft : a_hard;
}

namespace {

/// f = wf(x)|A|, g = wg(x)|ζ⊙ν|; both already 1-homogeneous.
IntegrandPair weighted_pair(std::string name, int dim, const StructuralConstants& c, Periodicity per, WeightFn wf,
                            WeightFn wg) {
    IntegrandPair p;
    p.name = std::move(name);
    p.dim = dim;
    p.consts = c;
    p.periodicity = per;
    p.f.eval = [wf](const Vec& x, const SymMatrix& A) { return wf(x) * A.norm(); };
    p.f.recession = p.f.eval;
    p.f.profile = Profile::linear;
    p.f.weight = wf;
    p.g.eval = [wg](const Vec& x, const Vec& z, const Vec& n) { return wg(x) * sym_tensor(z, n).norm(); };
    p.g.recession = p.g.eval;
    p.g.rank_one_inf = [wg](const Vec& x, const SymMatrix& B) { return wg(x) * B.norm(); };
    p.g.recession_rank_one_inf = p.g.rank_one_inf;
    p.g.norm_weight = wg;
    return p;
}

StructuralConstants two_value_constants(double lo, double hi) {
    StructuralConstants c;
    c.c1 = lo;
    c.c2 = 0.0;
    c.c3 = hi;
    c.c4 = 0.0;
    c.c5 = hi;
    c.c6 = 0.0;
    c.c7 = 0.0;
    c.alpha = 0.5;
    c.sigma1 = hi;
    return c;
}

void check_weights(double a_soft, double a_hard) {
    if (!(a_soft > 0.0) || !(a_hard > 0.0)) throw std::invalid_argument("integrand weights must be positive");
}

}  // namespace

IntegrandPair make_library_integrand(LibraryName name, const LibraryParams& prm) {
    const int dim = Vec::check_dim(prm.dim);
    IntegrandPair p;
    switch (name) {
        case LibraryName::homogeneous_norm: {
            auto one = [](const Vec&) { return 1.0; };
            p = weighted_pair("homogeneous_norm", dim, two_value_constants(1.0, 1.0), Periodicity::homogeneous, one, one);
            break;
        }
        case LibraryName::smooth_nonhomogeneous: {
            StructuralConstants c;
            c.c1 = 1.0;
            c.c2 = 1.0;
            c.c3 = 1.0;
            c.c4 = 0.0;
            c.c5 = 1.0;
            c.c6 = 1.0;
            c.c7 = 0.0;
            c.alpha = 0.5;
            c.sigma1 = 1.0;
            auto one = [](const Vec&) { return 1.0; };
            p = weighted_pair("smooth_nonhomogeneous", dim, c, Periodicity::homogeneous, one, one);
            // sqrt(1+|A|^2) - 1 written without cancellation
            p.f.eval = [](const Vec&, const SymMatrix& A) {
                const double n2 = A.norm() * A.norm();
                return n2 / (std::sqrt(1.0 + n2) + 1.0);
            };
            p.f.profile = Profile::smooth;
            break;
        }
        case LibraryName::laminate: {
            check_weights(prm.a_soft, prm.a_hard);
            if (prm.direction < 0 || prm.direction >= dim) throw std::invalid_argument("laminate: direction out of range");
            const double as = prm.a_soft, ah = prm.a_hard;
            const int k = prm.direction;
            WeightFn w = [as, ah, k](const Vec& x) { return laminate_weight(x[k], as, ah); };
            p = weighted_pair("laminate", dim, two_value_constants(std::min(as, ah), std::max(as, ah)),
                              Periodicity::periodic, w, w);
            p.params = {{"a_soft", as}, {"a_hard", ah}, {"direction", static_cast<double>(k)}};
            break;
        }
        case LibraryName::checkerboard: {
            check_weights(prm.a_soft, prm.a_hard);
            const double as = prm.a_soft, ah = prm.a_hard;
            WeightFn w = [as, ah](const Vec& x) { return checkerboard_weight(x, as, ah); };
            p = weighted_pair("checkerboard", dim, two_value_constants(std::min(as, ah), std::max(as, ah)),
                              Periodicity::periodic, w, w);
            p.params = {{"a_soft", as}, {"a_hard", ah}};
            break;
        }
        case LibraryName::random_checkerboard: {
            if (!prm.field) throw std::invalid_argument("random_checkerboard: a random field is required");
            if (prm.field->dim() != dim) throw std::invalid_argument("random_checkerboard: field dimension mismatch");
            const RandomField field = *prm.field;
            WeightFn w = [field](const Vec& x) { return field.mark_at(x); };
            p = weighted_pair("random_checkerboard", dim, two_value_constants(field.law().lower(), field.law().upper()),
                              Periodicity::stationary_random, w, w);
            p.field = field;
            break;
        }
        case LibraryName::hyperplane_weak_surface: {
            if (!(prm.c1 > 0.0)) throw std::invalid_argument("hyperplane_weak_surface: c1 must be positive");
            if (prm.c1 > prm.c3) throw std::invalid_argument("hyperplane_weak_surface: need c1 <= c3");
            const double c1 = prm.c1, c3 = prm.c3;
            WeightFn wf = [c3](const Vec&) { return c3; };
            WeightFn wg = [c1, c3](const Vec& x) { return x[x.dim() - 1] == 0.0 ? c1 : c3; };
            p = weighted_pair("hyperplane_weak_surface", dim, two_value_constants(c1, c3), Periodicity::homogeneous, wf, wg);
            p.params = {{"c1", c1}, {"c3", c3}};
            break;
        }
    }
    p.consts.validate();
    return p;
}

IntegrandPair quadratic_counterexample(int dim) {
    LibraryParams prm;
    prm.dim = dim;
    IntegrandPair p = make_library_integrand(LibraryName::homogeneous_norm, prm);
    p.name = "quadratic_counterexample";
    p.f.eval = [](const Vec&, const SymMatrix& A) { return A.norm() * A.norm(); };
    p.f.profile = Profile::generic;
    // lower bound |A|² >= |A| − 1/2 holds, so only the linear upper bound fails
    p.consts.c1 = 1.0;
    p.consts.c2 = 0.5;
    p.consts.c3 = 1.0;
    p.consts.c4 = 0.0;
    return p;
}

}  // namespace bdhomog
