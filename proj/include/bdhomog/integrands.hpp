#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bdhomog/io.hpp"
#include "bdhomog/random_field.hpp"
#include "bdhomog/tensor.hpp"

namespace bdhomog {

/// Constants c1..c7, α and the slope σ1 of the linear modulus σ(τ) = σ1·τ.
struct StructuralConstants {
    double c1 = 1.0;
    double c2 = 0.0;
    double c3 = 1.0;
    double c4 = 0.0;
    double c5 = 1.0;
    double c6 = 0.0;
    double c7 = 0.0;
    double alpha = 0.5;
    double sigma1 = 1.0;

    /// Throws std::invalid_argument unless 0 < c1 <= c3, α in (0,1) and the
    /// remaining constants are non-negative.
    void validate() const;
};

enum class Periodicity { homogeneous, periodic, stationary_random };

using BulkFn = std::function<double(const Vec& x, const SymMatrix& A)>;
using SurfaceFn = std::function<double(const Vec& x, const Vec& zeta, const Vec& nu)>;
using WeightFn = std::function<double(const Vec& x)>;

/// Radial shapes Φ with f(x,A) = w(x)·Φ(|A|) and f^∞(x,A) = w(x)|A|.
enum class Profile {
    generic,  ///< no radial structure declared
    linear,   ///< Φ(s) = s
    smooth    ///< Φ(s) = sqrt(1+s^2) - 1
};

double profile_value(Profile p, double s);
/// Right derivative Φ'(s+).
double profile_slope(Profile p, double s);

struct BulkIntegrand {
    BulkFn eval;
    BulkFn recession;
    /// Radial structure; `weight` is set whenever profile != generic.
    Profile profile = Profile::generic;
    WeightFn weight;
};

struct SurfaceIntegrand {
    SurfaceFn eval;
    SurfaceFn recession;
    /// Optional closed form of inf{ g(x,ζ,ν) : ζ⊙ν = B } for decomposable B.
    BulkFn rank_one_inf;
    /// Same for g^∞.
    BulkFn recession_rank_one_inf;
    /// Set when g(x,ζ,ν) = w(x)|ζ⊙ν|.
    WeightFn norm_weight;
};

struct IntegrandPair {
    std::string name;
    int dim = 2;
    StructuralConstants consts;
    Periodicity periodicity = Periodicity::homogeneous;
    BulkIntegrand f;
    SurfaceIntegrand g;
    /// Backing coefficient field for stationary_random pairs.
    std::optional<RandomField> field;
    /// Library parameters, kept for reports.
    std::map<std::string, double> params;

    double eval_f(const Vec& x, const SymMatrix& A) const { return f.eval(x, A); }
    double eval_g(const Vec& x, const Vec& zeta, const Vec& nu) const { return g.eval(x, zeta, nu); }

    /// inf{ g(x,ζ,ν) : ζ⊙ν = B } when B is decomposable, f^∞(x,B) otherwise.
    double g_hat(const Vec& x, const SymMatrix& B) const;

    /// True when f = w_f Φ(|A|) and g = w_g |ζ⊙ν|.
    bool radial() const { return f.profile != Profile::generic && static_cast<bool>(g.norm_weight); }

    /// (f^∞, g^∞) as a pair with the same constants.
    IntegrandPair recession_pair() const;
};

/// (f_ε, g_ε) with f_ε(x,A) = f(x/ε, A) and g_ε(x,ζ,ν) = ε g(x/ε, ζ/ε, ν).
IntegrandPair rescale_pair(const IntegrandPair& p, double eps);

// ---------------------------------------------------------------- estimates

struct RateReport {
    double value = 0.0;
    std::vector<double> t_grid;
    std::vector<double> deviations;
    std::vector<double> bounds;
    bool violation = false;
};

/// {1, 10, ..., t_max}.
std::vector<double> default_t_grid(double t_max = 1e6);

/// f(x, t_max A)/t_max with deviations checked against C_A / t^α.
RateReport recession_estimate(const IntegrandPair& p, const Vec& x, const SymMatrix& A,
                              const std::vector<double>& t_grid);

/// g(x, t_max ζ, ν)/t_max with deviations checked against 2 c3 c7 |ζ⊙ν| / t.
RateReport g_infinity_estimate(const IntegrandPair& p, const Vec& x, const Vec& zeta, const Vec& nu,
                               const std::vector<double>& t_grid);

// ---------------------------------------------------------------- validation

/// Sample i is (xs[i], As[i], A2s[i], zetas[i], zeta2s[i], nus[i]); the
/// (s, t) grid is applied to every sample.
struct SamplePlan {
    std::vector<Vec> xs;
    std::vector<SymMatrix> As;
    std::vector<SymMatrix> A2s;
    std::vector<Vec> zetas;
    std::vector<Vec> zeta2s;
    std::vector<Vec> nus;
    std::vector<double> s_values;
    std::vector<double> t_values;

    std::size_t size() const { return xs.size(); }
    /// Throws std::invalid_argument on ragged lists or non-unit normals.
    void validate(int dim) const;

    /// Deterministic plan: hand-picked samples (|A| = 0, 0.5, 1, 2, 10 first)
    /// followed by `n_random` pseudo-random samples drawn from `seed`, with
    /// s, t in {0.5, 1, 2, 10, 100}.
    static SamplePlan standard(int dim, int n_random = 1000, std::uint64_t seed = 20240917);
};

struct ConditionResult {
    std::string name;
    bool pass = true;
    std::size_t checked = 0;
    double worst_excess = 0.0;
    std::string worst_sample;
    std::string first_failure;
};

struct IntegrandReport {
    std::string pair_name;
    std::vector<ConditionResult> conditions;
    bool all_pass() const;
    const ConditionResult* find(const std::string& name) const;
    std::vector<std::string> failed() const;
    json to_json() const;
};

/// Evaluates (f2), (f3), (f4), the recession bounds, (g2), (g3), (g4), (g5)
/// and 1-homogeneity of g^∞ on every sample of the plan. Inequalities are
/// checked as stated up to a relative rounding slack of 1e-12.
IntegrandReport check_integrand(const IntegrandPair& p, const SamplePlan& plan);

// ---------------------------------------------------------------- library

enum class LibraryName {
    homogeneous_norm,
    smooth_nonhomogeneous,
    laminate,
    checkerboard,
    random_checkerboard,
    hyperplane_weak_surface
};

struct LibraryParams {
    int dim = 2;
    double a_soft = 1.0;
    double a_hard = 2.0;
    int direction = 0;  ///< laminate normal axis
    double c1 = 1.0;    ///< hyperplane_weak_surface
    double c3 = 2.0;    ///< hyperplane_weak_surface
    std::optional<RandomField> field;  ///< random_checkerboard
};

LibraryName parse_library_name(const std::string& s);
std::string to_string(LibraryName n);

IntegrandPair make_library_integrand(LibraryName name, const LibraryParams& params);

/// f(A) = |A|^2 declared with c3 = 1, c4 = 0; fails the growth half of (f2).
IntegrandPair quadratic_counterexample(int dim);

/// Laminate weight: a_soft on the half-period centred at integers.
double laminate_weight(double xk, double a_soft, double a_hard);
/// Checkerboard weight: a_soft on unit cells z with Σ z even (cells centred at z).
double checkerboard_weight(const Vec& x, double a_soft, double a_hard);

}  // namespace bdhomog
