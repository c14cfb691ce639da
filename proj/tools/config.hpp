#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bdhomog/integrands.hpp"
#include "bdhomog/io.hpp"
#include "bdhomog/random_field.hpp"
#include "bdhomog/solver.hpp"

namespace bdhomog::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"verify-integrand", "cell-bulk", "cell-surf", "scaling-check",
                                                "gj-identity",      "gamma",     "stoch",     "oracle1d"};
    return names;
}

struct IntegrandSpec {
    std::string name = "homogeneous_norm";
    int dim = 2;
    double a_soft = 1.0;
    double a_hard = 2.0;
    int direction = 0;
    double c1 = 1.0;
    double c3 = 2.0;
    /// random_checkerboard (and the stoch experiment).
    MarkLaw law;
    std::uint64_t field_seed = 1;
};

struct Config {
    std::string experiment;
    std::uint64_t seed = 0;
    IntegrandSpec integrand;

    std::optional<SymMatrix> A;
    std::optional<Vec> zeta;
    std::optional<Vec> nu;
    std::vector<std::pair<Vec, Vec>> samples;
    Vec x_anchor;
    Vec center;

    std::vector<double> r{4.0, 8.0, 16.0};
    std::vector<double> eps{0.5, 0.25};
    std::vector<double> limit_r{4.0, 8.0, 16.0};
    double h = 0.125;
    double rho = 1.0;
    double side = 1.0;
    double tolerance = 0.05;
    /// scaling-check: "bulk" or "surface".
    std::string scaling_mode = "bulk";

    SolveOptions solver;

    /// stoch: "ergodic" or "subadditive".
    std::string stoch_mode = "ergodic";
    int n_seeds = 16;
    bool surface = false;
    int triples = 20;
    int max_side = 3;
    double stoch_h = 0.25;

    std::string profile = "laminate";
    double oracle_A = 1.0;
    double oracle_L = 1.0;
    std::vector<double> oracle_h{0.125, 0.0625, 0.03125, 0.015625};

    int n_random = 1000;
    std::uint64_t plan_seed = 20240917;

    std::string prefix;
    bool svg = true;

    /// Every resolved value, defaults included.
    json to_json() const;
};

/// Parses and validates a TOML document for `subcommand`. Unknown keys,
/// wrong types, dimension mismatches and missing required values throw
/// ConfigError.
Config parse_config(const std::string& toml_text, const std::string& subcommand);

/// The integrand pair named by the config.
IntegrandPair build_pair(const Config& c);

}  // namespace bdhomog::cli
