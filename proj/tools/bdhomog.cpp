#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bdhomog/cell_formulas.hpp"
#include "bdhomog/oracle1d.hpp"
#include "bdhomog/parallel.hpp"
#include "bdhomog/stochastic.hpp"
#include "config.hpp"

using namespace bdhomog;
using bdhomog::cli::Config;
using bdhomog::cli::ConfigError;

namespace {

struct Artifacts {
    json result;
    std::string csv;
    std::string svg;
    bool ok = true;
};

std::string vec_cell(const Vec& v) {
    std::ostringstream os;
    os << '"';
    for (int i = 0; i < v.dim(); ++i) os << (i ? ";" : "") << csv_number(v[i]);
    os << '"';
    return os.str();
}

bool within(double v, double lo, double hi) {
    const double slack = 1e-9 * std::max(1.0, std::abs(hi));
    return v >= lo - slack && v <= hi + slack;
}

Artifacts verify_integrand(const Config& c) {
    const IntegrandPair pair = cli::build_pair(c);
    const IntegrandReport rep = check_integrand(pair, SamplePlan::standard(c.integrand.dim, c.n_random, c.plan_seed));
    Artifacts a;
    a.result = rep.to_json();
    std::ostringstream os;
    os << "condition,pass,checked,worst_excess\n";
    for (const auto& cr : rep.conditions)
        os << cr.name << ',' << (cr.pass ? 1 : 0) << ',' << cr.checked << ',' << csv_number(cr.worst_excess) << '\n';
    a.csv = os.str();
    a.ok = rep.all_pass();
    return a;
}

Artifacts cell_bulk(const Config& c) {
    const IntegrandPair pair = cli::build_pair(c);
    const ConvergenceRecord rec = estimate_f_lim(pair, *c.A, c.r, c.x_anchor, c.h, c.solver);
    const StructuralConstants& k = pair.consts;
    const double lo = k.c1 * c.A->norm() - k.c2, hi = k.c3 * c.A->norm() + k.c4;
    Artifacts a;
    a.result = rec.to_json();
    a.result["bounds"] = {lo, hi};
    for (double v : rec.normalized_values) a.ok = a.ok && within(v, lo, hi);
    a.result["bounds_ok"] = a.ok;
    a.csv = rec.to_csv();
    a.svg = rec.to_svg();
    return a;
}

Artifacts cell_surf(const Config& c) {
    const IntegrandPair pair = cli::build_pair(c);
    const ConvergenceRecord rec = estimate_g_lim(pair, *c.zeta, *c.nu, c.r, c.x_anchor, c.h, c.solver);
    const double zn = sym_tensor(*c.zeta, *c.nu).norm();
    Artifacts a;
    a.result = rec.to_json();
    json bands = json::array();
    for (std::size_t i = 0; i < rec.r_values.size(); ++i) {
        const double band = 5.0 * rec.h_values[i] / rec.r_values[i];
        const double lo = pair.consts.c1 * zn * (1.0 - band), hi = pair.consts.c3 * zn * (1.0 + band);
        bands.push_back({lo, hi});
        a.ok = a.ok && within(rec.normalized_values[i], lo, hi);
    }
    a.result["bounds"] = bands;
    a.result["bounds_ok"] = a.ok;
    a.csv = rec.to_csv();
    a.svg = rec.to_svg();
    return a;
}

Artifacts scaling_check(const Config& c, int threads) {
    const IntegrandPair pair = cli::build_pair(c);
    std::vector<ScalingReport> reps(c.eps.size());
    parallel_for(c.eps.size(), threads, [&](std::size_t i) {
        reps[i] = c.scaling_mode == "bulk"
                      ? check_scaling_identity(pair, *c.A, c.eps[i], c.center, c.rho, c.h, c.solver)
                      : check_surface_scaling(pair, *c.zeta, *c.nu, c.eps[i], c.center, c.rho, c.h, c.solver);
    });
    Artifacts a;
    json rows = json::array();
    std::ostringstream os;
    os << "eps,rho,lhs,rhs,difference,relative_gap,bound,pass\n";
    bool monotone = true;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const ScalingReport& r = reps[i];
        rows.push_back(r.to_json());
        os << csv_number(r.eps) << ',' << csv_number(r.rho) << ',' << csv_number(r.lhs) << ',' << csv_number(r.rhs)
           << ',' << csv_number(r.difference) << ',' << csv_number(r.relative_gap) << ',' << csv_number(r.bound)
           << ',' << (r.pass ? 1 : 0) << '\n';
        a.ok = a.ok && r.pass;
        if (i && std::abs(r.difference) > std::abs(reps[i - 1].difference)) monotone = false;
    }
    a.result["mode"] = c.scaling_mode;
    a.result["reports"] = rows;
    a.result["difference_non_increasing"] = monotone;
    a.csv = os.str();
    return a;
}

Artifacts gj_identity(const Config& c) {
    const IntegrandPair pair = cli::build_pair(c);
    const GJReport rep = check_gj_identity(pair, c.samples, c.r, c.x_anchor, c.h, c.solver, c.tolerance);
    Artifacts a;
    a.result = rep.to_json();
    std::ostringstream os;
    os << "zeta,nu,g_lim,f_inf_lim,gap\n";
    for (const GJSample& s : rep.samples)
        os << vec_cell(s.zeta) << ',' << vec_cell(s.nu) << ',' << csv_number(s.g_lim) << ','
           << csv_number(s.f_inf_lim) << ',' << csv_number(s.gap) << '\n';
    a.csv = os.str();
    a.ok = rep.pass;
    return a;
}

Artifacts gamma(const Config& c) {
    const IntegrandPair pair = cli::build_pair(c);
    const GammaReport rep =
        c.A ? gamma_minima_check(pair, c.eps, c.center, c.side, *c.A, c.limit_r, c.h, c.solver, c.tolerance)
            : gamma_minima_check_jump(pair, c.eps, c.center, c.side, *c.zeta, *c.nu, c.limit_r, c.h, c.solver,
                                      c.tolerance);
    Artifacts a;
    a.result = rep.to_json();
    std::ostringstream os;
    os << "eps,h,minimum,relative_gap\n";
    for (std::size_t i = 0; i < rep.eps.size(); ++i)
        os << csv_number(rep.eps[i]) << ',' << csv_number(rep.h_values[i]) << ',' << csv_number(rep.minima[i]) << ','
           << csv_number(rep.relative_gaps[i]) << '\n';
    a.csv = os.str();
    a.svg = rep.limit_record.to_svg();
    a.ok = rep.pass;
    return a;
}

Artifacts stoch(const Config& c, int threads) {
    const MarkLaw& law = c.integrand.law;
    Artifacts a;
    if (c.stoch_mode == "ergodic") {
        ErgodicTarget target;
        target.surface = c.surface;
        if (c.surface) {
            target.zeta = *c.zeta;
            target.nu = *c.nu;
        } else {
            target.A = *c.A;
        }
        const ErgodicReport rep =
            ergodic_average(law, target, c.r, seed_range(c.seed, c.n_seeds), c.x_anchor, c.h, c.solver, threads);
        a.result = rep.to_json();
        a.csv = rep.to_csv();
        a.ok = rep.bounds_ok && rep.trend_ok;
        return a;
    }
    const std::vector<SubadditiveTriple> ts = random_triples(c.seed, c.triples, c.integrand.dim, c.max_side);
    std::vector<TripleOutcome> outs(ts.size());
    parallel_for(ts.size(), threads, [&](std::size_t i) { outs[i] = run_triple(law, ts[i], c.stoch_h, c.solver); });
    json rows = json::array();
    std::ostringstream os;
    os << "index,field_seed,whole,parts_sum,slack,allowed,covariance_gap,bound_ok,pass\n";
    for (std::size_t i = 0; i < outs.size(); ++i) {
        const TripleOutcome& o = outs[i];
        rows.push_back(o.to_json());
        os << i << ',' << o.triple.field_seed << ',' << csv_number(o.subadditivity.whole) << ','
           << csv_number(o.subadditivity.parts_sum) << ',' << csv_number(o.subadditivity.slack) << ','
           << csv_number(o.subadditivity.allowed) << ',' << csv_number(o.covariance.gap) << ','
           << (o.bound_ok ? 1 : 0) << ',' << (o.pass ? 1 : 0) << '\n';
        a.ok = a.ok && o.pass;
    }
    a.result["triples"] = rows;
    a.result["law"] = law.describe();
    a.csv = os.str();
    return a;
}

Artifacts oracle1d(const Config& c) {
    const OracleReport rep =
        validate_lattice_against_oracle(oracle_profile(c.profile), c.oracle_A, c.oracle_L, c.oracle_h, c.solver);
    Artifacts a;
    a.result = rep.to_json();
    a.csv = rep.to_csv();
    a.ok = rep.pass;
    return a;
}

Artifacts run(const Config& c, int threads) {
    const std::string& e = c.experiment;
    if (e == "verify-integrand") return verify_integrand(c);
    if (e == "cell-bulk") return cell_bulk(c);
    if (e == "cell-surf") return cell_surf(c);
    if (e == "scaling-check") return scaling_check(c, threads);
    if (e == "gj-identity") return gj_identity(c);
    if (e == "gamma") return gamma(c);
    if (e == "stoch") return stoch(c, threads);
    return oracle1d(c);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t parse_seed(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (s.empty() || s[0] == '-') throw std::invalid_argument(s);
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        throw ConfigError(what + " must be a non-negative integer, got '" + s + "'");
    }
    if (used != s.size()) throw ConfigError(what + " must be a non-negative integer, got '" + s + "'");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice experiments for BD homogenization cell formulas"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", seed_flag;
    int threads = 0;
    for (const std::string& name : cli::experiment_names()) {
        CLI::App* sub = app.add_subcommand(name, "Run the " + name + " experiment");
        sub->add_option("--config", config_path, "TOML experiment config")->required();
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--threads", threads, "Worker cap (default: logical cores)")->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", seed_flag, "Seed, overriding BDHOMOG_SEED and the config");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    const std::string experiment = app.get_subcommands().front()->get_name();

    Config cfg;
    try {
        cfg = cli::parse_config(read_file(config_path), experiment);
        std::optional<std::uint64_t> seed;
        if (const char* env = std::getenv("BDHOMOG_SEED")) seed = parse_seed(env, "BDHOMOG_SEED");
        if (!seed_flag.empty()) seed = parse_seed(seed_flag, "--seed");
        if (seed) cfg.seed = cfg.solver.seed = *seed;
    } catch (const ConfigError& e) {
        std::cerr << "bdhomog: " << e.what() << '\n';
        return 1;
    }

    Artifacts art;
    try {
        art = run(cfg, resolve_threads(threads));
    } catch (const std::invalid_argument& e) {
        std::cerr << "bdhomog: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "bdhomog: " << experiment << " failed: " << e.what() << '\n';
        return 1;
    }

    json doc;
    doc["version"] = kVersion;
    doc["experiment"] = experiment;
    doc["config"] = cfg.to_json();
    doc["all_pass"] = art.ok;
    doc["result"] = art.result;
    try {
        const std::filesystem::path base = std::filesystem::path(out_dir) / cfg.prefix;
        write_text_file(base.string() + ".json", dump_json(doc) + "\n");
        write_text_file(base.string() + ".csv", art.csv);
        if (cfg.svg && !art.svg.empty()) write_text_file(base.string() + ".svg", art.svg);
    } catch (const std::exception& e) {
        std::cerr << "bdhomog: cannot write outputs: " << e.what() << '\n';
        return 1;
    }
    if (!art.ok) {
        std::cerr << "bdhomog: " << experiment << " reported an invariant violation\n";
        return 2;
    }
    return 0;
}
