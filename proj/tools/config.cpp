#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "toml.hpp"

namespace bdhomog::cli {
namespace {

/// Typed access to one TOML table; unknown keys are rejected on construction.
class Reader {
public:
    Reader(const toml::table* t, std::string path, std::set<std::string> allowed) : t_(t), path_(std::move(path)) {
        if (!t_) return;
        for (const auto& [k, v] : *t_) {
            const std::string key(k.str());
            if (!allowed.count(key)) throw ConfigError("unknown key '" + where(key) + "'");
        }
    }

    bool has(const std::string& key) const { return t_ && t_->contains(key); }

    const toml::table* table(const std::string& key) const {
        if (!has(key)) return nullptr;
        const toml::table* sub = (*t_)[key].as_table();
        if (!sub) throw ConfigError("'" + where(key) + "' must be a table");
        return sub;
    }

    double number(const std::string& key, double def) const {
        if (!has(key)) return def;
        return as_number(*t_->get(key), key);
    }

    double positive(const std::string& key, double def) const {
        const double v = number(key, def);
        if (!(v > 0.0)) throw ConfigError("'" + where(key) + "' must be positive");
        return v;
    }

    std::int64_t integer(const std::string& key, std::int64_t def) const {
        if (!has(key)) return def;
        const auto v = (*t_)[key].value<std::int64_t>();
        if (!v || !(*t_)[key].is_integer()) throw ConfigError("'" + where(key) + "' must be an integer");
        return *v;
    }

    bool flag(const std::string& key, bool def) const {
        if (!has(key)) return def;
        if (!(*t_)[key].is_boolean()) throw ConfigError("'" + where(key) + "' must be a boolean");
        return *(*t_)[key].value<bool>();
    }

    std::string string(const std::string& key, const std::string& def) const {
        if (!has(key)) return def;
        if (!(*t_)[key].is_string()) throw ConfigError("'" + where(key) + "' must be a string");
        return *(*t_)[key].value<std::string>();
    }

    std::vector<double> list(const std::string& key, const std::vector<double>& def) const {
        if (!has(key)) return def;
        return numbers(*t_->get(key), key);
    }

    Vec vec(const std::string& key, int dim) const { return to_vec(*t_->get(key), key, dim); }

    SymMatrix matrix(const std::string& key, int dim) const {
        const toml::array* rows = (*t_)[key].as_array();
        if (!rows || static_cast<int>(rows->size()) != dim)
            throw ConfigError("'" + where(key) + "' must be a " + std::to_string(dim) + "x" + std::to_string(dim) +
                              " array");
        std::vector<std::vector<double>> m;
        for (const auto& row : *rows) {
            m.push_back(numbers(row, key));
            if (static_cast<int>(m.back().size()) != dim) throw ConfigError("'" + where(key) + "' has a ragged row");
        }
        SymMatrix A(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) {
                const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
                if (m[ui][uj] != m[uj][ui]) throw ConfigError("'" + where(key) + "' must be symmetric");
                A.set(i, j, m[ui][uj]);
            }
        return A;
    }

    std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    double as_number(const toml::node& n, const std::string& key) const {
        if (!n.is_number()) throw ConfigError("'" + where(key) + "' must be a number");
        const double v = *n.value<double>();
        if (!std::isfinite(v)) throw ConfigError("'" + where(key) + "' must be finite");
        return v;
    }

    std::vector<double> numbers(const toml::node& n, const std::string& key) const {
        const toml::array* a = n.as_array();
        if (!a) throw ConfigError("'" + where(key) + "' must be an array of numbers");
        std::vector<double> out;
        for (const auto& e : *a) out.push_back(as_number(e, key));
        return out;
    }

    Vec to_vec(const toml::node& n, const std::string& key, int dim) const {
        const std::vector<double> xs = numbers(n, key);
        if (static_cast<int>(xs.size()) != dim)
            throw ConfigError("'" + where(key) + "' must have " + std::to_string(dim) + " entries");
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = xs[static_cast<std::size_t>(i)];
        return v;
    }

private:
    const toml::table* t_;
    std::string path_;
};

Vec unit_normal(const Vec& nu, const std::string& where) {
    const double n = nu.norm();
    if (std::abs(n - 1.0) > 1e-9) throw ConfigError("'" + where + "' must be a unit vector");
    return nu / n;
}

void require_increasing(const std::vector<double>& xs, const std::string& where) {
    if (xs.empty()) throw ConfigError("'" + where + "' must not be empty");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0)) throw ConfigError("'" + where + "' entries must be positive");
        if (i && !(xs[i] > xs[i - 1])) throw ConfigError("'" + where + "' must be increasing");
    }
}

void require_decreasing(const std::vector<double>& xs, const std::string& where) {
    if (xs.empty()) throw ConfigError("'" + where + "' must not be empty");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0)) throw ConfigError("'" + where + "' entries must be positive");
        if (i && !(xs[i] < xs[i - 1])) throw ConfigError("'" + where + "' must be decreasing");
    }
}

json vec_json(const std::vector<double>& xs) { return json(xs); }

}  // namespace

Config parse_config(const std::string& text, const std::string& subcommand) {
    if (std::find(experiment_names().begin(), experiment_names().end(), subcommand) == experiment_names().end())
        throw ConfigError("unknown experiment '" + subcommand + "'");
    toml::table root;
    try {
        root = toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << "malformed TOML: " << e.description() << " at line " << e.source().begin.line;
        throw ConfigError(os.str());
    }

    Config c;
    const Reader top(&root, "",
                     {"experiment", "seed", "integrand", "datum", "schedule", "solver", "stoch", "oracle", "verify",
                      "output"});
    c.experiment = top.string("experiment", subcommand);
    if (c.experiment != subcommand)
        throw ConfigError("config is for experiment '" + c.experiment + "', not '" + subcommand + "'");
    const std::int64_t seed = top.integer("seed", 0);
    if (seed < 0) throw ConfigError("'seed' must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);

    const Reader ig(top.table("integrand"), "integrand",
                    {"name", "dim", "a_soft", "a_hard", "direction", "c1", "c3", "law", "field_seed"});
    IntegrandSpec& is = c.integrand;
    is.name = ig.string("name", is.name);
    is.dim = static_cast<int>(ig.integer("dim", subcommand == "oracle1d" ? 1 : is.dim));
    if (is.dim < 1 || is.dim > 3) throw ConfigError("'integrand.dim' must be 1, 2 or 3");
    is.a_soft = ig.positive("a_soft", is.a_soft);
    is.a_hard = ig.positive("a_hard", is.a_hard);
    is.direction = static_cast<int>(ig.integer("direction", is.direction));
    if (is.direction < 0 || is.direction >= is.dim) throw ConfigError("'integrand.direction' out of range");
    is.c1 = ig.positive("c1", is.c1);
    is.c3 = ig.positive("c3", is.c3);
    const std::int64_t fs = ig.integer("field_seed", 1);
    if (fs < 0) throw ConfigError("'integrand.field_seed' must be non-negative");
    is.field_seed = static_cast<std::uint64_t>(fs);
    {
        const Reader law(ig.table("law"), "integrand.law", {"kind", "p", "a_soft", "a_hard", "a_min", "a_max"});
        const std::string kind = law.string("kind", "bernoulli");
        if (kind != "bernoulli" && kind != "uniform" && kind != "periodic")
            throw ConfigError("'integrand.law.kind' must be bernoulli, uniform or periodic");
        try {
            if (kind == "bernoulli")
                is.law = MarkLaw::bernoulli(law.number("p", 0.5), law.number("a_soft", 1.0), law.number("a_hard", 2.0));
            else if (kind == "uniform")
                is.law = MarkLaw::uniform(law.number("a_min", 1.0), law.number("a_max", 2.0));
            else
                is.law = MarkLaw::periodic(law.number("a_soft", 1.0), law.number("a_hard", 2.0));
            is.law.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("integrand.law: ") + e.what());
        }
    }
    if (subcommand != "oracle1d") {
        try {
            parse_library_name(is.name);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("integrand.name: ") + e.what());
        }
    }
    const int d = is.dim;

    const Reader dt(top.table("datum"), "datum", {"A", "zeta", "nu", "samples", "x_anchor", "center"});
    if (dt.has("A")) c.A = dt.matrix("A", d);
    if (dt.has("zeta") != dt.has("nu")) throw ConfigError("'datum.zeta' and 'datum.nu' come together");
    if (dt.has("zeta")) {
        c.zeta = dt.vec("zeta", d);
        c.nu = unit_normal(dt.vec("nu", d), "datum.nu");
    }
    if (dt.has("samples")) {
        const toml::table* dtab = root["datum"].as_table();
        const toml::array* arr = (*dtab)["samples"].as_array();
        if (!arr) throw ConfigError("'datum.samples' must be an array of tables");
        for (const auto& e : *arr) {
            const Reader s(e.as_table(), "datum.samples", {"zeta", "nu"});
            if (!e.is_table() || !s.has("zeta") || !s.has("nu"))
                throw ConfigError("'datum.samples' entries need zeta and nu");
            c.samples.emplace_back(s.vec("zeta", d), unit_normal(s.vec("nu", d), "datum.samples.nu"));
        }
    }
    c.x_anchor = dt.has("x_anchor") ? dt.vec("x_anchor", d) : Vec(d);
    c.center = dt.has("center") ? dt.vec("center", d) : Vec(d);

    const Reader sc(top.table("schedule"), "schedule",
                    {"r", "eps", "limit_r", "h", "rho", "side", "tolerance", "mode"});
    c.r = sc.list("r", c.r);
    c.eps = sc.list("eps", c.eps);
    c.limit_r = sc.list("limit_r", c.limit_r);
    c.h = sc.positive("h", c.h);
    c.rho = sc.positive("rho", c.rho);
    c.side = sc.positive("side", c.side);
    c.tolerance = sc.positive("tolerance", c.tolerance);
    c.scaling_mode = sc.string("mode", c.scaling_mode);
    require_increasing(c.r, "schedule.r");
    require_increasing(c.limit_r, "schedule.limit_r");
    require_decreasing(c.eps, "schedule.eps");
    for (double e : c.eps)
        if (e > 1.0) throw ConfigError("'schedule.eps' entries must lie in (0, 1]");
    if (c.scaling_mode != "bulk" && c.scaling_mode != "surface")
        throw ConfigError("'schedule.mode' must be bulk or surface");

    const Reader so(top.table("solver"), "solver",
                    {"gnc_schedule", "max_sweeps", "tol_energy", "multistart", "multilevel", "convex",
                     "convex_max_iters", "convex_tol", "polish_sweeps"});
    SolveOptions& o = c.solver;
    o.gnc_schedule = so.list("gnc_schedule", o.gnc_schedule);
    o.max_sweeps = static_cast<int>(so.integer("max_sweeps", o.max_sweeps));
    o.tol_energy = so.number("tol_energy", o.tol_energy);
    o.multistart = static_cast<int>(so.integer("multistart", o.multistart));
    o.multilevel = so.flag("multilevel", o.multilevel);
    o.convex = so.flag("convex", o.convex);
    o.convex_max_iters = static_cast<int>(so.integer("convex_max_iters", o.convex_max_iters));
    o.convex_tol = so.number("convex_tol", o.convex_tol);
    o.polish_sweeps = static_cast<int>(so.integer("polish_sweeps", o.polish_sweeps));
    o.seed = c.seed;
    try {
        o.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("solver: ") + e.what());
    }

    const Reader st(top.table("stoch"), "stoch", {"mode", "seeds", "surface", "triples", "max_side", "h"});
    c.stoch_mode = st.string("mode", c.stoch_mode);
    if (c.stoch_mode != "ergodic" && c.stoch_mode != "subadditive")
        throw ConfigError("'stoch.mode' must be ergodic or subadditive");
    c.n_seeds = static_cast<int>(st.integer("seeds", c.n_seeds));
    c.surface = st.flag("surface", c.surface);
    c.triples = static_cast<int>(st.integer("triples", c.triples));
    c.max_side = static_cast<int>(st.integer("max_side", c.max_side));
    c.stoch_h = st.positive("h", c.stoch_h);
    if (c.n_seeds < 8) throw ConfigError("'stoch.seeds' must be at least 8");
    if (c.triples < 1) throw ConfigError("'stoch.triples' must be positive");
    if (c.max_side < 2) throw ConfigError("'stoch.max_side' must be at least 2");

    const Reader orc(top.table("oracle"), "oracle", {"profile", "A", "L", "h"});
    c.profile = orc.string("profile", c.profile);
    c.oracle_A = orc.number("A", c.oracle_A);
    c.oracle_L = orc.positive("L", c.oracle_L);
    c.oracle_h = orc.list("h", c.oracle_h);
    require_decreasing(c.oracle_h, "oracle.h");

    const Reader vf(top.table("verify"), "verify", {"n_random", "plan_seed"});
    c.n_random = static_cast<int>(vf.integer("n_random", c.n_random));
    if (c.n_random < 0) throw ConfigError("'verify.n_random' must be non-negative");
    const std::int64_t ps = vf.integer("plan_seed", static_cast<std::int64_t>(c.plan_seed));
    if (ps < 0) throw ConfigError("'verify.plan_seed' must be non-negative");
    c.plan_seed = static_cast<std::uint64_t>(ps);

    const Reader out(top.table("output"), "output", {"prefix", "svg"});
    c.prefix = out.string("prefix", subcommand);
    c.svg = out.flag("svg", c.svg);
    if (c.prefix.empty() || c.prefix.find('/') != std::string::npos)
        throw ConfigError("'output.prefix' must be a plain file name");

    // per-experiment requirements
    const bool jump = c.zeta.has_value();
    if (subcommand == "cell-bulk" && !c.A) throw ConfigError("cell-bulk needs datum.A");
    if (subcommand == "cell-surf" && !jump) throw ConfigError("cell-surf needs datum.zeta and datum.nu");
    if (subcommand == "scaling-check") {
        if (c.scaling_mode == "bulk" && !c.A) throw ConfigError("scaling-check (bulk) needs datum.A");
        if (c.scaling_mode == "surface" && !jump) throw ConfigError("scaling-check (surface) needs datum.zeta/nu");
    }
    if (subcommand == "gj-identity" && c.samples.empty()) {
        if (!jump) throw ConfigError("gj-identity needs datum.samples or datum.zeta/nu");
        c.samples.emplace_back(*c.zeta, *c.nu);
    }
    if (subcommand == "gamma" && !c.A && !jump) throw ConfigError("gamma needs datum.A or datum.zeta/nu");
    if (subcommand == "stoch" && c.stoch_mode == "ergodic") {
        if (c.surface && !jump) throw ConfigError("stoch (surface) needs datum.zeta/nu");
        if (!c.surface && !c.A) throw ConfigError("stoch (bulk) needs datum.A");
    }
    if (subcommand == "stoch" && c.stoch_mode == "subadditive" && !(std::fmod(0.5, c.stoch_h) == 0.0))
        throw ConfigError("'stoch.h' must divide 1/2");
    return c;
}

json Config::to_json() const {
    json j;
    j["experiment"] = experiment;
    j["seed"] = seed;
    j["integrand"] = {{"name", integrand.name},
                      {"dim", integrand.dim},
                      {"a_soft", integrand.a_soft},
                      {"a_hard", integrand.a_hard},
                      {"direction", integrand.direction},
                      {"c1", integrand.c1},
                      {"c3", integrand.c3},
                      {"law", integrand.law.describe()},
                      {"field_seed", integrand.field_seed}};
    json d;
    if (A) d["A"] = bdhomog::to_json(*A);
    if (zeta) d["zeta"] = bdhomog::to_json(*zeta);
    if (nu) d["nu"] = bdhomog::to_json(*nu);
    json s = json::array();
    for (const auto& [z, n] : samples) s.push_back({{"zeta", bdhomog::to_json(z)}, {"nu", bdhomog::to_json(n)}});
    d["samples"] = s;
    d["x_anchor"] = bdhomog::to_json(x_anchor);
    d["center"] = bdhomog::to_json(center);
    j["datum"] = d;
    j["schedule"] = {{"r", vec_json(r)},       {"eps", vec_json(eps)}, {"limit_r", vec_json(limit_r)},
                     {"h", h},                 {"rho", rho},           {"side", side},
                     {"tolerance", tolerance}, {"mode", scaling_mode}};
    j["solver"] = {{"gnc_schedule", vec_json(solver.gnc_schedule)},
                   {"max_sweeps", solver.max_sweeps},
                   {"tol_energy", solver.tol_energy},
                   {"multistart", solver.multistart},
                   {"multilevel", solver.multilevel},
                   {"convex", solver.convex},
                   {"convex_max_iters", solver.convex_max_iters},
                   {"convex_tol", solver.convex_tol},
                   {"polish_sweeps", solver.polish_sweeps},
                   {"seed", solver.seed}};
    j["stoch"] = {{"mode", stoch_mode}, {"seeds", n_seeds},     {"surface", surface},
                  {"triples", triples}, {"max_side", max_side}, {"h", stoch_h}};
    j["oracle"] = {{"profile", profile}, {"A", oracle_A}, {"L", oracle_L}, {"h", vec_json(oracle_h)}};
    j["verify"] = {{"n_random", n_random}, {"plan_seed", plan_seed}};
    j["output"] = {{"prefix", prefix}, {"svg", svg}};
    return j;
}

IntegrandPair build_pair(const Config& c) {
    const IntegrandSpec& is = c.integrand;
    LibraryParams p;
    p.dim = is.dim;
    p.a_soft = is.a_soft;
    p.a_hard = is.a_hard;
    p.direction = is.direction;
    p.c1 = is.c1;
    p.c3 = is.c3;
    const LibraryName name = parse_library_name(is.name);
    if (name == LibraryName::random_checkerboard) p.field = RandomField(is.field_seed, is.law, is.dim);
    return make_library_integrand(name, p);
}

}  // namespace bdhomog::cli
