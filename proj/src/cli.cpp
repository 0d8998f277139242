#include "selfsim/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "selfsim/dlp.hpp"
#include "selfsim/error.hpp"
#include "selfsim/fbm.hpp"
#include "selfsim/fim.hpp"
#include "selfsim/validation.hpp"

namespace selfsim::cli {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void RunConfig::validate() const {
    if (!(h > 0.0 && h < 1.0)) throw ConfigError("Hurst exponent must lie in (0,1)");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("--t-max must be positive");
    if (steps < 1) throw ConfigError("--steps must be at least 1");
    if (paths < 1) throw ConfigError("--paths must be at least 1");
    if (floor && !(*floor >= 0.0)) throw ConfigError("--floor must be non-negative");
    if (!(var_b1 > 0.0)) throw ConfigError("--var-b1 must be positive");
    if (model == stats::Model::Fbm && fbm_method == stats::FbmMethod::Cholesky &&
        steps + 1 > fbm::kDefaultCholeskyCap) {
        throw ConfigError("--steps exceeds the Cholesky cap of " + std::to_string(fbm::kDefaultCholeskyCap - 1));
    }
}

namespace {

std::string_view to_string(stats::FbmMethod m) {
    return m == stats::FbmMethod::Cholesky ? "cholesky" : "circulant";
}

std::optional<double> resolved_floor(const RunConfig& c) {
    const double dt = c.t_max / static_cast<double>(c.steps);
    switch (c.model) {
    case stats::Model::Fim: return c.floor.value_or(fim::default_floor(HurstExponent(c.h), dt));
    case stats::Model::DlpMapped: return c.floor.value_or(dlp::default_floor(dt));
    case stats::Model::Fbm: return std::nullopt;
    }
    return std::nullopt;
}

stats::Ensemble simulate_ensemble(const RunConfig& c) {
    stats::EnsembleOptions opts;
    opts.fbm_method = c.fbm_method;
    opts.fbm_var_b1 = c.var_b1;
    opts.floor = c.floor;
    opts.bootstrap = c.bootstrap;
    return stats::generate_ensemble(c.model, HurstExponent(c.h), TimeGrid::uniform(c.t_max, c.steps), c.paths,
                                    c.seed, opts);
}

std::ofstream open_output(const std::filesystem::path& p) {
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file " + p.string());
    return out;
}

void write_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

} // namespace

json provenance(const RunConfig& c) {
    json scheme = nullptr;
    if (c.model != stats::Model::Fbm) {
        const auto fl = resolved_floor(c);
        scheme = {{"method", "euler_maruyama"},
                  {"dt", c.t_max / static_cast<double>(c.steps)},
                  {"floor", *fl},
                  {"bootstrap", c.bootstrap}};
    }
    json j{{"schema_version", kSchemaVersion},
           {"library_version", SELFSIM_VERSION},
           {"model", std::string(stats::to_string(c.model))},
           {"h", c.h},
           {"t_max", c.t_max},
           {"steps", c.steps},
           {"paths", c.paths},
           {"seed", c.seed},
           {"scheme", scheme},
           {"format", c.format == Format::Csv ? "csv" : "json"}};
    if (c.model == stats::Model::Fbm) {
        j["fbm_method"] = std::string(to_string(c.fbm_method));
        j["var_b1"] = c.var_b1;
    }
    if (c.model == stats::Model::DlpMapped) {
        j["coordinates"] = "fim (phi^-1 applied to the Langevin path)";
    }
    return j;
}

void write_simulation(const RunConfig& c, std::ostream& data, std::ostream& meta) {
    c.validate();
    const auto e = simulate_ensemble(c);
    if (c.format == Format::Csv) {
        data << "path_id,t,x\n";
        for (std::size_t i = 0; i < e.paths.size(); ++i) {
            const auto& path = e.paths[i];
            const std::string id = std::to_string(i);
            for (std::size_t k = 0; k < e.grid.size(); ++k) {
                data << id << ',' << format_double(e.grid[k]) << ',' << format_double(path.positions[k]) << '\n';
            }
        }
    } else {
        json j{{"schema_version", kSchemaVersion}, {"kind", "ensemble"}, {"provenance", provenance(c)}};
        j["times"] = std::vector<double>(e.grid.times().begin(), e.grid.times().end());
        auto& arr = j["paths"] = json::array();
        for (const auto& p : e.paths) arr.push_back(p.positions);
        data << j.dump() << '\n';
    }
    write_json(meta, provenance(c));
}

void cmd_simulate(const RunConfig& c) {
    if (c.out.empty()) throw ConfigError("--out is required");
    c.validate();
    auto data = open_output(c.out);
    auto meta = open_output(c.out + ".meta.json");
    write_simulation(c, data, meta);
    if (!data || !meta) throw std::runtime_error("write failed for " + c.out);
}

// ---------------------------------------------------------------------------
// analytic

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n == 1) return {a};
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

std::vector<double> t_values(const AnalyticConfig& c) {
    if (c.t_points == 1) return {c.t_max};
    const double lo = c.t_min > 0.0 ? c.t_min : c.t_max / static_cast<double>(c.t_points);
    return linspace(lo, c.t_max, c.t_points);
}

std::vector<double> h_values(const AnalyticConfig& c) {
    std::vector<double> v;
    for (std::size_t k = 1; k <= c.h_points; ++k) v.push_back(static_cast<double>(k) / static_cast<double>(c.h_points + 1));
    return v;
}

using Row = std::vector<double>;
using Emitter = std::function<void(const AnalyticConfig&, const std::function<void(const Row&)>&)>;

struct Quantity {
    std::string header;
    Emitter emit;
};

const std::map<std::string, Quantity>& quantity_table() {
    static const std::map<std::string, Quantity> table{
        {"density_fbm",
         {"t,x,value",
          [](const AnalyticConfig& c, const auto& row) {
              const fbm::Params p(HurstExponent(c.h), c.var_b1);
              for (double t : t_values(c))
                  for (double x : linspace(c.x_min, c.x_max, c.x_points)) row({t, x, fbm::density(p, t, x)});
          }}},
        {"density_fim",
         {"t,x,value",
          [](const AnalyticConfig& c, const auto& row) {
              const HurstExponent h(c.h);
              for (double t : t_values(c))
                  for (double x : linspace(c.x_min, c.x_max, c.x_points)) row({t, x, fim::density(h, t, x)});
          }}},
        {"cdf_fim",
         {"t,x,value",
          [](const AnalyticConfig& c, const auto& row) {
              const HurstExponent h(c.h);
              for (double t : t_values(c))
                  for (double x : linspace(c.x_min, c.x_max, c.x_points)) row({t, x, fim::cdf(h, t, x)});
          }}},
        {"cv_fbm",
         {"h,value",
          [](const AnalyticConfig& c, const auto& row) {
              for (double h : h_values(c)) row({h, fbm::cv_score()});
          }}},
        {"cv_fim",
         {"h,value",
          [](const AnalyticConfig& c, const auto& row) {
              for (double h : h_values(c)) row({h, fim::cv_score(HurstExponent(h))});
          }}},
        {"kl_fbm",
         {"t,value",
          [](const AnalyticConfig& c, const auto& row) {
              for (double t : t_values(c)) row({t, fbm::kl(HurstExponent(c.h), t)});
          }}},
        {"kl_fim",
         {"t,value",
          [](const AnalyticConfig& c, const auto& row) {
              for (double t : t_values(c)) row({t, fim::kl(HurstExponent(c.h), t)});
          }}},
        {"incvar_fbm",
         {"t,delta,value",
          [](const AnalyticConfig& c, const auto& row) {
              const fbm::Params p(HurstExponent(c.h), c.var_b1);
              for (double t : t_values(c)) row({t, c.delta, fbm::increment_variance(p, t, c.delta)});
          }}},
        {"incvar_fim",
         {"t,delta,value",
          [](const AnalyticConfig& c, const auto& row) {
              for (double t : t_values(c)) row({t, c.delta, fim::increment_variance(HurstExponent(c.h), t, c.delta)});
          }}},
        {"cov_fbm",
         {"t1,t2,value",
          [](const AnalyticConfig& c, const auto& row) {
              const fbm::Params p(HurstExponent(c.h), c.var_b1);
              const auto ts = t_values(c);
              for (double a : ts)
                  for (double b : ts) row({a, b, fbm::covariance(p, a, b)});
          }}},
        {"cov_fim",
         {"t1,t2,value",
          [](const AnalyticConfig& c, const auto& row) {
              const auto ts = t_values(c);
              for (double a : ts)
                  for (double b : ts) row({a, b, fim::position_covariance(HurstExponent(c.h), a, b)});
          }}},
        {"velcov_fbm",
         {"t1,t2,value",
          [](const AnalyticConfig& c, const auto& row) {
              const fbm::Params p(HurstExponent(c.h), c.var_b1);
              const auto ts = t_values(c);
              for (double a : ts)
                  for (double b : ts)
                      if (a != b) row({a, b, fbm::velocity_covariance(p, a, b)});
          }}},
        {"kernel_fbm",
         {"t,u,value",
          [](const AnalyticConfig& c, const auto& row) {
              const double t = c.t_max;
              if (!(c.u_min < t)) throw ConfigError("--u-min must be below --t-max");
              for (std::size_t k = 0; k < c.u_points; ++k) {
                  const double u = c.u_min + (t - c.u_min) * static_cast<double>(k) / static_cast<double>(c.u_points);
                  row({t, u, fbm::kernel(HurstExponent(c.h), t, u)});
              }
          }}},
        {"volatility_fim",
         {"x,value",
          [](const AnalyticConfig& c, const auto& row) {
              for (double x : linspace(c.x_min, c.x_max, c.x_points)) row({x, fim::volatility(HurstExponent(c.h), x)});
          }}},
        {"potential_dlp",
         {"x,value",
          [](const AnalyticConfig& c, const auto& row) {
              for (double x : linspace(c.x_min, c.x_max, c.x_points))
                  if (x != 0.0) row({x, dlp::potential(HurstExponent(c.h), x)});
          }}},
    };
    return table;
}

void validate_analytic(const AnalyticConfig& c) {
    if (!(c.h > 0.0 && c.h < 1.0)) throw ConfigError("Hurst exponent must lie in (0,1)");
    if (!(c.t_max > 0.0)) throw ConfigError("--t-max must be positive");
    if (c.t_points < 1 || c.x_points < 1 || c.h_points < 1 || c.u_points < 1) {
        throw ConfigError("grid point counts must be at least 1");
    }
    if (c.t_min < 0.0 || (c.t_points > 1 && c.t_min > c.t_max)) throw ConfigError("--t-min must lie in [0, t-max]");
    if (!(c.delta > 0.0)) throw ConfigError("--delta must be positive");
    if (!(c.var_b1 > 0.0)) throw ConfigError("--var-b1 must be positive");
}

std::string valid_quantity_list() {
    std::string s;
    for (const auto& q : analytic_quantities()) s += (s.empty() ? "" : ", ") + q;
    return s;
}

} // namespace

const std::vector<std::string>& analytic_quantities() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, q] : quantity_table()) v.push_back(name);
        return v;
    }();
    return names;
}

void write_analytic(const AnalyticConfig& c, const std::string& quantity, std::ostream& out) {
    validate_analytic(c);
    const auto& table = quantity_table();
    const auto it = table.find(quantity);
    if (it == table.end()) {
        throw ConfigError("unknown quantity '" + quantity + "'; valid names: " + valid_quantity_list());
    }
    out << it->second.header << '\n';
    it->second.emit(c, [&out](const Row& row) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    });
}

void cmd_analytic(const AnalyticConfig& c) {
    validate_analytic(c);
    for (const auto& q : c.quantities) {
        if (!quantity_table().contains(q)) {
            throw ConfigError("unknown quantity '" + q + "'; valid names: " + valid_quantity_list());
        }
    }
    for (const auto& q : c.quantities) {
        auto out = open_output(std::filesystem::path(c.out_dir) / (q + ".csv"));
        write_analytic(c, q, out);
    }
}

// ---------------------------------------------------------------------------
// compare

namespace {

std::string verdict(stats::Trend t) {
    switch (t) {
    case stats::Trend::Decreasing: return "lighter";
    case stats::Trend::Increasing: return "heavier";
    case stats::Trend::Constant: return "equal";
    case stats::Trend::Mixed: return "inconclusive";
    }
    return "inconclusive";
}

json property_battery(const stats::Ensemble& e, double t_max) {
    const double q = t_max / 4.0;
    const auto terminal = stats::values_at(e, t_max);
    const auto jb = stats::jarque_bera(terminal);
    const auto early = stats::increment_variance(e, {0.0, q});
    const auto late = stats::increment_variance(e, {3.0 * q, 4.0 * q});
    const double diff_se = std::hypot(early.standard_error, late.standard_error);
    const auto cov = stats::increment_covariance(e, {q, 2.0 * q}, {2.0 * q, 3.0 * q});
    return {
        {"gaussian", jb.p_value > 0.01},
        {"stationary_increments", std::abs(early.value - late.value) <= 3.0 * diff_se},
        {"uncorrelated_increments", std::abs(cov.value) <= 3.0 * cov.standard_error},
        {"details",
         {{"jarque_bera_p_value", jb.p_value},
          {"increment_variance_early", early.value},
          {"increment_variance_late", late.value},
          {"increment_variance_diff_se", diff_se},
          {"disjoint_increment_covariance", cov.value},
          {"disjoint_increment_covariance_se", cov.standard_error}}},
    };
}

} // namespace

json compare_report(const CompareConfig& c) {
    if (!(c.h > 0.0 && c.h < 1.0)) throw ConfigError("Hurst exponent must lie in (0,1)");
    if (!(c.t > 0.0)) throw ConfigError("--t must be positive");
    if (c.paths < 10) throw ConfigError("--paths must be at least 10 for the property battery");
    if (c.steps < 4 || c.steps % 4 != 0) throw ConfigError("--steps must be a positive multiple of 4");
    const HurstExponent h(c.h);

    json j{{"schema_version", kSchemaVersion},
           {"kind", "compare"},
           {"library_version", SELFSIM_VERSION},
           {"h", c.h},
           {"diffusivity", std::string(to_string(h.classification()))},
           {"seed", c.seed}};

    // Tail ratios at finite levels
    const auto tails = stats::tail_ratio_table(h, c.t, c.levels);
    json t1{{"t", c.t}, {"rows", json::array()}};
    std::vector<double> a, b, d;
    for (const auto& r : tails) {
        t1["rows"].push_back({{"level", r.level},
                              {"fbm_vs_bm", std::exp(r.log_fbm_vs_bm)},
                              {"fim_vs_bm", std::exp(r.log_fim_vs_bm)},
                              {"fim_vs_fbm", std::exp(r.log_fim_vs_fbm)},
                              {"log_fbm_vs_bm", r.log_fbm_vs_bm},
                              {"log_fim_vs_bm", r.log_fim_vs_bm},
                              {"log_fim_vs_fbm", r.log_fim_vs_fbm}});
        a.push_back(r.log_fbm_vs_bm);
        b.push_back(r.log_fim_vs_bm);
        d.push_back(r.log_fim_vs_fbm);
    }
    t1["trends"] = {{"fbm_vs_bm", stats::to_string(stats::trend(a))},
                    {"fim_vs_bm", stats::to_string(stats::trend(b))},
                    {"fim_vs_fbm", stats::to_string(stats::trend(d))}};
    t1["verdicts"] = {{"fbm_vs_bm", verdict(stats::trend(a))},
                      {"fim_vs_bm", verdict(stats::trend(b))},
                      {"fim_vs_fbm", verdict(stats::trend(d))}};
    j["table1"] = t1;

    // KL divergence ratios at large t
    const auto div = stats::divergence_ratio_table(h, c.times);
    json t2{{"rows", json::array()}, {"fim_vs_bm_limit", stats::fim_bm_divergence_limit(h)}};
    std::vector<double> fa, fb, fc;
    for (const auto& r : div) {
        t2["rows"].push_back(
            {{"t", r.t}, {"fbm_vs_bm", r.fbm_vs_bm}, {"fim_vs_bm", r.fim_vs_bm}, {"fim_vs_fbm", r.fim_vs_fbm}});
        fa.push_back(r.fbm_vs_bm);
        fb.push_back(r.fim_vs_bm);
        fc.push_back(r.fim_vs_fbm);
    }
    t2["trends"] = {{"fbm_vs_bm", stats::to_string(stats::trend(fa))},
                    {"fim_vs_bm", stats::to_string(stats::trend(fb))},
                    {"fim_vs_fbm", stats::to_string(stats::trend(fc))}};
    if (!div.empty()) {
        t2["fim_vs_bm_relative_gap_at_last_t"] = div.back().fim_vs_bm / stats::fim_bm_divergence_limit(h) - 1.0;
    }
    j["table2"] = t2;

    // Property matrix, filled from simulated ensembles
    const auto grid = TimeGrid::uniform(c.t_max, c.steps);
    const auto bm = stats::generate_ensemble(stats::Model::Fbm, HurstExponent(0.5), grid, c.paths, c.seed);
    const auto fbm_e = stats::generate_ensemble(stats::Model::Fbm, h, grid, c.paths, c.seed + 1);
    const auto fim_e = stats::generate_ensemble(stats::Model::Fim, h, grid, c.paths, c.seed + 2);
    json models{{"bm", property_battery(bm, c.t_max)},
                {"fbm", property_battery(fbm_e, c.t_max)},
                {"fim", property_battery(fim_e, c.t_max)}};
    json matrix;
    for (const char* prop : {"gaussian", "stationary_increments", "uncorrelated_increments"}) {
        matrix[prop] = {{"bm", models["bm"][prop]}, {"fbm", models["fbm"][prop]}, {"fim", models["fim"][prop]}};
    }
    j["table3"] = {{"t_max", c.t_max}, {"steps", c.steps}, {"paths", c.paths}, {"properties", matrix},
                   {"models", models}};
    return j;
}

// ---------------------------------------------------------------------------
// command line

namespace {

std::vector<int> parse_criteria(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        int v = 0;
        try {
            v = std::stoi(item);
        } catch (const std::exception&) {
            throw ConfigError("--criteria expects comma-separated integers");
        }
        if (v < 1 || v > 12) throw ConfigError("--criteria entries must lie in 1..12");
        out.push_back(v);
    }
    return out;
}

const std::map<std::string, stats::Model> kModelNames{
    {"fbm", stats::Model::Fbm}, {"fim", stats::Model::Fim}, {"dlp", stats::Model::DlpMapped}};
const std::map<std::string, Format> kFormatNames{{"csv", Format::Csv}, {"json", Format::Json}};
const std::map<std::string, stats::FbmMethod> kMethodNames{{"circulant", stats::FbmMethod::Circulant},
                                                           {"cholesky", stats::FbmMethod::Cholesky}};

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulation and analysis of fractional Brownian motion and fractional Ito motion", "selfsim"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.set_version_flag("--version", SELFSIM_VERSION);

    RunConfig sim;
    std::optional<double> sim_floor;
    bool no_bootstrap = false;
    auto* simulate = app.add_subcommand("simulate", "Generate an ensemble of paths");
    std::string model_name = "fim", method_name = "circulant", format_name = "csv";
    simulate->add_option("--model", model_name, "fbm, fim or dlp")->check(CLI::IsMember(kModelNames));
    simulate->add_option("--h", sim.h, "Hurst exponent in (0,1)");
    simulate->add_option("--t-max", sim.t_max, "Final time");
    simulate->add_option("--steps", sim.steps, "Number of time steps");
    simulate->add_option("--paths", sim.paths, "Number of paths");
    simulate->add_option("--seed", sim.seed, "Random seed");
    simulate->add_option("--floor", sim_floor, "EM regularization floor");
    simulate->add_flag("--no-bootstrap", no_bootstrap, "Start EM at the origin instead of the exact marginal");
    simulate->add_option("--fbm-method", method_name, "circulant or cholesky")->check(CLI::IsMember(kMethodNames));
    simulate->add_option("--var-b1", sim.var_b1, "FBM scale Var[B_H(1)]");
    simulate->add_option("--format", format_name, "csv or json")->check(CLI::IsMember(kFormatNames));
    simulate->add_option("--out", sim.out, "Output path (metadata goes to PATH.meta.json)")->required();

    AnalyticConfig ana;
    auto* analytic = app.add_subcommand("analytic", "Closed-form quantities on grids, one CSV each");
    analytic->add_option("--quantity", ana.quantities, "Quantity name (repeatable)")->required();
    analytic->add_option("--h", ana.h, "Hurst exponent in (0,1)");
    analytic->add_option("--var-b1", ana.var_b1, "FBM scale Var[B_H(1)]");
    analytic->add_option("--t-min", ana.t_min, "First time point (default t-max / t-points)");
    analytic->add_option("--t-max", ana.t_max, "Last time point");
    analytic->add_option("--t-points", ana.t_points, "Number of time points");
    analytic->add_option("--x-min", ana.x_min, "Smallest position");
    analytic->add_option("--x-max", ana.x_max, "Largest position");
    analytic->add_option("--x-points", ana.x_points, "Number of positions");
    analytic->add_option("--h-points", ana.h_points, "Number of H values for CV curves");
    analytic->add_option("--delta", ana.delta, "Increment length");
    analytic->add_option("--u-min", ana.u_min, "Smallest kernel argument");
    analytic->add_option("--u-points", ana.u_points, "Number of kernel arguments");
    analytic->add_option("--out", ana.out_dir, "Output directory");

    CompareConfig cmp;
    std::string cmp_out;
    auto* compare = app.add_subcommand("compare", "FBM vs FIM vs BM comparison report (JSON)");
    compare->add_option("--h", cmp.h, "Hurst exponent in (0,1)");
    compare->add_option("--t", cmp.t, "Time at which tails are compared");
    compare->add_option("--levels", cmp.levels, "Tail levels");
    compare->add_option("--times", cmp.times, "Times for the divergence ratios");
    compare->add_option("--t-max", cmp.t_max, "Horizon of the property ensembles");
    compare->add_option("--steps", cmp.steps, "Steps of the property ensembles");
    compare->add_option("--paths", cmp.paths, "Paths of the property ensembles");
    compare->add_option("--seed", cmp.seed, "Random seed");
    compare->add_option("--out", cmp_out, "Output file (default stdout)");

    validation::Options val;
    std::string val_out;
    std::string criteria;
    auto* validate = app.add_subcommand("validate", "Run the acceptance battery");
    validate->add_option("--seed", val.seed, "Base seed");
    validate->add_option("--out", val_out, "Report file (default stdout)");
    validate->add_option("--criteria", criteria, "Comma-separated subset of criteria 1-12");
    validate->add_option("--tolerance-scale", val.tolerance_scale, "Scales every tolerance (test hook)")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << SELFSIM_VERSION << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    }

    try {
        if (simulate->parsed()) {
            sim.model = kModelNames.at(model_name);
            sim.fbm_method = kMethodNames.at(method_name);
            sim.format = kFormatNames.at(format_name);
            sim.floor = sim_floor;
            sim.bootstrap = !no_bootstrap;
            cmd_simulate(sim);
        } else if (analytic->parsed()) {
            cmd_analytic(ana);
        } else if (compare->parsed()) {
            const auto report = compare_report(cmp);
            if (cmp_out.empty()) {
                write_json(out, report);
            } else {
                auto f = open_output(cmp_out);
                write_json(f, report);
            }
        } else if (validate->parsed()) {
            val.criteria = parse_criteria(criteria);
            const auto checks = validation::run(val);
            const auto report = validation::report(checks, val);
            if (val_out.empty()) {
                write_json(out, report);
            } else {
                auto f = open_output(val_out);
                write_json(f, report);
            }
            if (!validation::all_passed(checks)) {
                for (const auto& c : checks) {
                    if (!c.passed) err << "FAILED " << c.id << ": " << c.description << '\n';
                }
                return static_cast<int>(ExitCode::ValidationFailure);
            }
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::ValidationFailure);
    }
    return 0;
}

} // namespace selfsim::cli
