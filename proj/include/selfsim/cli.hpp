#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "selfsim/stats.hpp"

namespace selfsim::cli {

inline constexpr const char* kSchemaVersion = "1.0";

enum class ExitCode : int { Success = 0, ValidationFailure = 1, Usage = 2 };

/// A rejected configuration; the message is a single line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

struct RunConfig {
    stats::Model model = stats::Model::Fim;
    double h = 0.5;
    double t_max = 1.0;
    std::size_t steps = 1024;
    std::size_t paths = 100;
    std::uint64_t seed = 1;
    std::optional<double> floor;
    bool bootstrap = true;
    stats::FbmMethod fbm_method = stats::FbmMethod::Circulant;
    double var_b1 = 1.0;
    Format format = Format::Csv;
    std::string out;

    /// Throws ConfigError naming the first violated precondition.
    void validate() const;
};

/// Full-precision decimal rendering (17 significant digits).
std::string format_double(double v);

/// Provenance block embedded in every artifact.
nlohmann::json provenance(const RunConfig& c);

/// Trajectory CSV (path_id,t,x) or JSON ensemble to `data`, metadata JSON to `meta`.
void write_simulation(const RunConfig& c, std::ostream& data, std::ostream& meta);

/// Writes `out` and `out + ".meta.json"`.
void cmd_simulate(const RunConfig& c);

struct AnalyticConfig {
    std::vector<std::string> quantities;
    double h = 0.5;
    double var_b1 = 1.0;
    double t_min = 0.0; // 0 selects t_max / t_points
    double t_max = 1.0;
    std::size_t t_points = 1;
    double x_min = -3.0;
    double x_max = 3.0;
    std::size_t x_points = 121;
    std::size_t h_points = 99;
    double delta = 0.25;
    double u_min = -2.0;
    std::size_t u_points = 121;
    std::string out_dir = ".";
};

/// Valid names for `analytic --quantity`.
const std::vector<std::string>& analytic_quantities();

/// One CSV per quantity. Throws ConfigError for unknown names.
void write_analytic(const AnalyticConfig& c, const std::string& quantity, std::ostream& out);
void cmd_analytic(const AnalyticConfig& c);

struct CompareConfig {
    double h = 0.25;
    double t = 2.0;
    std::vector<double> levels{2.0, 4.0, 8.0, 16.0};
    std::vector<double> times{10.0, 1e2, 1e3, 1e4, 1e5, 1e6};
    double t_max = 1.0;
    std::size_t steps = 256;
    std::size_t paths = 4000;
    std::uint64_t seed = 1;
};

nlohmann::json compare_report(const CompareConfig& c);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace selfsim::cli
