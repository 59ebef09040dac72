#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gegen/ellipse_bounds.hpp"
#include "gegen/nodes_quadrature.hpp"
#include "gegen/test_functions.hpp"

namespace gegen {

enum class Command { Nodes, Fig2, Fig3, Bounds, ExpansionDecay };
enum class OutputFormat { Csv, Json };
enum class FamilySelection { Gauss, Lobatto, Both };

std::string_view to_string(Command c);
Command parse_command(std::string_view name);
std::string_view to_string(OutputFormat f);
OutputFormat parse_output_format(std::string_view name);
FamilySelection parse_family_selection(std::string_view name);
std::vector<NodeFamily> families_of(FamilySelection s);

/// Invalid experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RhoScanConfig {
  double min = 1.0;
  double max = 1.0 + 1.4142135623730951;
  int count = 2000;
};

struct ExperimentConfig {
  std::vector<double> lambda_list;
  std::vector<int> n_list;
  RhoScanConfig rho_scan;
  int ellipse_samples = EllipseSpec::kDefaultSamples;
  FunctionId function_id = FunctionId::Runge1;
  double rational_pole = 1.0;
  /// Extra functions run alongside function_id by fig3 (the default pairs runge1 with runge2).
  std::vector<FunctionId> extra_functions;
  FamilySelection node_family = FamilySelection::Both;
  std::string output_path;
  OutputFormat format = OutputFormat::Csv;
  int grid_size = 2001;
  /// (lambda, rho) cells of the E_n study.
  std::vector<std::pair<double, double>> fig2_grid;
  double dominance_slack = 1.25;
  std::pair<int, int> slope_window{20, 60};
  double slope_tolerance = 0.05;

  // bounds subcommand
  std::optional<double> rho;
  std::optional<double> m_rho;
  std::optional<int> m;
  std::optional<BoundKind> theorem;

  std::vector<FunctionId> functions() const;
};

/// Defaults for a subcommand, before any config file or flag is applied.
ExperimentConfig default_config(Command c);

/// Overlays the keys present in `j` onto `config`. Unknown keys are rejected.
void apply_json(ExperimentConfig& config, const nlohmann::json& j);

/// Reads a JSON config file; ConfigError on unreadable or malformed input.
nlohmann::json read_config_file(const std::string& path);

/// Checks the invariants for the given subcommand; throws ConfigError.
void validate(const ExperimentConfig& config, Command c);

/// log-spaced integers between lo and hi (inclusive), deduplicated.
std::vector<int> log_spaced(int lo, int hi, int count);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y ~ intercept + slope x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Least squares y ~ a + b n + c ln n; returns (a, b, c).
std::array<double, 3> fit_rate_with_power(const std::vector<double>& n, const std::vector<double>& y);

struct NodesTable {
  double lambda;
  int n;
  NodeFamily family;
  NodeSet<double> nodes;
};

std::vector<NodesTable> run_nodes(const ExperimentConfig& config);

struct Fig2Row {
  double lambda;
  double rho;
  int n;
  double e_n;
  bool below_upper;  // E_n <= n^{-0.9}
  bool above_lower;  // E_n >= 0.1 n^{-1} (harness guard)
};

std::vector<Fig2Row> run_fig2(const ExperimentConfig& config);

enum class Quantity { Diff, Interp, Quad };
std::string_view to_string(Quantity q);

struct Fig3Record {
  FunctionId function;
  Quantity quantity;
  double lambda;
  int n;
  NodeFamily family;
  double measured_error;
  BestBound bound;
  bool dominated;  // measured <= slack * bound
};

struct SlopeSummary {
  FunctionId function;
  Quantity quantity;
  double lambda;
  NodeFamily family;
  double fitted_slope;
  double target_slope;  // -ln(singularity rho)
  double relative_deviation;
  bool within_tolerance;
  std::array<double, 3> power_corrected;  // diagnostic a + b n + c ln n
};

struct Fig3Result {
  std::vector<Fig3Record> records;
  std::vector<SlopeSummary> slopes;
  int dominance_violations = 0;
};

Fig3Result run_fig3(const ExperimentConfig& config);

struct ExpansionRow {
  double lambda;
  FunctionId function;
  int n;
  double truncation_error;
  double fitted_ratio;
};

std::vector<ExpansionRow> run_expansion_decay(const ExperimentConfig& config);

/// One itemised bound for the bounds subcommand. M_rho is sampled from the configured
/// function when not supplied.
BoundBreakdown run_bounds(const ExperimentConfig& config);

}  // namespace gegen
