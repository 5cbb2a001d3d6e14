#pragma once

// Scenario files for the runner: parsing, dispatch to the library, and the
// CSV/JSON report writer.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "netpublic/model.hpp"
#include "netpublic/sweep.hpp"

namespace netpublic::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNonConvergence = 3,
  kExitStructureViolation = 4,
  kExitIo = 5,
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Solve, Verify, SweepK, Subsidy, LawOfFew, Extensions };
enum class Format { Csv, Json };
enum class ExtensionVariant { TwoWay, Weighted, Perturbed };

struct ScenarioConfig {
  Command command = Command::Solve;
  BenefitSpec benefit;
  double c = 1.0;
  std::optional<double> k;
  std::vector<double> k_grid;
  std::size_t n = 0;
  TypeDistribution dist;
  std::vector<double> types;  // explicit society; overrides n and dist
  std::uint64_t seed = 1;
  std::optional<SearchMode> mode;

  std::string out_path;  // empty writes to stdout
  Format format = Format::Csv;

  // Subsidy
  double budget = 0.0;
  std::size_t target_grid = 8;
  std::size_t level_grid = 20;

  // LawOfFew
  std::vector<std::size_t> n_list;

  // Extensions
  ExtensionVariant variant = ExtensionVariant::Weighted;
  double eps_bound = 1e-4;
  std::size_t trials = 20;

  // Verify: inline profile or a previous JSON report
  std::optional<StrategyProfile> profile;
  std::string profile_file;
  std::size_t record_index = 0;
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Types of the scenario's society: the explicit list, or a seeded sample.
TypeVector scenario_types(const ScenarioConfig& config);

/// Everything a run produces; `extra` is a JSON object merged into JSON reports.
struct Report {
  Command command = Command::Solve;
  std::vector<SweepRecord> records;
  std::string extra_json = "{}";
  bool structure_violation = false;
};

/// Runs the command. Throws ConfigError, IoError or NonConvergence.
Report execute(const ScenarioConfig& config);

void write_csv(const std::vector<SweepRecord>& records, std::ostream& out);
void write_json(const Report& report, std::ostream& out);

/// Writes to `path`, or stdout when empty. Throws IoError.
void emit_report(const Report& report, Format format, const std::string& path);

/// execute + emit_report with errors mapped to exit codes and a one-line
/// diagnostic on `err`.
int run_scenario(const ScenarioConfig& config, std::ostream& err);

}  // namespace netpublic::cli
