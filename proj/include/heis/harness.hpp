// Experiment catalogue behind the `heis` command: configuration, dispatch,
// assertions, and CSV / JSON output.
#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "heis/girsanov.hpp"

namespace heis {

using json = nlohmann::json;

enum class Experiment {
  simulate,
  ws_converge,
  energy_diverge,
  tube,
  girsanov_ratio,
  dds_diagnostics,
  helix,
  support,
  levy_law,
};
Experiment parse_experiment(const std::string& name);
std::string to_string(Experiment e);
const std::vector<std::string>& experiment_names();

/// Schema violation; the message names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& what);
  std::string field;
};

class ParseError : public std::invalid_argument {
 public:
  ParseError(std::size_t position, const std::string& what);
  std::size_t position;
};

/// Pieces separated by ';', traversed in equal time:
///   zero | line a b | poly2 p q | quad c0x c0y c1x c1y c2x c2y
/// poly2 is the planar path (p t, q t^2); quad is c0 + c1 t + c2 t^2 and
/// needs c0 = 0.
ReferenceCurve parse_reference_curve(const std::string& text);

/// "2^-K", "2^K" or a plain decimal.
double parse_number(const std::string& text);
std::vector<double> parse_number_list(const std::string& text);

struct ExperimentConfig {
  Experiment experiment = Experiment::simulate;
  /// Every numeric field, defaults filled in. Keys are sorted, so dump()
  /// is canonical.
  json fields;
  std::filesystem::path out_dir = ".";
  int threads = 0;  // 0: OpenMP default

  /// Defaults for `e`, overlaid with `overrides`; validates every field.
  static ExperimentConfig make(Experiment e, const json& overrides = json::object());
  /// FNV-1a over the canonical dump of `fields` and the experiment name.
  std::string hash() const;
  json to_json() const;
};

struct Assertion {
  std::string name;
  bool passed = false;
  bool inconclusive = false;  // not enough data to decide
  std::string detail;
};

enum class Status { pass, fail, inconclusive };
std::string to_string(Status s);
/// 0 pass, 1 fail, 2 inconclusive.
int exit_code(Status s);

struct ExperimentResult {
  ExperimentConfig config;
  std::string csv;
  std::vector<Assertion> assertions;
  json extra = json::object();
  Status status = Status::pass;
  double wall_clock = 0.0;

  json summary() const;
};

/// Runs the experiment in memory.
ExperimentResult run(const ExperimentConfig& config);
/// Writes <out>/<experiment>.csv and <out>/<experiment>.summary.json.
void write_outputs(const ExperimentResult& result);

/// The full command line: heis <experiment> [flags]. Returns the exit code.
int cli_main(int argc, char** argv);

}  // namespace heis
