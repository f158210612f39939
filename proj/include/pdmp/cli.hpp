#ifndef PDMP_CLI_HPP
#define PDMP_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pdmp/models.hpp"
#include "pdmp/sampler.hpp"
#include "pdmp/targets.hpp"

namespace pdmp::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNonConvergence = 3;

/// Parsed `run` configuration (INI file with sections model, target,
/// sampler, output). See README for the schema.
struct RunConfig {
  std::string model;
  ModelOptions model_options;
  TargetSpec target;
  SamplerConfig sampler;
  std::optional<Vector> x0;
  std::string out_dir = ".";
};

/// Throws InvalidArgument naming the offending section.key.
[[nodiscard]] RunConfig parse_run_config(std::istream& in);
[[nodiscard]] RunConfig load_run_config(const std::string& path);

/// Model and target for a configuration. Boomerang targets are passed
/// through boomerang_adjusted so that `target` names the sampled law.
[[nodiscard]] std::shared_ptr<const PdmpModel> build_model(const std::string& name, const ModelOptions& options);
[[nodiscard]] TargetPotential build_target(const std::string& model, const TargetSpec& spec);

/// `pdmp run`: writes skeleton.csv, summary.json (deterministic) and
/// timing.json into out_dir. Returns an exit code; messages go to `err`.
int cmd_run(const std::string& config_path, const std::optional<std::string>& out_override, std::ostream& err);

struct ExperimentOptions {
  std::string name;
  bool paper_scale = false;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::optional<std::uint64_t> events;
  std::optional<int> replicates;
  std::optional<int> dim;
  std::optional<std::string> strategy;
  int threads = 1;
};

/// One chain of an experiment sweep.
struct RunSpec {
  int cell = 0;
  int replicate = 0;
  std::string model;
  ModelOptions model_options;
  TargetSpec target;
  SamplerConfig sampler;
  double t_max_label = 0.0;  // 0 marks an adaptive horizon
};

[[nodiscard]] const std::vector<std::string>& experiment_names();

/// Expands an experiment into its runs, ordered by (cell, replicate).
/// Throws InvalidArgument for unknown names or unusable overrides.
[[nodiscard]] std::vector<RunSpec> plan_experiment(const ExperimentOptions& options);

/// `pdmp experiment`: runs the plan on a worker pool and writes
/// <name>.csv (deterministic) and <name>_timing.csv; table1 also writes
/// table1_summary.csv.
int cmd_experiment(const ExperimentOptions& options, std::ostream& err);

/// Worker count: PDMP_THREADS when set (>= 1), else hardware concurrency.
[[nodiscard]] int default_threads();

}  // namespace pdmp::cli

#endif  // PDMP_CLI_HPP
