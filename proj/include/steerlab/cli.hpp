#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steerlab/counts.hpp"
#include "steerlab/search.hpp"
#include "steerlab/steering.hpp"
#include "steerlab/tomography.hpp"

namespace steerlab {

inline constexpr const char* kVersion = "0.3.0";
inline constexpr int kConfigSchemaVersion = 1;

/// Everything a pipeline stage needs. Parsed from a versioned JSON document;
/// unknown keys are rejected with their location.
struct RunConfig {
  int collisions = 1;
  double total_time = 2.0;
  std::optional<double> theta3;  ///< x3 polar angle; defaults to the reference table for N <= 4
  NoiseModel noise;
  std::optional<std::int64_t> shots;  ///< per circuit; defaults to the hardware budget
  std::uint64_t seed = 1;
  SteeringOptions steering;
  TomographySet tomography = TomographySet::ideal();
  LbOptions lb;
  StrategySearchOptions search;
  bool per_setting_marginals = false;
  int bootstrap = 0;  ///< resamples for the tomo stage; 0 disables
  std::string output = "out";

  CollisionConfig collision() const { return {total_time, collisions}; }
  double resolved_theta3() const;
  std::int64_t resolved_shots() const;
  std::array<MeasurementStrategy, 3> strategies() const;
};

/// Throws InputError naming the JSON path of the offending entry.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);
/// Fully resolved configuration, suitable for embedding in reports.
nlohmann::json to_json(const RunConfig& config);

struct CommandLine {
  std::string command;
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::string> mode;
  std::optional<std::int64_t> shots;
  std::optional<int> bootstrap;
  std::vector<std::filesystem::path> inputs;
};

enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitSolver = 3, kExitResource = 4 };

/// Runs one stage, reporting progress and diagnostics to `log`. Exceptions are
/// mapped to exit codes: input and domain errors 2, solver and search
/// failures 3, resource limits 4.
int run_command(const CommandLine& cli, std::ostream& log);

// Individual stages; each writes its files below `out` and returns their paths.
std::vector<std::filesystem::path> cmd_simulate(const RunConfig& config, const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_sample(const RunConfig& config, const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_tomo(const RunConfig& config, const std::filesystem::path& counts,
                                            const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_sw(const RunConfig& config, const std::filesystem::path& assemblage,
                                          const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_lb(const RunConfig& config, const std::filesystem::path& counts,
                                          const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_find_strategy(const RunConfig& config, const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_plot(const RunConfig& config, const std::vector<std::filesystem::path>& inputs,
                                            const std::filesystem::path& out);

}  // namespace steerlab
