#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mobo/runner.hpp"

namespace mobo {

/// Invalid or missing configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses and validates a RunConfig. Field names mirror the struct exactly:
/// problem{name,num_objectives,num_variables}, algorithm, init_size, budget,
/// seed, ga{population,generations,crossover_prob,mutation_prob,sbx_eta,
/// pm_eta}, mc_counts{search,report}, rho, gumbel_sample_count.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& config);

RunConfig load_run_config(const std::string& path);

/// "key=value" override with dotted paths, e.g. "seed=7" or "ga.population=50".
void apply_override(nlohmann::json& j, const std::string& assignment);

/// Batch campaign: the cross product of problems x algorithms x seeds over a
/// shared base configuration.
struct BatchConfig {
  std::vector<ProblemSpec> problems;
  std::vector<Algorithm> algorithms;
  std::vector<std::uint64_t> seeds;
  RunConfig base;  // problem/algorithm/seed fields are ignored

  std::vector<RunConfig> expand() const;
};

BatchConfig batch_config_from_json(const nlohmann::json& j);
BatchConfig load_batch_config(const std::string& path);

/// FNV-1a over the canonical JSON dump, hex-encoded.
std::string config_hash(const RunConfig& config);

}  // namespace mobo
