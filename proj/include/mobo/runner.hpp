#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mobo/optimizers.hpp"
#include "mobo/problems.hpp"

namespace mobo {

enum class Algorithm { MonoEI, MultiEiGumbel, MultiEiExactMC, MultiEHVI, RandomSearch };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);  // throws on unknown names

struct McCounts {
  int search = 1000;    // acquisition draws inside the GA
  int report = 100000;  // draws for final reporting paths
};

struct RunConfig {
  ProblemSpec problem;
  Algorithm algorithm = Algorithm::MultiEiGumbel;
  int init_size = 0;  // 0 selects the 10 n default
  int budget = 0;     // 0 selects the 30 n default
  std::uint64_t seed = 0;
  GaConfig ga;
  McCounts mc_counts;
  double rho = 0.05;  // augmentation coefficient, mono-surrogate only
  int gumbel_sample_count = 1000;

  /// Applies the size defaults and checks invariants; throws on bad values.
  void finalise();
  int effective_init_size() const;
  int effective_budget() const;
  std::string run_id() const;  // e.g. "DTLZ2_m2_n5_MultiEiGumbel_seed3"
};

/// One acquisition iteration. `iteration` is the evaluation index after the
/// new point was added, so it runs init_size+1 .. budget.
struct RunRecord {
  int iteration = 0;
  Eigen::VectorXd chosen_x;
  Eigen::VectorXd objectives;
  double scalarised_value = 0.0;  // Tchebycheff value of the new point, this iteration's weights
  double hypervolume_so_far = 0.0;
  Eigen::VectorXd weight;
  bool fallback = false;  // model fit failed, point drawn uniformly instead
  double wall_time_model_fit = 0.0;
  double wall_time_acquisition = 0.0;
};

/// Runs the full loop: LHS initialisation, then one model-fit / acquisition
/// maximisation / evaluation cycle per remaining budget unit.
std::vector<RunRecord> run(const RunConfig& config);

// named randomness streams hanging off RunConfig::seed
inline constexpr const char* kStreamInit = "init";
inline constexpr const char* kStreamWeights = "weights";
inline constexpr const char* kStreamAcq = "acq";
inline constexpr const char* kStreamMc = "mc";
inline constexpr const char* kStreamGpFit = "gpfit";
inline constexpr const char* kStreamFallback = "fallback";

struct BatchOutcome {
  std::string run_id;
  std::filesystem::path path;
  bool ok = false;
  std::string error;
};

/// Executes each config and persists records under out_dir (see persist.hpp
/// for the file layout). Failures are isolated per run; with `resume`,
/// existing result files are kept and skipped.
std::vector<BatchOutcome> run_batch(const std::vector<RunConfig>& configs,
                                    const std::filesystem::path& out_dir, int parallelism,
                                    bool resume = false);

struct AggregateRow {
  std::string algorithm;
  int eval_index = 0;
  double hv_median = 0.0;
  double hv_lo = 0.0;  // 2.5 percentile
  double hv_hi = 0.0;  // 97.5 percentile
};

struct TimingRow {
  std::string algorithm;
  double median_fit_s = 0.0;
  double median_acq_s = 0.0;
};

struct Aggregate {
  std::vector<AggregateRow> hv_rows;      // ordered by algorithm, then eval_index
  std::vector<TimingRow> timing_rows;     // ordered by algorithm
};

/// Median and 95% band of hypervolume per evaluation index across the seeds
/// found in a results directory. All runs must share one problem and grid.
Aggregate aggregate(const std::filesystem::path& results_dir);

/// Interpolated quantile of unsorted values (shared definition for the
/// aggregate and its tests); q in [0,1].
double quantile(std::vector<double> values, double q);

}  // namespace mobo
