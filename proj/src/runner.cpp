#include "mobo/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "mobo/acquisition.hpp"
#include "mobo/config.hpp"
#include "mobo/gp.hpp"
#include "mobo/metrics.hpp"
#include "mobo/persist.hpp"
#include "mobo/scalar_dist.hpp"
#include "mobo/scalarise.hpp"

namespace mobo {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::MonoEI: return "MonoEI";
    case Algorithm::MultiEiGumbel: return "MultiEiGumbel";
    case Algorithm::MultiEiExactMC: return "MultiEiExactMC";
    case Algorithm::MultiEHVI: return "MultiEHVI";
    case Algorithm::RandomSearch: return "RandomSearch";
  }
  throw std::logic_error("unknown Algorithm");
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "MonoEI") return Algorithm::MonoEI;
  if (name == "MultiEiGumbel") return Algorithm::MultiEiGumbel;
  if (name == "MultiEiExactMC") return Algorithm::MultiEiExactMC;
  if (name == "MultiEHVI") return Algorithm::MultiEHVI;
  if (name == "RandomSearch") return Algorithm::RandomSearch;
  throw std::invalid_argument("unknown algorithm: " + name);
}

int RunConfig::effective_init_size() const {
  return init_size > 0 ? init_size : 10 * problem.num_variables;
}

int RunConfig::effective_budget() const {
  return budget > 0 ? budget : 30 * problem.num_variables;
}

void RunConfig::finalise() {
  problem.validate();
  init_size = effective_init_size();
  budget = effective_budget();
  if (init_size < 2) throw std::invalid_argument("RunConfig: init_size must be >= 2");
  if (budget <= init_size) throw std::invalid_argument("RunConfig: budget must exceed init_size");
  if (mc_counts.search < 1 || mc_counts.report < 1)
    throw std::invalid_argument("RunConfig: mc_counts must be >= 1");
  if (rho < 0.0) throw std::invalid_argument("RunConfig: rho must be >= 0");
  if (gumbel_sample_count < 10)
    throw std::invalid_argument("RunConfig: gumbel_sample_count must be >= 10");
  ga.validate();
}

std::string RunConfig::run_id() const {
  return problem.id() + "_" + to_string(algorithm) + "_seed" + std::to_string(seed);
}

namespace {

constexpr int kGpRestarts = 10;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t gp_seed(const RunConfig& cfg, int iteration, int objective) {
  return derive_stream_seed(cfg.seed, kStreamGpFit,
                            (static_cast<std::uint64_t>(iteration) << 8) |
                                static_cast<std::uint64_t>(objective));
}

Eigen::VectorXd uniform_point(const ProblemSpec& prob, Rng& rng) {
  Eigen::VectorXd x(prob.num_variables);
  for (int j = 0; j < prob.num_variables; ++j) x[j] = rng.uniform();
  return x;
}

// proposals landing on an archived point are nudged so the next fit stays
// well conditioned
void perturb_duplicates(Eigen::VectorXd& x, const Dataset& data, const RunConfig& cfg,
                        int iteration) {
  bool duplicate = false;
  for (Eigen::Index i = 0; i < data.inputs.rows(); ++i) {
    if ((data.inputs.row(i).transpose() - x).lpNorm<Eigen::Infinity>() <= 1e-9) {
      duplicate = true;
      break;
    }
  }
  if (!duplicate) return;
  Rng rng = Rng::stream(cfg.seed, "perturb", static_cast<std::uint64_t>(iteration));
  for (Eigen::Index j = 0; j < x.size(); ++j) x[j] += rng.uniform(-1e-3, 1e-3);
  x = x.cwiseMax(0.0).cwiseMin(1.0);
}

struct Proposal {
  Eigen::VectorXd x;
  double fit_seconds = 0.0;
  double acq_seconds = 0.0;
};

Proposal propose_mono_ei(const RunConfig& cfg, const Dataset& data, const WeightVector& w,
                         const NormalisationState& norm, int iteration) {
  const Eigen::VectorXd z = norm.ideal();
  Eigen::VectorXd targets(data.eval_count());
  for (Eigen::Index i = 0; i < data.objectives.rows(); ++i)
    targets[i] = augmented_tchebycheff(norm.normalise(data.objectives.row(i).transpose()), w,
                                       z, cfg.rho);

  Proposal out;
  const auto t_fit = Clock::now();
  GpFitOptions opt;
  opt.restarts = kGpRestarts;
  opt.seed = gp_seed(cfg, iteration, 0);
  const GpModel model = fit_gp(data.inputs, targets, opt);
  out.fit_seconds = seconds_since(t_fit);

  const double incumbent = targets.minCoeff();
  auto acq = [&](const Eigen::VectorXd& x) {
    const Prediction p = model.predict(x);
    return ei_closed_form(p.mean, p.std, incumbent);
  };

  GaConfig ga = cfg.ga;
  ga.seed = derive_stream_seed(cfg.seed, kStreamAcq, static_cast<std::uint64_t>(iteration));
  const auto t_acq = Clock::now();
  out.x = ga_maximise(acq, cfg.problem.lower_bounds(), cfg.problem.upper_bounds(), ga).best_x;
  out.acq_seconds = seconds_since(t_acq);
  return out;
}

Proposal propose_multi_ei(const RunConfig& cfg, const Dataset& data, const WeightVector& w,
                          const NormalisationState& norm, int iteration, bool use_gumbel) {
  const int m = cfg.problem.num_objectives;
  const Eigen::VectorXd z = norm.ideal();

  Proposal out;
  const auto t_fit = Clock::now();
  std::vector<GpModel> models;
  models.reserve(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    GpFitOptions opt;
    opt.restarts = kGpRestarts;
    opt.seed = gp_seed(cfg, iteration, j);
    models.push_back(fit_gp(data.inputs, data.objectives.col(j), opt));
  }
  out.fit_seconds = seconds_since(t_fit);

  double incumbent = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < data.objectives.rows(); ++i)
    incumbent = std::min(
        incumbent, tchebycheff(norm.normalise(data.objectives.row(i).transpose()), w, z));

  // common random numbers: one draw set per iteration keeps the acquisition
  // surface deterministic for the GA
  Rng rng_mc = Rng::stream(cfg.seed, kStreamMc, static_cast<std::uint64_t>(iteration));
  Eigen::MatrixXd normals(cfg.gumbel_sample_count, m);
  for (Eigen::Index k = 0; k < normals.rows(); ++k)
    for (int j = 0; j < m; ++j) normals(k, j) = rng_mc.normal();
  Eigen::ArrayXd uniforms(cfg.mc_counts.search);
  for (Eigen::Index k = 0; k < uniforms.size(); ++k) uniforms[k] = rng_mc.uniform_open();

  const Eigen::VectorXd den = norm.denominators();
  Eigen::VectorXd mu(m), sigma(m);
  Eigen::ArrayXd g_samples;
  auto acq = [&](const Eigen::VectorXd& x) {
    for (int j = 0; j < m; ++j) {
      const Prediction p = models[static_cast<size_t>(j)].predict(x);
      mu[j] = (p.mean - norm.mins[j]) / den[j];
      sigma[j] = p.std / den[j];
    }
    const auto sp = ScalarisedPosterior::from_predictions(mu, sigma, w.weights, z);
    sample_with_normals(sp, normals, g_samples);
    if (use_gumbel) {
      try {
        return ei_monte_carlo(fit_gumbel(g_samples), incumbent, uniforms);
      } catch (const std::exception&) {
        // spread too small to fit; the raw-sample average is exact there
        return ei_from_samples(g_samples, incumbent);
      }
    }
    return ei_from_samples(g_samples, incumbent);
  };

  GaConfig ga = cfg.ga;
  ga.seed = derive_stream_seed(cfg.seed, kStreamAcq, static_cast<std::uint64_t>(iteration));
  const auto t_acq = Clock::now();
  out.x = ga_maximise(acq, cfg.problem.lower_bounds(), cfg.problem.upper_bounds(), ga).best_x;
  out.acq_seconds = seconds_since(t_acq);
  return out;
}

Proposal propose_multi_ehvi(const RunConfig& cfg, const Dataset& data,
                            const ParetoArchive& archive, int iteration) {
  const int m = cfg.problem.num_objectives;

  Proposal out;
  const auto t_fit = Clock::now();
  std::vector<GpModel> models;
  models.reserve(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    GpFitOptions opt;
    opt.restarts = kGpRestarts;
    opt.seed = gp_seed(cfg, iteration, j);
    models.push_back(fit_gp(data.inputs, data.objectives.col(j), opt));
  }
  out.fit_seconds = seconds_since(t_fit);

  const Eigen::MatrixXd front = archive.points_matrix();
  const Eigen::VectorXd ref = archive.ref_point();
  Rng rng_mc = Rng::stream(cfg.seed, kStreamMc, static_cast<std::uint64_t>(iteration));
  Eigen::MatrixXd normals(cfg.mc_counts.search, m);
  for (Eigen::Index k = 0; k < normals.rows(); ++k)
    for (int j = 0; j < m; ++j) normals(k, j) = rng_mc.normal();

  std::vector<Prediction> preds(static_cast<size_t>(m));
  auto acq = [&](const Eigen::VectorXd& x) {
    for (int j = 0; j < m; ++j) preds[static_cast<size_t>(j)] = models[static_cast<size_t>(j)].predict(x);
    return ehvi_with_normals(preds, front, ref, normals);
  };

  GaConfig ga = cfg.ga;
  ga.seed = derive_stream_seed(cfg.seed, kStreamAcq, static_cast<std::uint64_t>(iteration));
  const auto t_acq = Clock::now();
  out.x = ga_maximise(acq, cfg.problem.lower_bounds(), cfg.problem.upper_bounds(), ga).best_x;
  out.acq_seconds = seconds_since(t_acq);
  return out;
}

}  // namespace

std::vector<RunRecord> run(const RunConfig& config_in) {
  RunConfig cfg = config_in;
  cfg.finalise();
  const ProblemSpec& prob = cfg.problem;

  Dataset data;
  {
    Rng rng_init = Rng::stream(cfg.seed, kStreamInit);
    const Eigen::MatrixXd X = lhs_sample(prob.num_variables, cfg.init_size, rng_init);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      data.append(X.row(i).transpose(), prob.evaluate(X.row(i).transpose()));
  }

  ParetoArchive archive(prob.reference_point());
  for (Eigen::Index i = 0; i < data.objectives.rows(); ++i)
    archive.add(data.objectives.row(i).transpose());

  Rng rng_weights = Rng::stream(cfg.seed, kStreamWeights);
  std::vector<RunRecord> records;
  records.reserve(static_cast<size_t>(cfg.budget - cfg.init_size));

  for (int iteration = cfg.init_size + 1; iteration <= cfg.budget; ++iteration) {
    const WeightVector w = sample_weight(prob.num_objectives, rng_weights);
    const NormalisationState norm = NormalisationState::from_objectives(data.objectives);

    RunRecord rec;
    rec.iteration = iteration;
    rec.weight = w.weights;

    Proposal proposal;
    try {
      switch (cfg.algorithm) {
        case Algorithm::MonoEI:
          proposal = propose_mono_ei(cfg, data, w, norm, iteration);
          break;
        case Algorithm::MultiEiGumbel:
          proposal = propose_multi_ei(cfg, data, w, norm, iteration, true);
          break;
        case Algorithm::MultiEiExactMC:
          proposal = propose_multi_ei(cfg, data, w, norm, iteration, false);
          break;
        case Algorithm::MultiEHVI:
          proposal = propose_multi_ehvi(cfg, data, archive, iteration);
          break;
        case Algorithm::RandomSearch: {
          Rng rng = Rng::stream(cfg.seed, kStreamAcq, static_cast<std::uint64_t>(iteration));
          proposal.x = uniform_point(prob, rng);
          break;
        }
      }
    } catch (const std::runtime_error&) {
      // model fit failed; keep the budget accounting honest with a random point
      rec.fallback = true;
      Rng rng = Rng::stream(cfg.seed, kStreamFallback, static_cast<std::uint64_t>(iteration));
      proposal.x = uniform_point(prob, rng);
    }

    perturb_duplicates(proposal.x, data, cfg, iteration);
    const Eigen::VectorXd f = prob.evaluate(proposal.x);
    data.append(proposal.x, f);
    archive.add(f);

    rec.chosen_x = proposal.x;
    rec.objectives = f;
    rec.scalarised_value = tchebycheff(norm.normalise(f), w, norm.ideal());
    rec.hypervolume_so_far = archive.hypervolume();
    rec.wall_time_model_fit = proposal.fit_seconds;
    rec.wall_time_acquisition = proposal.acq_seconds;
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<BatchOutcome> run_batch(const std::vector<RunConfig>& configs,
                                    const std::filesystem::path& out_dir, int parallelism,
                                    bool resume) {
  std::filesystem::create_directories(out_dir);
  std::vector<BatchOutcome> outcomes(configs.size());
  std::vector<ManifestEntry> entries(configs.size());

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= configs.size()) return;
      RunConfig cfg = configs[i];
      BatchOutcome& out = outcomes[i];
      ManifestEntry& entry = entries[i];
      try {
        cfg.finalise();
        out.run_id = cfg.run_id();
        out.path = record_path(out_dir, cfg);
        entry.config_hash = config_hash(cfg);
        entry.seed = cfg.seed;
        entry.problem = to_string(cfg.problem.name);
        entry.num_objectives = cfg.problem.num_objectives;
        entry.num_variables = cfg.problem.num_variables;
        entry.algorithm = to_string(cfg.algorithm);
        entry.path = out.path.filename().string();
        if (resume && std::filesystem::exists(out.path)) {
          out.ok = true;
          entry.status = "ok";
          continue;
        }
        const auto records = run(cfg);
        atomic_write_text(out.path, records_to_jsonl(records));
        atomic_write_text(timing_path(out.path), timings_to_jsonl(records));
        out.ok = true;
        entry.status = "ok";
      } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
        entry.status = std::string("failed: ") + e.what();
      }
    }
  };

  const int jobs = std::max(1, parallelism);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(jobs));
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  write_manifest(out_dir, entries);
  return outcomes;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty input");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

Aggregate aggregate(const std::filesystem::path& results_dir) {
  const auto entries = read_manifest(results_dir);
  std::vector<ManifestEntry> ok_entries;
  for (const auto& e : entries)
    if (e.status == "ok") ok_entries.push_back(e);
  if (ok_entries.empty()) throw std::runtime_error("aggregate: no completed runs in " +
                                                   results_dir.string());

  // one campaign per directory: a single problem instance
  std::set<std::string> problems;
  for (const auto& e : ok_entries)
    problems.insert(e.problem + "_m" + std::to_string(e.num_objectives) + "_n" +
                    std::to_string(e.num_variables));
  if (problems.size() > 1) {
    std::string msg = "aggregate: inconsistent problem grids:";
    for (const auto& p : problems) msg += " " + p;
    throw std::runtime_error(msg);
  }

  struct PerAlgorithm {
    std::map<int, std::vector<double>> hv_by_index;
    std::vector<double> fit_times;
    std::vector<double> acq_times;
  };
  std::map<std::string, PerAlgorithm> by_algorithm;
  std::map<std::string, std::vector<int>> grids;

  for (const auto& e : ok_entries) {
    const auto rec_path = results_dir / e.path;
    const auto records = records_from_jsonl(rec_path, timing_path(rec_path));
    auto& agg = by_algorithm[e.algorithm];
    std::vector<int> grid;
    for (const auto& r : records) {
      agg.hv_by_index[r.iteration].push_back(r.hypervolume_so_far);
      agg.fit_times.push_back(r.wall_time_model_fit);
      agg.acq_times.push_back(r.wall_time_acquisition);
      grid.push_back(r.iteration);
    }
    auto it = grids.find(e.algorithm);
    if (it == grids.end()) {
      grids[e.algorithm] = grid;
    } else if (it->second != grid) {
      throw std::runtime_error("aggregate: inconsistent evaluation grid for algorithm " +
                               e.algorithm + " (file " + e.path + ")");
    }
  }

  Aggregate out;
  for (const auto& [algo, agg] : by_algorithm) {
    for (const auto& [idx, values] : agg.hv_by_index) {
      AggregateRow row;
      row.algorithm = algo;
      row.eval_index = idx;
      row.hv_median = quantile(values, 0.5);
      row.hv_lo = quantile(values, 0.025);
      row.hv_hi = quantile(values, 0.975);
      out.hv_rows.push_back(row);
    }
    TimingRow trow;
    trow.algorithm = algo;
    trow.median_fit_s = quantile(agg.fit_times, 0.5);
    trow.median_acq_s = quantile(agg.acq_times, 0.5);
    out.timing_rows.push_back(trow);
  }
  return out;
}

}  // namespace mobo
