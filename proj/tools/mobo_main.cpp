#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mobo/config.hpp"
#include "mobo/persist.hpp"
#include "mobo/runner.hpp"
#include "mobo/scalar_dist.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

fs::path output_root(const std::string& cli_value) {
  if (!cli_value.empty()) return cli_value;
  if (const char* env = std::getenv("MOBO_OUTPUT_ROOT"); env && *env) return env;
  return "results";
}

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mobo::ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw mobo::ConfigError("config parse error in " + path + ": " + e.what());
  }
  return j;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& out) {
  json j = load_json_file(config_path);
  for (const auto& ov : overrides) mobo::apply_override(j, ov);
  const mobo::RunConfig cfg = mobo::run_config_from_json(j);

  const fs::path dir = output_root(out);
  fs::create_directories(dir);
  const auto records = mobo::run(cfg);

  const auto rec_path = mobo::record_path(dir, cfg);
  mobo::atomic_write_text(rec_path, mobo::records_to_jsonl(records));
  mobo::atomic_write_text(mobo::timing_path(rec_path), mobo::timings_to_jsonl(records));

  mobo::ManifestEntry entry;
  entry.config_hash = mobo::config_hash(cfg);
  entry.seed = cfg.seed;
  entry.problem = mobo::to_string(cfg.problem.name);
  entry.num_objectives = cfg.problem.num_objectives;
  entry.num_variables = cfg.problem.num_variables;
  entry.algorithm = mobo::to_string(cfg.algorithm);
  entry.path = rec_path.filename().string();
  entry.status = "ok";
  mobo::write_manifest(dir, {entry});

  int fallbacks = 0;
  double fit_s = 0.0, acq_s = 0.0;
  for (const auto& r : records) {
    fallbacks += r.fallback ? 1 : 0;
    fit_s += r.wall_time_model_fit;
    acq_s += r.wall_time_acquisition;
  }
  std::cout << "run " << cfg.run_id() << ": " << records.size() << " iterations, final hv "
            << fmt(records.empty() ? 0.0 : records.back().hypervolume_so_far) << ", "
            << fallbacks << " fallbacks, fit " << fmt(fit_s) << " s, acquisition "
            << fmt(acq_s) << " s\n"
            << "records: " << rec_path.string() << "\n";
  return 0;
}

int cmd_batch(const std::string& config_path, int jobs, bool resume, const std::string& out) {
  const mobo::BatchConfig bc = mobo::load_batch_config(config_path);
  const auto configs = bc.expand();
  const fs::path root = output_root(out);

  // one sub-directory per problem instance keeps each campaign aggregable
  std::vector<fs::path> dirs;
  bool any_failed = false;
  for (const auto& p : bc.problems) {
    std::vector<mobo::RunConfig> group;
    for (const auto& cfg : configs)
      if (cfg.problem.id() == p.id()) group.push_back(cfg);
    const fs::path dir = bc.problems.size() == 1 ? root : root / p.id();
    const auto outcomes = mobo::run_batch(group, dir, jobs, resume);
    for (const auto& o : outcomes) {
      std::cout << (o.ok ? "ok     " : "FAILED ") << o.run_id;
      if (!o.ok) std::cout << "  (" << o.error << ")";
      std::cout << "\n";
      any_failed = any_failed || !o.ok;
    }
    dirs.push_back(dir);
  }
  for (const auto& d : dirs) std::cout << "results: " << d.string() << "\n";
  return any_failed ? 1 : 0;
}

int cmd_report(const std::string& dir) {
  if (!fs::exists(dir)) throw mobo::ConfigError("results directory does not exist: " + dir);
  const auto agg = mobo::aggregate(dir);

  std::ostringstream hv;
  hv << "algorithm,eval_index,hv_median,hv_lo,hv_hi\n";
  for (const auto& r : agg.hv_rows)
    hv << r.algorithm << ',' << r.eval_index << ',' << fmt(r.hv_median) << ','
       << fmt(r.hv_lo) << ',' << fmt(r.hv_hi) << '\n';

  std::ostringstream timing;
  timing << "algorithm,median_fit_s,median_acq_s\n";
  for (const auto& r : agg.timing_rows)
    timing << r.algorithm << ',' << fmt(r.median_fit_s) << ',' << fmt(r.median_acq_s) << '\n';

  mobo::atomic_write_text(fs::path(dir) / "aggregate_hv.csv", hv.str());
  mobo::atomic_write_text(fs::path(dir) / "aggregate_timing.csv", timing.str());
  std::cout << hv.str() << "\n" << timing.str();
  return 0;
}

int cmd_dist_check(const std::string& means_s, const std::string& stds_s,
                   const std::string& weights_s, int samples, std::uint64_t seed,
                   const std::string& out) {
  const auto means = parse_csv_doubles(means_s);
  const auto stds = parse_csv_doubles(stds_s);
  const auto weights = parse_csv_doubles(weights_s);
  if (means.empty() || means.size() != stds.size() || means.size() != weights.size())
    throw mobo::ConfigError("means, stds and weights must have equal non-zero length");

  const auto m = static_cast<Eigen::Index>(means.size());
  Eigen::VectorXd mu(m), sg(m), w(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    mu[i] = means[static_cast<size_t>(i)];
    sg[i] = stds[static_cast<size_t>(i)];
    w[i] = weights[static_cast<size_t>(i)];
  }
  const auto sp =
      mobo::ScalarisedPosterior::from_predictions(mu, sg, w, Eigen::VectorXd::Zero(m));

  mobo::Rng rng(seed);
  const auto report = mobo::gaussianity_report(sp, samples, rng);
  for (const auto& [key, value] : report.to_flat_kv())
    std::cout << key << "=" << fmt(value) << "\n";

  const auto laplace = mobo::laplace_fit(sp);
  std::cout << "laplace_mode=" << fmt(laplace.mode) << "\n"
            << "laplace_precision=" << fmt(laplace.precision) << "\n";

  // density curves for plotting; the wide upper margin covers the slow
  // Gumbel tail so each curve integrates to ~1 on the grid
  const double s_max = sp.scaled_stds.maxCoeff();
  const double lo = sp.shifted_means.minCoeff() - 10.0 * s_max;
  const double hi = sp.shifted_means.maxCoeff() + 14.0 * s_max;
  const int points = 2001;
  std::ostringstream table;
  table << "g,exact_pdf,gumbel_pdf,laplace_pdf\n";
  for (int i = 0; i < points; ++i) {
    const double g = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    table << fmt(g) << ',' << fmt(mobo::exact_pdf(sp, g)) << ','
          << fmt(mobo::gumbel_pdf(report.gumbel, g)) << ','
          << fmt(mobo::laplace_pdf(laplace, g)) << '\n';
  }
  const fs::path dir = output_root(out);
  fs::create_directories(dir);
  const fs::path table_path = dir / "dist_check_density.csv";
  mobo::atomic_write_text(table_path, table.str());
  std::cout << "density_table=" << table_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective Bayesian optimisation benchmark harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir, report_dir;
  std::vector<std::string> overrides;
  int jobs = 1;
  bool resume = false;
  std::string means_s, stds_s, weights_s;
  int samples = 100000;
  std::uint64_t dist_seed = 0;

  auto* run_cmd = app.add_subcommand("run", "Execute one optimisation run");
  run_cmd->add_option("--config", config_path, "JSON run configuration")->required();
  run_cmd->add_option("--set", overrides, "key=value override, may repeat");
  run_cmd->add_option("--out", out_dir, "output directory (default $MOBO_OUTPUT_ROOT or ./results)");

  auto* batch_cmd = app.add_subcommand("batch", "Execute a campaign grid");
  batch_cmd->add_option("--config", config_path, "JSON batch configuration")->required();
  batch_cmd->add_option("--jobs", jobs, "parallel runs")->default_val(1);
  batch_cmd->add_flag("--resume", resume, "skip runs whose result file exists");
  batch_cmd->add_option("--out", out_dir, "output directory");

  auto* report_cmd = app.add_subcommand("report", "Aggregate a results directory");
  report_cmd->add_option("--dir", report_dir, "results directory")->required();

  auto* dist_cmd = app.add_subcommand("dist-check", "Scalarised-distribution diagnostics");
  dist_cmd->add_option("--means", means_s, "comma-separated objective means")->required();
  dist_cmd->add_option("--stds", stds_s, "comma-separated objective stds")->required();
  dist_cmd->add_option("--weights", weights_s, "comma-separated weights")->required();
  dist_cmd->add_option("--samples", samples, "sample count")->default_val(100000);
  dist_cmd->add_option("--seed", dist_seed, "sampling seed")->default_val(0);
  dist_cmd->add_option("--out", out_dir, "output directory for the density table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, overrides, out_dir);
    if (batch_cmd->parsed()) return cmd_batch(config_path, jobs, resume, out_dir);
    if (report_cmd->parsed()) return cmd_report(report_dir);
    if (dist_cmd->parsed())
      return cmd_dist_check(means_s, stds_s, weights_s, samples, dist_seed, out_dir);
  } catch (const mobo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
