#include "mobo/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace mobo {

namespace {

using nlohmann::json;

const json& require(const json& j, const std::string& field, const std::string& scope) {
  const auto it = j.find(field);
  if (it == j.end())
    throw ConfigError("missing required field: " + (scope.empty() ? field : scope + "." + field));
  return *it;
}

template <typename T>
T get_or(const json& j, const std::string& field, const std::string& scope, T fallback) {
  const auto it = j.find(field);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("invalid value for field: " + (scope.empty() ? field : scope + "." + field));
  }
}

template <typename T>
T get_required(const json& j, const std::string& field, const std::string& scope) {
  const json& v = require(j, field, scope);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("invalid value for field: " + (scope.empty() ? field : scope + "." + field));
  }
}

ProblemSpec problem_from_json(const json& j) {
  ProblemSpec p;
  try {
    p.name = problem_from_string(get_required<std::string>(j, "name", "problem"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem.name: ") + e.what());
  }
  p.num_objectives = get_required<int>(j, "num_objectives", "problem");
  p.num_variables = get_required<int>(j, "num_variables", "problem");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
  return p;
}

GaConfig ga_from_json(const json& j, const GaConfig& defaults) {
  GaConfig g = defaults;
  g.population = get_or<int>(j, "population", "ga", g.population);
  g.generations = get_or<int>(j, "generations", "ga", g.generations);
  g.crossover_prob = get_or<double>(j, "crossover_prob", "ga", g.crossover_prob);
  g.mutation_prob = get_or<double>(j, "mutation_prob", "ga", g.mutation_prob);
  g.sbx_eta = get_or<double>(j, "sbx_eta", "ga", g.sbx_eta);
  g.pm_eta = get_or<double>(j, "pm_eta", "ga", g.pm_eta);
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("ga: ") + e.what());
  }
  return g;
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  cfg.problem = problem_from_json(require(j, "problem", ""));
  try {
    cfg.algorithm = algorithm_from_string(get_required<std::string>(j, "algorithm", ""));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("algorithm: ") + e.what());
  }
  cfg.init_size = get_or<int>(j, "init_size", "", 0);
  cfg.budget = get_or<int>(j, "budget", "", 0);
  cfg.seed = get_or<std::uint64_t>(j, "seed", "", 0);
  if (j.contains("ga")) cfg.ga = ga_from_json(j.at("ga"), cfg.ga);
  if (j.contains("mc_counts")) {
    const json& mc = j.at("mc_counts");
    cfg.mc_counts.search = get_or<int>(mc, "search", "mc_counts", cfg.mc_counts.search);
    cfg.mc_counts.report = get_or<int>(mc, "report", "mc_counts", cfg.mc_counts.report);
  }
  cfg.rho = get_or<double>(j, "rho", "", cfg.rho);
  cfg.gumbel_sample_count =
      get_or<int>(j, "gumbel_sample_count", "", cfg.gumbel_sample_count);
  try {
    cfg.finalise();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

nlohmann::json run_config_to_json(const RunConfig& config) {
  json j;
  j["problem"] = {{"name", to_string(config.problem.name)},
                  {"num_objectives", config.problem.num_objectives},
                  {"num_variables", config.problem.num_variables}};
  j["algorithm"] = to_string(config.algorithm);
  j["init_size"] = config.init_size;
  j["budget"] = config.budget;
  j["seed"] = config.seed;
  j["ga"] = {{"population", config.ga.population},
             {"generations", config.ga.generations},
             {"crossover_prob", config.ga.crossover_prob},
             {"mutation_prob", config.ga.mutation_prob},
             {"sbx_eta", config.ga.sbx_eta},
             {"pm_eta", config.ga.pm_eta}};
  j["mc_counts"] = {{"search", config.mc_counts.search}, {"report", config.mc_counts.report}};
  j["rho"] = config.rho;
  j["gumbel_sample_count"] = config.gumbel_sample_count;
  return j;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return run_config_from_json(j);
}

void apply_override(nlohmann::json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must be key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  json* node = &j;
  size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError("bad override key: " + key);
    if (dot == std::string::npos) {
      json parsed;
      try {
        parsed = json::parse(value);
      } catch (const json::exception&) {
        parsed = value;  // unquoted strings pass through verbatim
      }
      (*node)[part] = parsed;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

std::vector<RunConfig> BatchConfig::expand() const {
  std::vector<RunConfig> out;
  for (const auto& p : problems)
    for (const auto a : algorithms)
      for (const auto s : seeds) {
        RunConfig cfg = base;
        cfg.problem = p;
        cfg.algorithm = a;
        cfg.seed = s;
        out.push_back(cfg);
      }
  return out;
}

BatchConfig batch_config_from_json(const nlohmann::json& j) {
  BatchConfig bc;
  const json& problems = require(j, "problems", "");
  if (!problems.is_array() || problems.empty())
    throw ConfigError("problems must be a non-empty array");
  for (const auto& p : problems) bc.problems.push_back(problem_from_json(p));

  const json& algorithms = require(j, "algorithms", "");
  if (!algorithms.is_array() || algorithms.empty())
    throw ConfigError("algorithms must be a non-empty array");
  for (const auto& a : algorithms) {
    try {
      bc.algorithms.push_back(algorithm_from_string(a.get<std::string>()));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("algorithms: ") + e.what());
    }
  }

  const json& seeds = require(j, "seeds", "");
  if (!seeds.is_array() || seeds.empty()) throw ConfigError("seeds must be a non-empty array");
  for (const auto& s : seeds) bc.seeds.push_back(s.get<std::uint64_t>());

  // base settings reuse the single-run schema with placeholder identity fields
  json base = j;
  base.erase("problems");
  base.erase("algorithms");
  base.erase("seeds");
  base["problem"] = {{"name", to_string(bc.problems.front().name)},
                     {"num_objectives", bc.problems.front().num_objectives},
                     {"num_variables", bc.problems.front().num_variables}};
  base["algorithm"] = to_string(bc.algorithms.front());
  base["seed"] = bc.seeds.front();
  // sizes are grid-dependent; keep explicit values only if the user set them
  if (!j.contains("init_size")) base["init_size"] = 0;
  if (!j.contains("budget")) base["budget"] = 0;
  bc.base = run_config_from_json(base);
  if (!j.contains("init_size")) bc.base.init_size = 0;
  if (!j.contains("budget")) bc.base.budget = 0;
  return bc;
}

BatchConfig load_batch_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return batch_config_from_json(j);
}

std::string config_hash(const RunConfig& config) {
  const std::string dump = run_config_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace mobo
