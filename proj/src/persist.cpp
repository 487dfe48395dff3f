#include "mobo/persist.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mobo/config.hpp"

namespace mobo {

namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
  Eigen::VectorXd v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  return v;
}

}  // namespace

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string records_to_jsonl(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  for (const auto& r : records) {
    json line;
    line["iteration"] = r.iteration;
    line["chosen_x"] = vector_to_json(r.chosen_x);
    line["objectives"] = vector_to_json(r.objectives);
    line["scalarised_value"] = r.scalarised_value;
    line["hypervolume_so_far"] = r.hypervolume_so_far;
    line["weight"] = vector_to_json(r.weight);
    line["fallback"] = r.fallback;
    out << line.dump() << '\n';
  }
  return out.str();
}

std::string timings_to_jsonl(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  for (const auto& r : records) {
    json line;
    line["iteration"] = r.iteration;
    line["wall_time_model_fit"] = r.wall_time_model_fit;
    line["wall_time_acquisition"] = r.wall_time_acquisition;
    out << line.dump() << '\n';
  }
  return out.str();
}

std::vector<RunRecord> records_from_jsonl(const std::filesystem::path& path,
                                          const std::filesystem::path& timings_path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open result file: " + path.string());
  std::vector<RunRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    RunRecord r;
    r.iteration = j.at("iteration").get<int>();
    r.chosen_x = vector_from_json(j.at("chosen_x"));
    r.objectives = vector_from_json(j.at("objectives"));
    r.scalarised_value = j.at("scalarised_value").get<double>();
    r.hypervolume_so_far = j.at("hypervolume_so_far").get<double>();
    r.weight = vector_from_json(j.at("weight"));
    r.fallback = j.at("fallback").get<bool>();
    records.push_back(std::move(r));
  }
  if (!timings_path.empty() && std::filesystem::exists(timings_path)) {
    std::ifstream tin(timings_path);
    size_t i = 0;
    while (std::getline(tin, line) && i < records.size()) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      records[i].wall_time_model_fit = j.at("wall_time_model_fit").get<double>();
      records[i].wall_time_acquisition = j.at("wall_time_acquisition").get<double>();
      ++i;
    }
  }
  return records;
}

std::filesystem::path record_path(const std::filesystem::path& dir, const RunConfig& config) {
  return dir / (config.run_id() + ".jsonl");
}

std::filesystem::path timing_path(const std::filesystem::path& record_path) {
  auto p = record_path;
  p.replace_extension();  // drop .jsonl
  p += ".timings.jsonl";
  return p;
}

void write_manifest(const std::filesystem::path& dir, const std::vector<ManifestEntry>& entries) {
  json j;
  j["runs"] = json::array();
  for (const auto& e : entries) {
    json run;
    run["config_hash"] = e.config_hash;
    run["seed"] = e.seed;
    run["problem"] = e.problem;
    run["num_objectives"] = e.num_objectives;
    run["num_variables"] = e.num_variables;
    run["algorithm"] = e.algorithm;
    run["path"] = e.path;
    run["status"] = e.status;
    j["runs"].push_back(run);
  }
  atomic_write_text(dir / "manifest.json", j.dump(2) + "\n");
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("no manifest.json in " + dir.string());
  json j;
  in >> j;
  std::vector<ManifestEntry> entries;
  for (const auto& run : j.at("runs")) {
    ManifestEntry e;
    e.config_hash = run.at("config_hash").get<std::string>();
    e.seed = run.at("seed").get<std::uint64_t>();
    e.problem = run.at("problem").get<std::string>();
    e.num_objectives = run.at("num_objectives").get<int>();
    e.num_variables = run.at("num_variables").get<int>();
    e.algorithm = run.at("algorithm").get<std::string>();
    e.path = run.at("path").get<std::string>();
    e.status = run.at("status").get<std::string>();
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace mobo
