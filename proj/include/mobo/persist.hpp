#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mobo/runner.hpp"

namespace mobo {

/// Writes via a temporary file in the same directory plus rename, so readers
/// never observe a partial file.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

/// Result files are line-delimited JSON, one record per iteration, holding
/// only the deterministic fields. Wall times go to a sidecar so identical
/// (config, seed) runs produce bit-identical result files.
std::string records_to_jsonl(const std::vector<RunRecord>& records);
std::string timings_to_jsonl(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_jsonl(const std::filesystem::path& path,
                                          const std::filesystem::path& timings_path = {});

std::filesystem::path record_path(const std::filesystem::path& dir, const RunConfig& config);
std::filesystem::path timing_path(const std::filesystem::path& record_path);

struct ManifestEntry {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string problem;
  int num_objectives = 0;
  int num_variables = 0;
  std::string algorithm;
  std::string path;  // relative to the results directory
  std::string status;  // "ok" or "failed: <reason>"
};

void write_manifest(const std::filesystem::path& dir, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& dir);

}  // namespace mobo
