#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace inflow {

/// Persisted experiment output: named series plus verdicts and provenance.
/// Serialization is stable (sorted keys, fixed float formatting) so that
/// identical configurations reproduce byte-identical files apart from the
/// timestamp entry.
struct SolveReport {
  nlohmann::json meta;  // module, config echo, config_hash, code_version, seed, timestamp
  std::vector<double> time_axis;
  std::map<std::string, std::vector<double>> series;
  nlohmann::json verdicts = nlohmann::json::array();

  void add_verdict(const std::string& id, bool pass, const nlohmann::json& details);
  bool all_pass() const;

  nlohmann::json to_json() const;
  static SolveReport from_json(const nlohmann::json& j);
};

/// FNV-1a over the canonical dump; stable across runs and platforms.
std::uint64_t config_hash(const nlohmann::json& config);

/// Write-to-temporary-then-rename; partial files are never observable.
void write_file_atomic(const std::string& path, const std::string& contents);

void write_report(const SolveReport& rep, const std::string& dir, const std::string& stem);
SolveReport read_report(const std::string& json_path);

std::string render_csv(const SolveReport& rep);

struct CompareResult {
  nlohmann::json summary;
  double max_rel_diff = 0.0;
  bool schema_match = true;
};

CompareResult compare_reports(const SolveReport& a, const SolveReport& b);

}  // namespace inflow
