#include "inflow/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "inflow/errors.hpp"

namespace inflow {

void SolveReport::add_verdict(const std::string& id, bool pass, const nlohmann::json& details) {
  nlohmann::json v = details;
  v["id"] = id;
  v["pass"] = pass;
  verdicts.push_back(v);
}

bool SolveReport::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.value("pass", false)) return false;
  return true;
}

nlohmann::json SolveReport::to_json() const {
  nlohmann::json j;
  j["meta"] = meta;
  j["time_axis"] = time_axis;
  j["series"] = series;
  j["verdicts"] = verdicts;
  return j;
}

SolveReport SolveReport::from_json(const nlohmann::json& j) {
  SolveReport r;
  r.meta = j.value("meta", nlohmann::json::object());
  r.time_axis = j.value("time_axis", std::vector<double>{});
  if (j.contains("series"))
    for (auto it = j["series"].begin(); it != j["series"].end(); ++it)
      r.series[it.key()] = it.value().get<std::vector<double>>();
  r.verdicts = j.value("verdicts", nlohmann::json::array());
  return r;
}

std::uint64_t config_hash(const nlohmann::json& config) {
  const std::string s = config.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open for writing: " + tmp);
    out << contents;
  }
  std::filesystem::rename(tmp, path);
}

void write_report(const SolveReport& rep, const std::string& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir + "/" + stem + ".json", rep.to_json().dump(2) + "\n");
  write_file_atomic(dir + "/" + stem + ".csv", render_csv(rep));
}

SolveReport read_report(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw ConfigError("cannot read report: " + json_path);
  nlohmann::json j;
  in >> j;
  return SolveReport::from_json(j);
}

std::string render_csv(const SolveReport& rep) {
  std::string out = "t";
  for (const auto& [name, vals] : rep.series) {
    out += ",";
    out += name;
  }
  out += "\n";
  char buf[64];
  std::size_t rows = rep.time_axis.size();
  for (const auto& [name, vals] : rep.series) rows = std::max(rows, vals.size());
  for (std::size_t r = 0; r < rows; ++r) {
    if (r < rep.time_axis.size()) {
      std::snprintf(buf, sizeof buf, "%.17g", rep.time_axis[r]);
      out += buf;
    }
    for (const auto& [name, vals] : rep.series) {
      out += ",";
      if (r < vals.size()) {
        std::snprintf(buf, sizeof buf, "%.17g", vals[r]);
        out += buf;
      }
    }
    out += "\n";
  }
  return out;
}

CompareResult compare_reports(const SolveReport& a, const SolveReport& b) {
  CompareResult res;
  nlohmann::json per_series = nlohmann::json::object();
  for (const auto& [name, va] : a.series) {
    auto it = b.series.find(name);
    if (it == b.series.end() || it->second.size() != va.size()) {
      res.schema_match = false;
      per_series[name] = "missing-or-length-mismatch";
      continue;
    }
    double scale = 1e-300;
    for (double x : va) scale = std::max(scale, std::abs(x));
    for (double x : it->second) scale = std::max(scale, std::abs(x));
    double worst = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i)
      worst = std::max(worst, std::abs(va[i] - it->second[i]));
    double rel = worst / scale;
    per_series[name] = {{"max_abs_diff", worst}, {"max_rel_diff", rel}};
    res.max_rel_diff = std::max(res.max_rel_diff, rel);
  }
  for (const auto& [name, vb] : b.series)
    if (!a.series.count(name)) {
      res.schema_match = false;
      per_series[name] = "only-in-b";
    }

  nlohmann::json verdict_delta = nlohmann::json::array();
  for (const auto& va : a.verdicts)
    for (const auto& vb : b.verdicts)
      if (va.value("id", "") == vb.value("id", "") &&
          va.value("pass", false) != vb.value("pass", false))
        verdict_delta.push_back(va.value("id", ""));

  res.summary["series"] = per_series;
  res.summary["verdict_deltas"] = verdict_delta;
  res.summary["max_rel_diff"] = res.max_rel_diff;
  res.summary["schema_match"] = res.schema_match;
  return res;
}

}  // namespace inflow
