#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "inflow/acceptance.hpp"
#include "inflow/errors.hpp"
#include "inflow/harness.hpp"
#include "inflow/presets.hpp"

namespace {

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw inflow::ConfigError("cannot open config: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

int run_module(const std::string& module, const std::string& config_path,
               const std::string& out_dir, std::uint64_t seed) {
  nlohmann::json cfg = load_config(config_path);
  inflow::SolveReport rep = inflow::run_experiment(module, cfg, seed);
  inflow::write_report(rep, out_dir, module);
  bool ok = rep.all_pass();
  std::printf("%s: %s (%zu verdicts) -> %s/%s.json\n", module.c_str(), ok ? "pass" : "FAIL",
              rep.verdicts.size(), out_dir.c_str(), module.c_str());
  for (const auto& v : rep.verdicts)
    std::printf("  [%s] %s\n", v.value("pass", false) ? "pass" : "FAIL",
                v.value("id", std::string("?")).c_str());
  return ok ? 0 : 1;
}

int run_trace(const std::string& config_path, const std::string& out_dir) {
  nlohmann::json cfg = load_config(config_path);
  nlohmann::json sj = cfg.value("speed", nlohmann::json{{"name", "unit"}});
  inflow::SpeedField1D speed =
      inflow::presets::speed(sj.value("name", "unit"), sj.value("a", 1.0), sj.value("b", 0.0));
  const double t = cfg.value("t", 1.0);
  const double x = cfg.value("x", 0.0);
  const int samples = cfg.value("samples", 65);

  inflow::BackwardTrace bt = inflow::backward_exit_with_path(speed, t, x);
  std::ostringstream csv;
  csv << "tau,x\n";
  char buf[80];
  for (int k = 0; k < samples; ++k) {
    double s = bt.s_exit * k / std::max(1, samples - 1);
    double xs = bt.path.steps.empty() ? x : bt.path.at(s)[0];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t - s, xs);
    csv << buf;
  }
  std::filesystem::create_directories(out_dir);
  inflow::write_file_atomic(out_dir + "/trace.csv", csv.str());
  std::printf("trace: region=%s t_b=%.12g x_b=%.12g -> %s/trace.csv\n",
              bt.exit.region == inflow::Region::QPlus
                  ? "interior-start"
                  : (bt.exit.region == inflow::Region::QMinus ? "inflow-start" : "corner"),
              bt.exit.t_b, bt.exit.x_b, out_dir.c_str());
  return 0;
}

int run_compare(const std::string& a, const std::string& b, const std::string& out_dir) {
  inflow::SolveReport ra = inflow::read_report(a);
  inflow::SolveReport rb = inflow::read_report(b);
  inflow::CompareResult diff = inflow::compare_reports(ra, rb);
  std::printf("%s\n", diff.summary.dump(2).c_str());
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    inflow::write_file_atomic(out_dir + "/compare.json", diff.summary.dump(2) + "\n");
  }
  return diff.schema_match ? 0 : 2;
}

std::set<int> parse_only(const std::string& only) {
  std::set<int> out;
  std::stringstream ss(only);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.insert(std::stoi(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inflowlab: inflow-boundary transport and pipe-flow laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", only, cmp_a, cmp_b;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config)
      sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed recorded in the report");
  };

  for (const char* m : {"transport1d", "hyp1d", "pipe3d", "divcurl"})
    add_common(app.add_subcommand(m), true);
  add_common(app.add_subcommand("trace", "emit characteristic samples as CSV"), true);
  auto* cmp = app.add_subcommand("compare", "diff two reports");
  cmp->add_option("--a", cmp_a, "first report json")->required();
  cmp->add_option("--b", cmp_b, "second report json")->required();
  cmp->add_option("--out", out_dir, "output directory");
  auto* suite = app.add_subcommand("suite", "run the acceptance presets");
  suite->add_option("--only", only, "comma-separated criterion ids");
  suite->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const char* m : {"transport1d", "hyp1d", "pipe3d", "divcurl"})
      if (app.got_subcommand(m)) return run_module(m, config_path, out_dir, seed);
    if (app.got_subcommand("trace")) return run_trace(config_path, out_dir);
    if (app.got_subcommand("compare")) return run_compare(cmp_a, cmp_b, out_dir);
    if (app.got_subcommand("suite")) {
      auto results = inflow::run_acceptance(parse_only(only), out_dir);
      inflow::print_results(results);
      for (const auto& r : results)
        if (!r.pass) return 1;
      return 0;
    }
  } catch (const inflow::ConfigError& e) {
    std::fprintf(stderr, "{\"error\":\"config\",\"what\":\"%s\"}\n", e.what());
    return 2;
  } catch (const inflow::PreconditionError& e) {
    std::fprintf(stderr, "{\"error\":\"config\",\"what\":\"%s\"}\n", e.what());
    return 2;
  } catch (const inflow::SolverDivergenceError& e) {
    std::fprintf(stderr, "{\"error\":\"divergence\",\"what\":\"%s\"}\n", e.what());
    return 3;
  } catch (const inflow::StabilityBudgetError& e) {
    std::fprintf(stderr, "{\"error\":\"divergence\",\"what\":\"%s\"}\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "{\"error\":\"internal\",\"what\":\"%s\"}\n", e.what());
    return 3;
  }
  return 2;
}
