// Acceptance gate: one pass/fail line per criterion; nonzero exit on failure.
// Run a criterion subset with:  acceptance [--only 1,2,...] [--out dir]

#include <cstdio>
#include <cstring>
#include <set>
#include <sstream>
#include <string>

#include "inflow/acceptance.hpp"

int main(int argc, char** argv) {
  std::set<int> only;
  std::string out_dir = "acceptance_out";
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string tok;
      while (std::getline(ss, tok, ','))
        if (!tok.empty()) only.insert(std::stoi(tok));
    } else if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
      out_dir = argv[++i];
    }
  }
  auto results = inflow::run_acceptance(only, out_dir);
  inflow::print_results(results);
  int failures = 0;
  for (const auto& r : results) failures += r.pass ? 0 : 1;
  std::printf("%zu criteria, %d failed\n", results.size(), failures);
  return failures == 0 ? 0 : 1;
}
