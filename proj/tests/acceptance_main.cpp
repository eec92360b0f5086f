// Runs the acceptance suite and prints one pass/fail line per criterion.
#include <cstring>
#include <iostream>
#include <string>

#include "stacked/selftest.hpp"

int main(int argc, char** argv) {
  stacked::SelftestOptions opts;
  opts.full = true;
  const char* env = std::getenv("STACKED_BASES_SEED");
  if (env) opts.seed = std::strtoull(env, nullptr, 10);
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--scope" && i + 1 < argc) {
      opts.full = std::string(argv[++i]) == "full";
    } else if (a == "--seed" && i + 1 < argc) {
      opts.seed = std::strtoull(argv[++i], nullptr, 10);
    }
  }
  bool ok = stacked::run_acceptance(opts, std::cout);
  std::cout << (ok ? "acceptance: ALL PASS" : "acceptance: FAILURES") << "\n";
  return ok ? 0 : 1;
}
