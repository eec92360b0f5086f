#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace stacked {

struct SelftestOptions {
  bool full = true;        // full: acceptance case counts; fast: reduced
  std::uint64_t seed = 1;
};

// Runs the acceptance suite, one summary line per criterion on `out`.
// Returns true iff every criterion passed. When `reports` is given, the
// timing-free machine report of each criterion is appended to it (these are
// byte-identical across runs with the same options).
bool run_acceptance(const SelftestOptions& opts, std::ostream& out,
                    std::vector<std::string>* reports = nullptr);

}  // namespace stacked
