#pragma once

#include "logahoric/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace logahoric::accept {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0;  // wall time; kept out of the canonical report
  double budget_seconds = 0;
  io::Json details;
};

inline constexpr int kCriteria = 11;

// Each criterion draws from its own generator seeded by (seed, id), so the
// result does not depend on the thread count.
CriterionResult run_criterion(int id, std::uint64_t seed);

// Runs the selected criteria (all when empty) on up to `threads` workers and
// returns them in id order.
std::vector<CriterionResult> run_suite(std::uint64_t seed, int threads, const std::vector<int>& only = {});

// LOGAHORIC_THREADS, clamped to [1, hardware concurrency]; 1 when unset.
int threads_from_env();

// One JSON line per criterion; timings only when requested.
io::Json report_line(const CriterionResult& r, bool with_timing);

}  // namespace logahoric::accept
