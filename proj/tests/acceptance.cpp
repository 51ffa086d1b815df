#include "logahoric/acceptance.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

using namespace logahoric;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 42;
  auto results = accept::run_suite(seed, accept::threads_from_env());
  int failed = 0;
  for (const auto& r : results) {
    std::printf("criterion %d: %s %s (%.2fs, budget %.0fs)\n", r.id, r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.seconds, r.budget_seconds);
    if (!r.pass) std::printf("  details: %s\n", r.details.dump().c_str());
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed (seed %llu)\n", static_cast<int>(results.size()) - failed, results.size(),
              static_cast<unsigned long long>(seed));
  return failed == 0 ? 0 : 1;
}
