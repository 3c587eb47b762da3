// Acceptance run: one PASS/FAIL line per criterion, then the failing
// checks. Exit status is nonzero when any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "swipt/validate.hpp"

int main(int argc, char** argv) {
  swipt::ValidationOptions opt;
  opt.full = true;
  if (argc > 1) opt.threads = std::atoi(argv[1]);

  const char* titles[] = {
      "1 special-function kernel",
      "2 closed form vs Monte-Carlo",
      "3 training approximation quality",
      "4 qualitative rate orderings",
      "5 distributional property suite",
      "6 energy-budget identities",
  };
  const auto report = swipt::run_validate(opt);
  for (std::size_t i = 0; i < report.groups.size(); ++i) {
    const auto& g = report.groups[i];
    int ok = 0, counted = 0;
    for (const auto& c : g.checks) {
      if (!c.counted) continue;
      ++counted;
      ok += c.passed;
    }
    std::printf("criterion %s: %s (%d/%d checks, %.1f s)\n", titles[i], g.passed ? "PASS" : "FAIL",
                ok, counted, g.seconds);
  }
  for (const auto& g : report.groups) {
    for (const auto& c : g.checks) {
      if (!c.passed || !c.counted) {
        std::printf("  %s %s: %s: %s\n", c.counted ? "[FAIL]" : "[info]", g.name.c_str(),
                    c.name.c_str(), c.detail.c_str());
      }
    }
  }
  return report.passed() ? EXIT_SUCCESS : EXIT_FAILURE;
}
