// One PASS/FAIL line per acceptance criterion; failing checks are listed
// underneath their criterion. Exit status is nonzero if any criterion fails.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "heisgeo/verify.hpp"

int main(int argc, char** argv) {
  heisgeo::verify::VerifyOptions options;
  if (const char* env = std::getenv("HEISGEO_SEED")) options.seed = std::stoull(env, nullptr, 0);
  for (int i = 1; i < argc; ++i) options.only.push_back(std::atoi(argv[i]));

  const auto checks = heisgeo::verify::run_acceptance(options);
  bool all = true;
  for (const auto& s : heisgeo::verify::summarize(checks)) {
    std::printf("%s  criterion %d: %s (%zu checks, %.2f s)\n", s.pass ? "PASS" : "FAIL", s.criterion, s.title.c_str(),
                s.checks, s.seconds);
    if (!s.pass) {
      all = false;
      for (const auto& c : checks)
        if (c.criterion == s.criterion && !c.pass)
          std::printf("      failed: %s (expected %s, got %.12g)\n", c.name.c_str(), c.expected.c_str(), c.got);
    }
  }
  return all ? 0 : 1;
}
