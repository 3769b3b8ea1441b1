// Acceptance gate: runs every criterion at full scale and prints one
// pass/fail line each. Exit code 3 when any criterion fails.

#include <cstring>
#include <iostream>

#include "meanders/acceptance.hpp"

int main(int argc, char** argv) {
  meanders::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
    if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) opt.threads = std::atoi(argv[++i]);
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
      opt.seed = static_cast<std::uint64_t>(std::atoll(argv[++i]));
  }
  const auto report = meanders::verify_acceptance(opt);
  return report.all_pass() ? 0 : 3;
}
