#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Self-check suite behind the `verify` subcommand: structural invariants of
// the phase-space layer, the decoder moment identities, and agreement
// between the analytic and Monte Carlo filtration engines.

namespace cvqec {

struct VerifyGroup {
  std::string name;
  bool passed = false;
  std::string detail;  // worst deviation or first failure description
};

std::vector<VerifyGroup> run_verification(std::uint64_t seed = 12345,
                                          long mc_samples = 20000);

bool all_passed(const std::vector<VerifyGroup>& groups);

}  // namespace cvqec
