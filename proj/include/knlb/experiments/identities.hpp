#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace knlb::experiments {

// One row of the identity table. `score` is the worst normalized deviation over
// the suite's cases (|error| / tolerance, or |z| / 5 for Monte Carlo checks), so
// the suite passes iff score <= 1.
struct IdentityCheck {
  std::string suite;
  bool passed;
  double score;
  std::size_t cases;
  std::string worst_case;
};

struct IdentityOptions {
  bool quick = false;
  std::uint64_t seed = 20240611;
};

std::vector<IdentityCheck> run_identity_suites(const IdentityOptions& opts = {});

void print_identity_table(std::ostream& os, std::span<const IdentityCheck> checks);

}  // namespace knlb::experiments
