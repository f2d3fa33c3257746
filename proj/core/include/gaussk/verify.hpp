#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gaussk {

struct VerifyOptions {
  int max_modes = 4;    // fermionic oracle size cap (N <= 12 hard limit)
  int cutoff = 0;       // bosonic per-mode cutoff; 0 = policy default
  uint64_t seed = 42;
};

/// Deterministic oracle-certification suite: every phase-space formula is
/// checked against the explicit Hilbert-space backend on seeded instances.
struct VerifyReport {
  std::vector<std::string> lines;
  bool passed = true;

  std::string text() const;
};

VerifyReport run_verification(const VerifyOptions& opt);

}  // namespace gaussk
