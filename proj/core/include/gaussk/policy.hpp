#pragma once

#include <string>

namespace gaussk {

/// Global numeric policy. Structural invariants are checked at an absolute
/// tolerance on unit-scaled matrices; spectral decompositions lose roughly
/// two digits, hence the looser residual bound.
struct NumericPolicy {
  double structure_tol = 1e-10;     // invariant residuals (J^2+1, compatibility, ...)
  double decomposition_tol = 1e-9;  // Cartan / block-form / round-trip residuals
  double branch_tol = 1e-8;         // distance to a matrix-function branch cut
  double series_threshold = 1e-4;   // spectral radius below which series kick in
  double condition_limit = 1e10;    // eigenvector condition bound for matrix functions
  double clip_band = 1e-9;          // eigenvalue clipping band at branch ends
  int boson_cutoff = 14;            // default per-mode Fock truncation
  double memory_budget_mb = 1536.0; // oracle dense-matrix budget

  std::string describe() const;
};

/// Mutable process-wide policy. Loaded from $GAUSSK_NUM_POLICY (a JSON file)
/// on first access when the variable is set.
NumericPolicy& policy();

/// Replace the global policy (CLI overrides).
void set_policy(const NumericPolicy& p);

/// Parse a policy JSON file; unknown keys are rejected.
NumericPolicy load_policy_file(const std::string& path);

}  // namespace gaussk
