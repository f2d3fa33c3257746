#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <vector>

#include "gaussk/types.hpp"

namespace gaussk {

struct PureGaussianState;
struct MixedGaussianState;
struct QuadraticHamiltonian;

using SpCMat = Eigen::SparseMatrix<cplx>;

/// Explicit Hilbert-space representation of the 2N operators xi^a on a full
/// fermionic (2^N, Jordan-Wigner) or per-mode truncated bosonic Fock space.
/// QP component ordering throughout. Brute-force verification backend.
struct FockRep {
  Statistics stats = Statistics::Boson;
  int n_modes = 0;
  int cutoff = 0;  // levels per bosonic mode (occupations 0..cutoff-1); unused for fermions
  long dim = 0;
  std::vector<SpCMat> xi;  // 2N sparse operators

  const SpCMat& op(int a) const { return xi.at(size_t(a)); }
};

/// Build the representation; throws BudgetExceeded beyond the policy memory budget.
FockRep fock_build(Statistics stats, int n_modes, int cutoff = 0);

/// Occupation numbers of a basis index (mode-major; mode 0 varies slowest).
std::vector<int> fock_occupations(const FockRep& rep, long index);

/// Dense matrix of a sparse operator (small dimensions only).
CMat dense(const SpCMat& m);

/// The state vector annihilated by (1 + iJ)(xi - z)/2, normalized, with the
/// first nonzero amplitude made real positive. DegenerateKernel if the
/// numerical kernel is not one-dimensional; TruncationTooSmall when the
/// bosonic tail estimate exceeds tolerance.
CVec fock_state_vector(const FockRep& rep, const PureGaussianState& state);

/// Tail mass estimate of the last occupation level (bosons): the summed
/// |amplitude|^2 over basis states with any mode at the cutoff boundary.
double fock_tail_mass(const FockRep& rep, const CVec& psi);

/// Density matrix exp(-Q)/normalization from the (q, c) exponent data.
CMat fock_density_matrix(const FockRep& rep, const MixedGaussianState& state);

/// Hermitian Hamiltonian matrix of a quadratic Hamiltonian.
CMat fock_hamiltonian(const FockRep& rep, const QuadraticHamiltonian& H);

/// n-point functions of (xi - z) in a vector or density-matrix state.
cplx fock_npoint(const FockRep& rep, const CVec& psi, const std::vector<int>& idx,
                 const Vec& z);
cplx fock_npoint(const FockRep& rep, const CMat& rho, const std::vector<int>& idx,
                 const Vec& z);

/// All n-point functions up to max_order compared against a callback; returns
/// the maximal absolute deviation (used by verification suites).
double fock_npoint_scan(const FockRep& rep, const CVec& psi, const Vec& z, int max_order,
                        const std::function<cplx(const std::vector<int>&)>& reference);
double fock_npoint_scan(const FockRep& rep, const CMat& rho, const Vec& z, int max_order,
                        const std::function<cplx(const std::vector<int>&)>& reference);

double fock_overlap_abs2(const CVec& a, const CVec& b);

/// exp(-i H t) psi by exact dense exponentiation.
CVec fock_evolve(const FockRep& rep, const CMat& H, double t, const CVec& psi);

/// Partial trace keeping the listed modes (mode indices ascending). For
/// fermions the kept modes must form a prefix {0..k-1} of the Jordan-Wigner
/// order so the qubit trace equals the fermionic one.
CMat fock_partial_trace(const FockRep& rep, const CVec& psi, const std::vector<int>& keep);
CMat fock_partial_trace(const FockRep& rep, const CMat& rho, const std::vector<int>& keep);

/// Von Neumann entropy of a density matrix.
double fock_entropy(const CMat& rho);

}  // namespace gaussk
