#pragma once

#include <utility>
#include <vector>

#include "gaussk/dynamics.hpp"
#include "gaussk/states.hpp"
#include "gaussk/types.hpp"

namespace gaussk {

/// Whole-mode subsystem in the stored QP basis: both q and p of each listed
/// mode. General linear subspaces are reached by conjugating the state with a
/// group element first.
struct SubsystemSpec {
  std::vector<int> modes;  // sorted, distinct
};

SubsystemSpec subsystem(std::vector<int> modes);
SubsystemSpec complement(const SubsystemSpec& spec, int n_modes);

/// Phase-space row/column indices {m_i} u {m_i + N} of the subsystem.
std::vector<int> phase_space_indices(const SubsystemSpec& spec, int n_modes);

/// Restriction of J and z to the subsystem; the result is a (generally mixed)
/// Gaussian state.
MixedGaussianState reduce(const PureGaussianState& state, const SubsystemSpec& spec);
MixedGaussianState reduce(const MixedGaussianState& state, const SubsystemSpec& spec);

/// r_i from the restricted spectrum: lambda = cosh 2r (bosons) resp. cos 2r
/// (fermions), sorted descending.
std::vector<double> r_parameters(const Mat& J_A, Statistics stats);

/// Von Neumann entropy of a mixed Gaussian state,
/// S = |1/2 Tr(iJ argh iJ) + 1/4 log det((1+J^2)/4)|.
double entropy_vn(const MixedGaussianState& state);

/// S_A of a pure state via the restricted complex structure,
/// |Tr((1+iJ_A)/2 log|(1+iJ_A)/2|)|; equals entropy_vn of the reduction.
double entanglement_entropy(const PureGaussianState& state, const SubsystemSpec& spec);

/// Renyi entropy of order alpha (> 0, != 1) from the closed forms in r_i.
double renyi(const PureGaussianState& state, const SubsystemSpec& spec, double alpha);

/// Order-2 Renyi through the determinant route: 1/2 log|det J_A| (bosons),
/// -1/2 log det((1 - J_A^2)/2) (fermions).
double renyi2(const PureGaussianState& state, const SubsystemSpec& spec);

/// Truncated-series bounds S^(m-) <= S_A <= S^(m+) for fermionic reductions.
std::pair<double, double> fermion_entropy_bounds(const Mat& J_A, int m,
                                                 Statistics stats = Statistics::Fermion);

struct RelEntropyResult {
  double value = 0.0;
  bool infinite = false;
  bool commuting = true;
};

/// S(rho || sigma) by the spectral/trace functional; +infinity flagged when
/// sigma is pure in a direction where rho differs. `commuting` reports
/// whether [J_rho, J_sigma] = 0 within tolerance (the non-commuting reading
/// follows the stated determinant/trace expression).
RelEntropyResult relative_entropy(const MixedGaussianState& rho, const MixedGaussianState& sigma);

/// sqrt(|Tr log^2 Delta| / 8); zero iff the structures coincide.
double circuit_complexity(const Mat& J_target, const Mat& J_ref, Statistics stats);

/// Directional derivative of S_A under J -> J + eps dJ (analytic, spectral).
double entropy_variation(const PureGaussianState& state, const SubsystemSpec& spec,
                         const Mat& dJ);

/// Relative entanglement entropy of the state's reduction with respect to the
/// order-m adiabatic vacuum's reduction at time t.
RelEntropyResult relative_entropy_adiabatic(const PureGaussianState& state,
                                            const DrivenHamiltonian& Hd, double t, int order,
                                            const SubsystemSpec& spec);

}  // namespace gaussk
