#pragma once

#include <functional>
#include <vector>

#include "gaussk/states.hpp"
#include "gaussk/types.hpp"

namespace gaussk {

/// H = 1/2 h_ab xi^a xi^b + f_a xi^a (bosons) resp. i/2 h_ab xi^a xi^b
/// (fermions). h is (anti)symmetrized on ingest so the generator is always
/// K = Omega h (bosons) / G h (fermions); an explicit constant c0 may be
/// supplied. `stable` means h positive definite (bosons; fermions always).
struct QuadraticHamiltonian {
  Statistics stats = Statistics::Boson;
  int n_modes = 0;
  Mat h;
  Vec f;
  Mat K;
  double c0 = 0.0;
  bool stable = false;

  int dim() const { return 2 * n_modes; }
};

QuadraticHamiltonian quadratic_hamiltonian(Statistics stats, const Mat& h_raw,
                                           const Vec& f = Vec(), double c0 = 0.0);

/// Sampled family h(t), f(t) with optional analytic time derivatives of h
/// (order k >= 1). Samplers must be pure functions of t.
struct DrivenHamiltonian {
  Statistics stats = Statistics::Boson;
  int n_modes = 0;
  std::function<Mat(double)> h;
  std::function<Vec(double)> f;                  // may be empty (no linear term)
  std::function<Mat(double, int)> h_derivative;  // may be empty: finite differences
  std::function<Vec(double, int)> f_derivative;  // may be empty: finite differences

  QuadraticHamiltonian at(double t) const;
  bool analytic() const { return bool(h_derivative); }
};

DrivenHamiltonian constant_drive(const QuadraticHamiltonian& H);

/// <H> = c0 -+ 1/4 Tr(K J) + 1/2 h(z,z) + f z  (- bosons, + fermions; the
/// fermionic sign is fixed by exact diagonalization).
double energy(const PureGaussianState& state, const QuadraticHamiltonian& H);
double energy_of(const Mat& J, const Vec& z, const QuadraticHamiltonian& H);

/// J0 = |K|^{-1} K, z0 = -h^{-1} f.
PureGaussianState ground_state(const QuadraticHamiltonian& H);

/// E0 = c0 +- 1/4 Tr|K| - 1/2 f h^{-1} f  (+ bosons, - fermions).
double vacuum_energy(const QuadraticHamiltonian& H);

/// Closed-form constant evolution: J(t) = e^{Kt} J0 e^{-Kt},
/// z(t) = e^{Kt} z0 + K^{-1}(e^{Kt}-1) Omega f (spectral, singularities by series).
PureGaussianState evolve_const(const PureGaussianState& state, const QuadraticHamiltonian& H,
                               double t);

struct EvolutionResult {
  std::vector<double> times;
  std::vector<PureGaussianState> states;
  Mat M_accum;
  std::vector<double> group_residuals;
};

/// Midpoint-exponential stepping M <- exp(K(t + dt/2) dt) M; every factor is
/// a group element, so the flow stays on the group to machine precision.
EvolutionResult evolve_driven(const PureGaussianState& state, const DrivenHamiltonian& Hd,
                              double t0, double t1, double dt);

/// Ground state of H(t) frozen at time t.
PureGaussianState instantaneous_vacuum(const DrivenHamiltonian& Hd, double t);

/// Adiabatic vacuum of order m with the solved series data and the residuals
/// of both defining equations per order.
struct AdiabaticVacuum {
  PureGaussianState state;      // J^(m), z^(m) at lambda = 1
  std::vector<Mat> A;           // A_1..A_m
  std::vector<Vec> zeta;        // zeta_1..zeta_m (bosons)
  std::vector<double> commutator_residual;     // |[K,A_n] - Adot_{n-1}|
  std::vector<double> anticommutator_residual; // |{J0,A_n} + sum A_k A_{n-k}|
  double jsq_residual = 0.0;    // |J^(m)^2 + 1| diagnostic (series is asymptotic)
};

AdiabaticVacuum adiabatic_vacuum(const DrivenHamiltonian& Hd, double t, int order);

/// delta E = -+ 1/4 Tr(K(t) (J(t) - J_t^(m))), equal to the energy difference.
double vacuum_subtraction(const PureGaussianState& state, const DrivenHamiltonian& Hd, double t,
                          int order);

}  // namespace gaussk
