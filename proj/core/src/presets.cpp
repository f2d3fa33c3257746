#include "gaussk/presets.hpp"

#include "gaussk/errors.hpp"

namespace gaussk {

namespace {

Mat harmonic_chain_h(int n, double omega, double coupling) {
  Mat h = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    h(n + i, n + i) = 1.0;                 // p_i^2
    h(i, i) += omega * omega;              // omega^2 q_i^2
  }
  for (int i = 0; i < n; ++i) {            // coupling (q_{i+1} - q_i)^2, ring
    const int j = (i + 1) % n;
    if (j == i) continue;                  // single site: no bond
    h(i, i) += coupling;
    h(j, j) += coupling;
    h(i, j) -= coupling;
    h(j, i) -= coupling;
  }
  return h;
}

}  // namespace

QuadraticHamiltonian harmonic_chain(int n_modes, double omega, double coupling) {
  if (n_modes < 1) throw ValidationError("harmonic_chain: N must be >= 1");
  if (omega <= 0.0) throw ValidationError("harmonic_chain: omega must be positive");
  return quadratic_hamiltonian(Statistics::Boson, harmonic_chain_h(n_modes, omega, coupling));
}

DrivenHamiltonian harmonic_chain_quench(int n_modes, double omega, double coupling, double t0,
                                        double omega2) {
  if (omega <= 0.0 || omega2 <= 0.0) {
    throw ValidationError("harmonic_chain_quench: frequencies must be positive");
  }
  const Mat h1 = harmonic_chain_h(n_modes, omega, coupling);
  const Mat h2 = harmonic_chain_h(n_modes, omega2, coupling);
  DrivenHamiltonian d;
  d.stats = Statistics::Boson;
  d.n_modes = n_modes;
  d.h = [h1, h2, t0](double t) { return t < t0 ? h1 : h2; };
  const int dim = 2 * n_modes;
  // piecewise constant; the derivative jump at t0 itself is not sampled
  d.h_derivative = [dim](double, int) { return Mat::Zero(dim, dim); };
  return d;
}

QuadraticHamiltonian kitaev_chain(int n_modes, double mu, double hopping, double pairing) {
  if (n_modes < 1) throw ValidationError("kitaev_chain: N must be >= 1");
  const int n = n_modes;
  Mat h = Mat::Zero(2 * n, 2 * n);
  auto add = [&h](int a, int b, double v) {
    h(a, b) += v;
    h(b, a) -= v;
  };
  for (int i = 0; i < n; ++i) add(i, n + i, -mu);  // -mu (n_i - 1/2) = -mu i q_i p_i
  for (int i = 0; i + 1 < n; ++i) {
    const int j = i + 1;
    add(i, n + j, -hopping + pairing);  // q_i p_j
    add(j, n + i, -hopping - pairing);  // q_j p_i
  }
  return quadratic_hamiltonian(Statistics::Fermion, h);
}

}  // namespace gaussk
