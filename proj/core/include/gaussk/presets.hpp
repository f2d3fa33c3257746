#pragma once

#include "gaussk/dynamics.hpp"

namespace gaussk {

/// Ring of N oscillators: H = 1/2 sum_i [p_i^2 + omega^2 q_i^2
/// + coupling (q_{i+1} - q_i)^2], periodic indices.
QuadraticHamiltonian harmonic_chain(int n_modes, double omega, double coupling);

/// Step quench of the ring frequency omega -> omega2 at t0.
DrivenHamiltonian harmonic_chain_quench(int n_modes, double omega, double coupling, double t0,
                                        double omega2);

/// Open Kitaev wire: H = sum_i [-J (c'_i c_{i+1} + h.c.)
/// + Delta (c_i c_{i+1} + h.c.)] - mu sum_i (n_i - 1/2).
QuadraticHamiltonian kitaev_chain(int n_modes, double mu, double hopping, double pairing);

}  // namespace gaussk
