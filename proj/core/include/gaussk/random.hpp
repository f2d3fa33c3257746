#pragma once

#include <cstdint>
#include <random>

#include "gaussk/kahler.hpp"
#include "gaussk/types.hpp"

namespace gaussk {

/// Deterministic RNG wrapper; everything downstream of a seed is reproducible.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  double gauss(double sigma = 1.0) { return std::normal_distribution<double>(0.0, sigma)(eng_); }
  int uniform_int(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng_); }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

Mat random_symmetric(Rng& rng, int dim, double scale = 1.0);
Mat random_antisymmetric(Rng& rng, int dim, double scale = 1.0);
Mat random_spd(Rng& rng, int dim, double scale = 1.0);

/// Random element of sp(2N,R) (bosons) or so(2N) (fermions), QP standard background.
Mat random_algebra_element(Rng& rng, Statistics stats, int n_modes, double scale = 1.0);

/// exp(K) for a random bounded algebra element.
Mat random_group_element(Rng& rng, Statistics stats, int n_modes, double scale = 0.4);

/// M J_std M^{-1} for random M; `squeeze` bounds the u_perp part, i.e. the
/// log-spectrum of the relative structure with respect to the standard J.
Mat random_compatible_J(Rng& rng, Statistics stats, int n_modes, double squeeze = 0.6);

KahlerTriple random_compatible_triple(Rng& rng, Statistics stats, int n_modes,
                                      double squeeze = 0.6);

}  // namespace gaussk
