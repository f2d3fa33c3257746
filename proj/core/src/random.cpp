#include "gaussk/random.hpp"

namespace gaussk {

Mat random_symmetric(Rng& rng, int dim, double scale) {
  Mat A(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      A(i, j) = A(j, i) = rng.gauss(scale);
    }
  }
  return A;
}

Mat random_antisymmetric(Rng& rng, int dim, double scale) {
  Mat A = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < i; ++j) {
      A(i, j) = rng.gauss(scale);
      A(j, i) = -A(i, j);
    }
  }
  return A;
}

Mat random_spd(Rng& rng, int dim, double scale) {
  Mat B(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) B(i, j) = rng.gauss(scale);
  }
  return B * B.transpose() + 0.1 * scale * scale * Mat::Identity(dim, dim);
}

Mat random_algebra_element(Rng& rng, Statistics stats, int n_modes, double scale) {
  const int d = 2 * n_modes;
  if (stats == Statistics::Fermion) return random_antisymmetric(rng, d, scale);
  return standard_structures(Statistics::Boson, n_modes).Omega * random_symmetric(rng, d, scale);
}

Mat random_group_element(Rng& rng, Statistics stats, int n_modes, double scale) {
  Mat K = random_algebra_element(rng, stats, n_modes, 1.0);
  K *= scale / std::max(1.0, max_abs(K));
  return matrix_exp(K);
}

Mat random_compatible_J(Rng& rng, Statistics stats, int n_modes, double squeeze) {
  const KahlerTriple std_t = standard_structures(stats, n_modes);
  Mat K = random_algebra_element(rng, stats, n_modes, 1.0);
  Mat Kp = split_pm(K, std_t.J).plus;
  // eigenvalues of log Delta are twice the eigenvalues of K_+
  const double radius = eigenvalues(Kp).cwiseAbs().maxCoeff();
  if (radius > 0) Kp *= 0.5 * squeeze / radius;
  const Mat M = matrix_exp(Kp);
  return M * std_t.J * M.inverse();
}

KahlerTriple random_compatible_triple(Rng& rng, Statistics stats, int n_modes, double squeeze) {
  const KahlerTriple std_t = standard_structures(stats, n_modes);
  const Mat J = random_compatible_J(rng, stats, n_modes, squeeze);
  if (stats == Statistics::Boson) {
    return complete_triple(stats, std::nullopt, std_t.Omega, J);
  }
  return complete_triple(stats, std_t.G, std::nullopt, J);
}

}  // namespace gaussk
