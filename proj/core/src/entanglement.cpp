#include "gaussk/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gaussk/matfun.hpp"
#include "gaussk/policy.hpp"

namespace gaussk {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// entropy of one eigenvalue pair +-i lambda
double pair_entropy(Statistics stats, double lambda) {
  if (stats == Statistics::Boson) {
    const double l = std::max(lambda, 1.0);
    return xlogx((l + 1.0) / 2.0) - xlogx((l - 1.0) / 2.0);
  }
  const double l = std::min(std::max(lambda, 0.0), 1.0);
  return -xlogx((1.0 + l) / 2.0) - xlogx((1.0 - l) / 2.0);
}

std::vector<double> reduced_lambdas(const Mat& J_A, Statistics stats, const char* what) {
  MixedGaussianState tmp = mixed_from_J(stats, J_A);
  (void)what;
  return tmp.lambdas();
}

}  // namespace

SubsystemSpec subsystem(std::vector<int> modes) {
  if (modes.empty()) throw InvalidSubsystem("subsystem: no modes given");
  std::sort(modes.begin(), modes.end());
  for (size_t i = 0; i < modes.size(); ++i) {
    if (modes[i] < 0) throw InvalidSubsystem("subsystem: negative mode index");
    if (i > 0 && modes[i] == modes[i - 1]) {
      throw InvalidSubsystem("subsystem: duplicate mode index");
    }
  }
  return SubsystemSpec{std::move(modes)};
}

SubsystemSpec complement(const SubsystemSpec& spec, int n_modes) {
  std::vector<int> rest;
  size_t k = 0;
  for (int m = 0; m < n_modes; ++m) {
    if (k < spec.modes.size() && spec.modes[k] == m) {
      ++k;
    } else {
      rest.push_back(m);
    }
  }
  if (rest.empty()) throw InvalidSubsystem("complement: subsystem covers everything");
  return SubsystemSpec{std::move(rest)};
}

std::vector<int> phase_space_indices(const SubsystemSpec& spec, int n_modes) {
  std::vector<int> idx;
  for (int m : spec.modes) {
    if (m >= n_modes) throw InvalidSubsystem("subsystem: mode index out of range");
  }
  for (int m : spec.modes) idx.push_back(m);
  for (int m : spec.modes) idx.push_back(m + n_modes);
  return idx;
}

namespace {

MixedGaussianState reduce_impl(Statistics stats, int n_modes, const Mat& J, const Vec& z,
                               const SubsystemSpec& spec) {
  const std::vector<int> idx = phase_space_indices(spec, n_modes);
  const int dA = int(idx.size());
  Mat J_A(dA, dA);
  Vec z_A(dA);
  for (int i = 0; i < dA; ++i) {
    z_A(i) = z.size() ? z(idx[size_t(i)]) : 0.0;
    for (int j = 0; j < dA; ++j) J_A(i, j) = J(idx[size_t(i)], idx[size_t(j)]);
  }
  return mixed_from_J(stats, J_A, z_A);
}

}  // namespace

MixedGaussianState reduce(const PureGaussianState& state, const SubsystemSpec& spec) {
  return reduce_impl(state.stats(), state.n_modes(), state.J(), state.z, spec);
}

MixedGaussianState reduce(const MixedGaussianState& state, const SubsystemSpec& spec) {
  return reduce_impl(state.stats, state.n_modes, state.J, state.z, spec);
}

std::vector<double> r_parameters(const Mat& J_A, Statistics stats) {
  std::vector<double> rs;
  for (double l : reduced_lambdas(J_A, stats, "r_parameters")) {
    if (stats == Statistics::Boson) {
      rs.push_back(0.5 * std::acosh(std::max(l, 1.0)));
    } else {
      rs.push_back(0.5 * std::acos(std::min(std::max(l, 0.0), 1.0)));
    }
  }
  std::sort(rs.begin(), rs.end(), std::greater<double>());
  return rs;
}

double entropy_vn(const MixedGaussianState& state) {
  double s = 0.0;
  for (double l : state.lambdas()) s += pair_entropy(state.stats, l);
  return s;
}

double entanglement_entropy(const PureGaussianState& state, const SubsystemSpec& spec) {
  // |Tr((1 + iJ_A)/2 log|(1 + iJ_A)/2|)| evaluated on the +-lambda spectrum;
  // the outer factor keeps its sign, only the log argument is |.|
  const MixedGaussianState red = reduce(state, spec);
  auto term = [](double x) { return x != 0.0 ? x * std::log(std::abs(x)) : 0.0; };
  double tr = 0.0;
  for (double l : red.lambdas()) {
    tr += term((1.0 + l) / 2.0) + term((1.0 - l) / 2.0);
  }
  return std::abs(tr);
}

double renyi(const PureGaussianState& state, const SubsystemSpec& spec, double alpha) {
  if (alpha <= 0.0 || alpha == 1.0) throw ValidationError("renyi: alpha must be > 0 and != 1");
  const Mat J_A = reduce(state, spec).J;
  const std::vector<double> rs = r_parameters(J_A, state.stats());
  double acc = 0.0;
  if (state.stats() == Statistics::Boson) {
    for (double r : rs) {
      acc += std::log(std::pow(std::cosh(r), 2 * alpha) - std::pow(std::sinh(r), 2 * alpha));
    }
    return acc / (alpha - 1.0);
  }
  for (double r : rs) {
    acc += std::log(std::pow(std::cos(r), 2 * alpha) + std::pow(std::sin(r), 2 * alpha));
  }
  return acc / (1.0 - alpha);
}

double renyi2(const PureGaussianState& state, const SubsystemSpec& spec) {
  const MixedGaussianState red = reduce(state, spec);
  if (state.stats() == Statistics::Boson) {
    return 0.5 * std::log(std::abs(red.J.determinant()));
  }
  const Mat arg = 0.5 * (Mat::Identity(red.dim(), red.dim()) - red.J * red.J);
  return -0.5 * std::log(arg.determinant());
}

std::pair<double, double> fermion_entropy_bounds(const Mat& J_A, int m, Statistics stats) {
  if (stats != Statistics::Fermion) {
    throw WrongStatistics("fermion_entropy_bounds: bounds hold for fermions only");
  }
  if (m < 1) throw ValidationError("fermion_entropy_bounds: m must be >= 1");
  const std::vector<double> lams = reduced_lambdas(J_A, stats, "fermion_entropy_bounds");
  const double nA = double(lams.size());
  // S_A = N_A log 2 - sum_n Tr(iJ_A)^{2n} / (4n(2n-1)); the per-pair trace is
  // 2 lambda^{2n}, and sum_n 1/(2n(2n-1)) = log 2 makes S(lambda = 1) = 0.
  double series = 0.0;
  double head = 0.0;
  for (int n = 1; n <= m; ++n) {
    double tr = 0.0;
    for (double l : lams) tr += 2.0 * std::pow(l, 2 * n);
    series += tr / double(4 * n * (2 * n - 1));
    head += 1.0 / double(2 * n * (2 * n - 1));
  }
  const double tail = std::log(2.0) - head;  // sum_{n>m} 1/(2n(2n-1))
  const double upper = nA * std::log(2.0) - series;
  const double lower = upper - nA * tail;  // dropped terms are at most 2 N_A each
  return {lower, upper};
}

namespace {

// E(rho) = 1/2 Tr(iJ argh iJ) + 1/4 log det((1+J^2)/4), evaluated on the
// spectrum with the 0 log 0 continuation; S = |E|.
double entropy_functional(Statistics stats, const std::vector<double>& lams) {
  double e = 0.0;
  for (double l : lams) e += pair_entropy(stats, l);
  return stats == Statistics::Boson ? e : -e;
}

}  // namespace

RelEntropyResult relative_entropy(const MixedGaussianState& rho, const MixedGaussianState& sigma) {
  if (rho.stats != sigma.stats || rho.n_modes != sigma.n_modes) {
    throw DimensionMismatch("relative_entropy: states are not comparable");
  }
  RelEntropyResult out;
  const double scale = std::max(1.0, max_abs(rho.J));
  const Mat commutator = rho.J * sigma.J - sigma.J * rho.J;
  out.commuting = max_abs(commutator) < 1e3 * policy().decomposition_tol * scale;

  if (max_abs(Mat(rho.J - sigma.J)) < 1e3 * policy().decomposition_tol * scale) {
    out.value = 0.0;
    return out;
  }
  const double band = policy().clip_band * 1e3;
  for (double l : sigma.lambdas()) {
    if (std::abs(l - 1.0) < band) {
      out.infinite = true;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
  }
  // |1/2 Tr(iJ_rho argh iJ_sigma) + 1/4 log det((1+J_sigma^2)/4) - E(rho)|,
  // safe for pure directions of rho.
  const CMat iJs = cplx(0, 1) * sigma.J.cast<cplx>();
  const CMat argh_s = matrix_function(iJs, MatFun::Argh);
  const cplx cross = (cplx(0, 1) * rho.J.cast<cplx>() * argh_s).trace();
  double logdet_s = 0.0;
  for (double l : sigma.lambdas()) logdet_s += 2.0 * std::log(std::abs((1.0 - l * l) / 4.0));
  const double e_rho = entropy_functional(rho.stats, rho.lambdas());
  out.value = std::abs(0.5 * cross.real() + 0.25 * logdet_s - e_rho);
  return out;
}

double circuit_complexity(const Mat& J_target, const Mat& J_ref, Statistics stats) {
  const RelativeStructure rel = relative_structure(J_ref, J_target, stats);
  if (stats == Statistics::Fermion && rel.has_odd_minus_one_pairs) {
    throw NoCartanDecomposition("circuit_complexity: disconnected parity sectors");
  }
  double sum = 0.0;
  for (double p : rel.params) sum += p * p;  // |Tr log^2 Delta| = 2 sum params^2
  return std::sqrt(sum / 4.0);
}

double entropy_variation(const PureGaussianState& state, const SubsystemSpec& spec,
                         const Mat& dJ) {
  if (dJ.rows() != state.dim() || dJ.cols() != state.dim()) {
    throw DimensionMismatch("entropy_variation: dJ size");
  }
  const std::vector<int> idx = phase_space_indices(spec, state.n_modes());
  const int dA = int(idx.size());
  Mat J_A(dA, dA), dJ_A(dA, dA);
  for (int i = 0; i < dA; ++i) {
    for (int j = 0; j < dA; ++j) {
      J_A(i, j) = state.J()(idx[size_t(i)], idx[size_t(j)]);
      dJ_A(i, j) = dJ(idx[size_t(i)], idx[size_t(j)]);
    }
  }
  // S_A = s Tr(eta(i J_A)) with eta(x) = (1+x)/2 log|(1+x)/2|;
  // dS = s Re Tr(eta'(i J_A) i dJ_A), eta'(x) = 1/2 log|(1+x)/2| + 1/2.
  auto eta_prime = [](cplx x) -> cplx {
    const cplx arg = 0.5 * (cplx(1, 0) + x);
    return 0.5 * std::log(std::abs(arg)) + 0.5;
  };
  const CMat iJ = cplx(0, 1) * J_A.cast<cplx>();
  const CMat D = matrix_function(iJ, eta_prime);
  const cplx tr = (D * (cplx(0, 1) * dJ_A.cast<cplx>())).trace();
  const double sgn = state.stats() == Statistics::Boson ? 1.0 : -1.0;
  return sgn * tr.real();
}

RelEntropyResult relative_entropy_adiabatic(const PureGaussianState& state,
                                            const DrivenHamiltonian& Hd, double t, int order,
                                            const SubsystemSpec& spec) {
  const AdiabaticVacuum av = adiabatic_vacuum(Hd, t, order);
  return relative_entropy(reduce(state, spec), reduce(av.state, spec));
}

}  // namespace gaussk
