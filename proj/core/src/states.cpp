#include "gaussk/states.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "gaussk/matfun.hpp"
#include "gaussk/policy.hpp"

namespace gaussk {

namespace {

Vec checked_displacement(Statistics stats, const Vec& z, int dim, const char* what) {
  if (z.size() == 0) return Vec::Zero(dim);
  if (z.size() != dim) throw DimensionMismatch(std::string(what) + ": displacement size");
  if (stats == Statistics::Fermion && z.cwiseAbs().maxCoeff() > 0.0) {
    throw FermionDisplacement(std::string(what) + ": fermionic displacement must vanish");
  }
  return z;
}

// eigenvalues of a real J come in pairs +-i lambda; returns lambda >= 0
// sorted descending, throws if a real part survives beyond tolerance.
std::vector<double> imaginary_pair_moduli(const Mat& J, const char* what) {
  const CVec ev = eigenvalues(J);
  const double scale = std::max(1.0, max_abs(J));
  std::vector<double> lams;
  lams.reserve(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i).real()) > 1e3 * policy().decomposition_tol * scale) {
      throw SpectrumOutOfRange(std::string(what) + ": J eigenvalue has a real part");
    }
    lams.push_back(std::abs(ev(i).imag()));
  }
  std::sort(lams.begin(), lams.end(), std::greater<double>());
  std::vector<double> out;
  for (size_t i = 0; i + 1 < lams.size(); i += 2) {
    if (std::abs(lams[i] - lams[i + 1]) > 1e3 * policy().decomposition_tol * (1.0 + lams[i])) {
      throw SpectrumOutOfRange(std::string(what) + ": J eigenvalues do not pair");
    }
    out.push_back(0.5 * (lams[i] + lams[i + 1]));
  }
  return out;
}

void validate_mixed_spectrum(Statistics stats, const std::vector<double>& lams,
                             const char* what) {
  const double band = policy().clip_band * 1e3;
  for (double l : lams) {
    if (stats == Statistics::Boson && l < 1.0 - band) {
      throw SpectrumOutOfRange(std::string(what) + ": bosonic lambda below 1");
    }
    if (stats == Statistics::Fermion && l > 1.0 + band) {
      throw SpectrumOutOfRange(std::string(what) + ": fermionic lambda above 1");
    }
  }
}

double log_det_one_plus_Jsq_over_4(const std::vector<double>& lams) {
  double acc = 0.0;
  for (double l : lams) acc += 2.0 * std::log(std::abs((1.0 - l * l) / 4.0));
  return acc;
}

}  // namespace

std::vector<double> MixedGaussianState::lambdas() const {
  return imaginary_pair_moduli(J, "MixedGaussianState");
}

bool MixedGaussianState::is_pure(double tol) const {
  const double t = tol > 0 ? tol : 1e3 * policy().decomposition_tol;
  return max_abs(Mat(J * J + Mat::Identity(dim(), dim()))) < t;
}

PureGaussianState pure_state(Statistics stats, const Mat& J, const Vec& z) {
  if (J.rows() != J.cols() || J.rows() % 2 != 0 || J.rows() == 0) {
    throw DimensionMismatch("pure_state: J must be 2N x 2N");
  }
  const int d = int(J.rows());
  if (max_abs(Mat(J * J + Mat::Identity(d, d))) > 1e2 * policy().decomposition_tol) {
    throw NotAComplexStructure("pure_state: J^2 != -1");
  }
  PureGaussianState s;
  const KahlerTriple std_t = standard_structures(stats, d / 2);
  if (stats == Statistics::Boson) {
    s.triple = complete_triple(stats, std::nullopt, std_t.Omega, J);
  } else {
    s.triple = complete_triple(stats, std_t.G, std::nullopt, J);
  }
  s.z = checked_displacement(stats, z, d, "pure_state");
  return s;
}

PureGaussianState transform(const PureGaussianState& state, const Mat& M, const Vec& z_shift) {
  if (M.rows() != state.dim() || M.cols() != state.dim()) {
    throw DimensionMismatch("transform: M size");
  }
  if (!is_group_element(M, state.stats(), 1e3 * policy().decomposition_tol)) {
    throw NotGroupElement("transform: M does not preserve the background structure");
  }
  const Vec shift = checked_displacement(state.stats(), z_shift, state.dim(), "transform");
  const Mat J1 = M * state.J() * M.inverse();
  return pure_state(state.stats(), J1, Vec(M * state.z + shift));
}

MixedGaussianState mixed_from_J(Statistics stats, const Mat& J, const Vec& z) {
  if (J.rows() != J.cols() || J.rows() % 2 != 0) {
    throw DimensionMismatch("mixed_from_J: J must be 2N x 2N");
  }
  MixedGaussianState m;
  m.stats = stats;
  m.n_modes = int(J.rows()) / 2;
  m.J = J;
  const KahlerTriple std_t = standard_structures(stats, m.n_modes);
  if (stats == Statistics::Boson) {
    m.Omega = std_t.Omega;
    m.G = -J * std_t.Omega;
  } else {
    m.G = std_t.G;
    m.Omega = J * std_t.G;
  }
  m.z = checked_displacement(stats, z, m.dim(), "mixed_from_J");
  validate_mixed_spectrum(stats, m.lambdas(), "mixed_from_J");
  return m;
}

MixedGaussianState mixed_from_q(Statistics stats, const Mat& q, const Vec& z) {
  if (q.rows() != q.cols() || q.rows() % 2 != 0) {
    throw DimensionMismatch("mixed_from_q: q must be 2N x 2N");
  }
  const int n = int(q.rows()) / 2;
  const KahlerTriple std_t = standard_structures(stats, n);
  Mat J;
  if (stats == Statistics::Boson) {
    const double scale = std::max(1.0, max_abs(q));
    if (max_abs(Mat(q - q.transpose())) > 1e2 * policy().structure_tol * scale) {
      throw ValidationError("mixed_from_q: bosonic q must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (q + q.transpose()));
    if (es.eigenvalues().minCoeff() <= 0.0) {
      throw NotPositiveDefinite("mixed_from_q: bosonic q must be positive definite");
    }
    const Mat K = std_t.Omega * q;
    J = -matrix_function(K, MatFun::Cot);
  } else {
    const double scale = std::max(1.0, max_abs(q));
    if (max_abs(Mat(q + q.transpose())) > 1e2 * policy().structure_tol * scale) {
      throw ValidationError("mixed_from_q: fermionic q must be antisymmetric");
    }
    const Mat K = std_t.G * q;
    J = matrix_function(K, MatFun::Tan);
  }
  MixedGaussianState m = mixed_from_J(stats, J, z);
  m.q = stats == Statistics::Boson ? Mat(0.5 * (q + q.transpose())) : Mat(0.5 * (q - q.transpose()));
  // normalization constant from the block form of q (stable near purity,
  // where the lambda route cancels catastrophically)
  double c = 0.0;
  for (double beta : block_standard_form(*m.q, stats).params) {
    c += stats == Statistics::Boson ? -std::log(2.0 * std::sinh(beta))
                                    : std::log(2.0 * std::cosh(beta));
  }
  m.c = c;
  return m;
}

MixedGaussianState mixed_from_pure(const PureGaussianState& state) {
  MixedGaussianState m;
  m.stats = state.stats();
  m.n_modes = state.n_modes();
  m.G = state.triple.G;
  m.Omega = state.triple.Omega;
  m.J = state.triple.J;
  m.z = state.z;
  return m;
}

std::pair<Mat, double> q_from_mixed(const MixedGaussianState& state) {
  const std::vector<double> lams = state.lambdas();
  for (double l : lams) {
    if (std::abs(l - 1.0) < policy().clip_band * 1e3) {
      throw PureDirection("q_from_mixed: eigenvalue at the pure boundary");
    }
  }
  const KahlerTriple std_t = standard_structures(state.stats, state.n_modes);
  Mat q;
  if (state.stats == Statistics::Boson) {
    // q = -omega arccot(J), arccot(z) = i/2 log((z-i)/(z+i))
    auto arccot = [](cplx zz) {
      return cplx(0, 0.5) * (std::log(zz - cplx(0, 1)) - std::log(zz + cplx(0, 1)));
    };
    q = -std_t.omega * matrix_function(state.J, arccot);
  } else {
    // q = g arctan(J), arctan(z) = 1/(2i) log((1+iz)/(1-iz))
    auto arctan = [](cplx zz) {
      return cplx(0, -0.5) *
             (std::log(cplx(1, 0) + cplx(0, 1) * zz) - std::log(cplx(1, 0) - cplx(0, 1) * zz));
    };
    q = std_t.g * matrix_function(state.J, arctan);
  }
  const double c = stats_sign(state.stats) * 0.25 * log_det_one_plus_Jsq_over_4(lams);
  return {q, c};
}

GaussianSpectrum gaussian_spectrum(const MixedGaussianState& state) {
  GaussianSpectrum gs;
  gs.stats = state.stats;
  for (double l : state.lambdas()) {
    if (state.stats == Statistics::Boson) {
      const double lc = std::max(l, 1.0);
      gs.betas.push_back(lc <= 1.0 ? std::numeric_limits<double>::infinity()
                                   : 0.5 * std::log((lc + 1.0) / (lc - 1.0)));
    } else {
      const double lc = std::min(l, 1.0);
      gs.betas.push_back(lc >= 1.0 ? std::numeric_limits<double>::infinity() : std::atanh(lc));
    }
  }
  return gs;
}

double GaussianSpectrum::weight(int mode, int occupation) const {
  const double beta = betas.at(size_t(mode));
  if (std::isinf(beta)) return occupation == 0 ? 1.0 : 0.0;
  const double x = std::exp(-2.0 * beta);
  if (stats == Statistics::Boson) {
    return (1.0 - x) * std::pow(x, occupation);
  }
  return std::pow(x, occupation) / (1.0 + x);
}

namespace {

// all perfect matchings of {0..n-1} with their permutation parity, cached per
// n: slot pairs flattened as (p1, q1, p2, q2, ...) with p_i < q_i, p1 < p2 < ...
struct MatchingTable {
  int n = 0;
  std::vector<std::vector<int>> matchings;
  std::vector<double> signs;
};

const MatchingTable& matching_table(int n) {
  static std::vector<MatchingTable> cache;  // cache[n/2 - 1]
  const size_t slot = size_t(n / 2 - 1);
  if (slot < cache.size() && cache[slot].n == n) return cache[slot];
  if (slot >= cache.size()) cache.resize(slot + 1);
  MatchingTable t;
  t.n = n;
  std::vector<bool> used(size_t(n), false);
  std::vector<int> current;
  std::function<void()> recurse = [&]() {
    int first = -1;
    for (int i = 0; i < n; ++i) {
      if (!used[size_t(i)]) {
        first = i;
        break;
      }
    }
    if (first < 0) {
      int inversions = 0;
      for (size_t i = 0; i < current.size(); ++i) {
        for (size_t j = i + 1; j < current.size(); ++j) {
          if (current[i] > current[j]) ++inversions;
        }
      }
      t.matchings.push_back(current);
      t.signs.push_back(inversions % 2 == 0 ? 1.0 : -1.0);
      return;
    }
    used[size_t(first)] = true;
    for (int j = first + 1; j < n; ++j) {
      if (used[size_t(j)]) continue;
      used[size_t(j)] = true;
      current.push_back(first);
      current.push_back(j);
      recurse();
      current.pop_back();
      current.pop_back();
      used[size_t(j)] = false;
    }
    used[size_t(first)] = false;
  };
  recurse();
  cache[slot] = std::move(t);
  return cache[slot];
}

// sum over perfect matchings with sign for fermions; pairwise tree reduction
// keeps the summation order deterministic.
cplx wick_sum(const CMat& C2, const std::vector<int>& idx, Statistics stats) {
  const int n = int(idx.size());
  const MatchingTable& table = matching_table(n);
  std::vector<cplx> terms(table.matchings.size());
  for (size_t m = 0; m < table.matchings.size(); ++m) {
    const std::vector<int>& slots = table.matchings[m];
    cplx prod = stats == Statistics::Fermion ? cplx(table.signs[m], 0) : cplx(1, 0);
    for (size_t k = 0; k + 1 < slots.size(); k += 2) {
      prod *= C2(idx[size_t(slots[k])], idx[size_t(slots[k + 1])]);
    }
    terms[m] = prod;
  }
  // pairwise tree reduction
  while (terms.size() > 1) {
    std::vector<cplx> next;
    for (size_t i = 0; i + 1 < terms.size(); i += 2) next.push_back(terms[i] + terms[i + 1]);
    if (terms.size() % 2 == 1) next.push_back(terms.back());
    terms.swap(next);
  }
  return terms.empty() ? cplx(0, 0) : terms[0];
}

}  // namespace

cplx wick_npoint_c2(const CMat& C2, const std::vector<int>& indices, Statistics stats) {
  for (int a : indices) {
    if (a < 0 || a >= C2.rows()) throw DimensionMismatch("wick_npoint: index out of range");
  }
  if (indices.empty()) return cplx(1, 0);
  if (indices.size() % 2 == 1) return cplx(0, 0);
  return wick_sum(C2, indices, stats);
}

cplx wick_npoint(const PureGaussianState& state, const std::vector<int>& indices) {
  return wick_npoint_c2(state.two_point(), indices, state.stats());
}

cplx wick_npoint(const MixedGaussianState& state, const std::vector<int>& indices) {
  return wick_npoint_c2(state.two_point(), indices, state.stats);
}

OverlapResult overlap_abs2(const PureGaussianState& s1, const PureGaussianState& s2) {
  if (s1.stats() != s2.stats() || s1.n_modes() != s2.n_modes()) {
    throw DimensionMismatch("overlap_abs2: states are not comparable");
  }
  OverlapResult out;
  if (s1.stats() == Statistics::Fermion) {
    if (pfaffian_sign(s1.J()) != pfaffian_sign(s2.J())) {
      out.value = 0.0;
      out.parity_orthogonal = true;
      return out;
    }
  }
  const RelativeStructure rel = relative_structure(s1.J(), s2.J(), s1.stats());
  double log_overlap = 0.0;  // log |<1|2>|^2
  if (s1.stats() == Statistics::Boson) {
    for (double rho : rel.params) log_overlap -= std::log(std::cosh(0.5 * rho));
  } else {
    for (double theta : rel.params) {
      const double c = std::abs(std::cos(0.5 * theta));
      if (c == 0.0) {
        out.value = 0.0;
        return out;
      }
      log_overlap += std::log(c);
    }
  }
  if (s1.stats() == Statistics::Boson) {
    const Vec d = s1.z - s2.z;
    if (d.cwiseAbs().maxCoeff() > 0.0) {
      const Mat S = s1.covariance() + s2.covariance();
      log_overlap -= d.dot(S.ldlt().solve(d));
    }
  }
  out.value = std::exp(log_overlap);
  return out;
}

cplx characteristic_function(const MixedGaussianState& state, const Vec& w) {
  if (state.stats != Statistics::Boson) {
    throw WrongStatistics("characteristic_function: fermionic chi has a Grassmann argument");
  }
  if (w.size() != state.dim()) throw DimensionMismatch("characteristic_function: w size");
  const double quad = w.dot(state.G * w);
  return std::exp(cplx(-0.25 * quad, -w.dot(state.z)));
}

cplx characteristic_function(const PureGaussianState& state, const Vec& w) {
  return characteristic_function(mixed_from_pure(state), w);
}

CMat characteristic_coefficient(const MixedGaussianState& state) {
  if (state.stats != Statistics::Fermion) {
    throw WrongStatistics("characteristic_coefficient: bosonic chi is a numeric function");
  }
  return cplx(0, -0.25) * state.Omega.cast<cplx>();
}

ModeBasis mode_basis(const PureGaussianState& state) {
  const int d = state.dim();
  const int n = state.n_modes();
  Eigen::ComplexEigenSolver<CMat> es(state.J().cast<cplx>(), true);
  if (es.info() != Eigen::Success) throw IllConditioned("mode_basis: eigensolve failed");

  CMat raw(d, n);
  int found = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size() && found < n; ++i) {
    if (es.eigenvalues()(i).imag() < 0.0) raw.col(found++) = es.eigenvectors().col(i);
  }
  if (found != n) throw SpectrumClassificationFailure("mode_basis: J has no -i eigenspace split");

  const KahlerTriple std_t = standard_structures(state.stats(), n);
  // Hermitian positive form on the -i eigenspace; Cholesky-orthonormalize.
  CMat form;
  if (state.stats() == Statistics::Boson) {
    form = cplx(0, -1) * raw.adjoint() * std_t.omega.cast<cplx>() * raw;
  } else {
    form = raw.adjoint() * std_t.g.cast<cplx>() * raw;
  }
  Eigen::LLT<CMat> llt(0.5 * (form + form.adjoint()));
  if (llt.info() != Eigen::Success) {
    throw SpectrumClassificationFailure("mode_basis: normalization form not positive");
  }
  const CMat L = llt.matrixL();
  ModeBasis mb;
  mb.u = raw * L.adjoint().inverse();
  if (state.stats() == Statistics::Boson) {
    mb.v = cplx(0, 1) * (std_t.omega.cast<cplx>() * mb.u.conjugate()).transpose();
  } else {
    mb.v = (std_t.g.cast<cplx>() * mb.u.conjugate()).transpose();
  }
  return mb;
}

BogoliubovData bogoliubov(const PureGaussianState& ref, const PureGaussianState& target) {
  if (ref.stats() != target.stats() || ref.n_modes() != target.n_modes()) {
    throw DimensionMismatch("bogoliubov: states are not comparable");
  }
  const CMat u = mode_basis(ref).u;
  const CMat ut = mode_basis(target).u;
  const KahlerTriple std_t = standard_structures(ref.stats(), ref.n_modes());
  // b_i = v~_i(xi) gives alpha_ij = v~_i u_j = -i omega(u~*_i, u_j) and
  // beta_ij = v~_i u*_j. Watch the conjugations: swapping them yields
  // alpha = 0, beta = 1 on identical bases.
  BogoliubovData b;
  if (ref.stats() == Statistics::Boson) {
    const CMat om = std_t.omega.cast<cplx>();
    b.alpha = cplx(0, -1) * ut.adjoint() * om * u;
    b.beta = cplx(0, -1) * ut.adjoint() * om * u.conjugate();
  } else {
    const CMat gm = std_t.g.cast<cplx>();
    b.alpha = ut.adjoint() * gm * u;
    b.beta = ut.adjoint() * gm * u.conjugate();
  }
  return b;
}

double number_expectation(const PureGaussianState& target, const PureGaussianState& ref) {
  if (ref.stats() != target.stats() || ref.n_modes() != target.n_modes()) {
    throw DimensionMismatch("number_expectation: states are not comparable");
  }
  const Mat Delta = -target.J() * ref.J();
  const double tr = (Mat::Identity(ref.dim(), ref.dim()) - Delta).trace();
  double n = -stats_sign(ref.stats()) * 0.25 * tr;
  if (ref.stats() == Statistics::Boson) {
    const Vec d = target.z - ref.z;
    n += 0.5 * d.dot(ref.triple.g * d);
  }
  return n;
}

NormalOrderFactors normal_order_factors(const Mat& K_plus, const PureGaussianState& state) {
  if (K_plus.rows() != state.dim() || K_plus.cols() != state.dim()) {
    throw DimensionMismatch("normal_order_factors: K_+ size");
  }
  const double scale = std::max(1.0, max_abs(K_plus));
  if (max_abs(Mat(K_plus * state.J() + state.J() * K_plus)) >
      1e3 * policy().decomposition_tol * scale) {
    throw ValidationError("normal_order_factors: K_+ must anticommute with J");
  }
  NormalOrderFactors f;
  f.L = matrix_function(K_plus, MatFun::Tanh);
  const Mat one_minus_L2 = Mat::Identity(state.dim(), state.dim()) - f.L * f.L;
  const CVec ev = eigenvalues(one_minus_L2);
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i).real() <= 0.0) throw BranchViolation("normal_order_factors: det(1-L^2) <= 0");
    logdet += std::log(ev(i).real());
  }
  f.scalar = std::exp(stats_sign(state.stats()) * 0.125 * logdet);
  return f;
}

BchLinearQuadratic bch_linear_quadratic(const CMat& K, const CVec& w, Statistics stats) {
  if (K.rows() != K.cols() || K.rows() != w.size()) {
    throw DimensionMismatch("bch_linear_quadratic: sizes");
  }
  const int n = int(K.rows()) / 2;
  BchLinearQuadratic r;
  r.eta = matrix_x_over_expm1(K).transpose() * w;  // eta_a = w_b (K/(e^K-1))^b_a
  const CMat F = matrix_bch_F(K);
  const KahlerTriple std_t = standard_structures(stats, n);
  if (stats == Statistics::Boson) {
    r.B = cplx(0, 1) * F * std_t.Omega.cast<cplx>();
  } else {
    r.B = F * std_t.G.cast<cplx>();
  }
  return r;
}

Mat duality(const Mat& J) {
  Eigen::FullPivLU<Mat> lu(J);
  if (!lu.isInvertible()) throw SingularJ("duality: J is singular (maximally mixed direction)");
  return -lu.inverse();
}

}  // namespace gaussk
