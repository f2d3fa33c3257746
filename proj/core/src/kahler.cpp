#include "gaussk/kahler.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "gaussk/policy.hpp"

namespace gaussk {

namespace {

void require_even_square(const Mat& M, const char* what) {
  if (M.rows() != M.cols() || M.rows() % 2 != 0 || M.rows() == 0) {
    throw DimensionMismatch(std::string(what) + " must be a 2N x 2N matrix");
  }
}

void require_same_dim(const Mat& A, const Mat& B, const char* what) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw DimensionMismatch(std::string(what) + ": dimension mismatch");
  }
}

Mat standard_Omega(int n_modes) {
  const int n = n_modes;
  Mat O = Mat::Zero(2 * n, 2 * n);
  O.topRightCorner(n, n) = Mat::Identity(n, n);
  O.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return O;
}

void check_symmetric(const Mat& A, const char* what) {
  const double scale = std::max(1.0, max_abs(A));
  if (max_abs(Mat(A - A.transpose())) > policy().structure_tol * scale * 100) {
    throw ValidationError(std::string(what) + " is not symmetric");
  }
}

void check_antisymmetric(const Mat& A, const char* what) {
  const double scale = std::max(1.0, max_abs(A));
  if (max_abs(Mat(A + A.transpose())) > policy().structure_tol * scale * 100) {
    throw ValidationError(std::string(what) + " is not antisymmetric");
  }
}

Mat invert_or_throw(const Mat& A, const char* what) {
  Eigen::FullPivLU<Mat> lu(A);
  if (!lu.isInvertible()) throw SingularStructure(std::string(what) + " is singular");
  return lu.inverse();
}

}  // namespace

Mat qp_to_interleaved_perm(int n_modes) {
  const int n = n_modes;
  Mat P = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    P(2 * i, i) = 1.0;          // q_i
    P(2 * i + 1, n + i) = 1.0;  // p_i
  }
  return P;
}

KahlerTriple standard_structures(Statistics stats, int n_modes) {
  if (n_modes < 1) throw DimensionMismatch("n_modes must be >= 1");
  KahlerTriple t;
  t.stats = stats;
  t.n_modes = n_modes;
  t.G = Mat::Identity(2 * n_modes, 2 * n_modes);
  t.Omega = standard_Omega(n_modes);
  t.J = t.Omega;
  t.g = t.G;
  t.omega = -t.Omega;
  t.compatible = true;
  return t;
}

CMat aadag_basis_change(int n_modes) {
  const int n = n_modes;
  CMat C = CMat::Zero(2 * n, 2 * n);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    C(i, i) = s;              // a_i   = (q_i + i p_i)/sqrt(2)
    C(i, n + i) = cplx(0, s);
    C(n + i, i) = s;          // a'_i  = (q_i - i p_i)/sqrt(2)
    C(n + i, n + i) = cplx(0, -s);
  }
  return C;
}

CMat to_aadag(const Mat& t, TensorKind kind, int n_modes) {
  const CMat C = aadag_basis_change(n_modes);
  const CMat Cc = t.cast<cplx>();
  switch (kind) {
    case TensorKind::Bilinear:
      return C * Cc * C.transpose();
    case TensorKind::LinearMap:
      return C * Cc * C.adjoint();  // C is unitary
    case TensorKind::Form:
      return C.conjugate() * Cc * C.adjoint();
    case TensorKind::Vector:
      return C * Cc;
    case TensorKind::Covector:
      return Cc * C.adjoint();
  }
  throw ValidationError("unknown tensor kind");
}

AAdagView to_aadag(const KahlerTriple& t) {
  AAdagView v;
  v.G = to_aadag(t.G, TensorKind::Bilinear, t.n_modes);
  v.Omega = to_aadag(t.Omega, TensorKind::Bilinear, t.n_modes);
  v.J = to_aadag(t.J, TensorKind::LinearMap, t.n_modes);
  return v;
}

KahlerTriple complete_triple(Statistics stats, std::optional<Mat> G, std::optional<Mat> Omega,
                             std::optional<Mat> J) {
  const int given = int(G.has_value()) + int(Omega.has_value()) + int(J.has_value());
  if (given != 2) throw ValidationError("complete_triple needs exactly two of (G, Omega, J)");

  KahlerTriple t;
  t.stats = stats;

  if (G && Omega) {
    require_even_square(*G, "G");
    require_same_dim(*G, *Omega, "complete_triple");
    check_symmetric(*G, "G");
    check_antisymmetric(*Omega, "Omega");
    t.G = *G;
    t.Omega = *Omega;
    t.g = invert_or_throw(t.G, "G");
    t.omega = invert_or_throw(t.Omega, "Omega");
    t.J = stats == Statistics::Boson ? Mat(-t.G * t.omega) : Mat(t.Omega * t.g);
  } else if (G && J) {
    require_even_square(*G, "G");
    require_same_dim(*G, *J, "complete_triple");
    check_symmetric(*G, "G");
    t.G = *G;
    t.J = *J;
    t.g = invert_or_throw(t.G, "G");
    // J = -G omega  <=>  omega = -g J ; equivalently (fermions) Omega = J G.
    if (stats == Statistics::Boson) {
      t.omega = -t.g * t.J;
      t.Omega = invert_or_throw(t.omega, "omega");
    } else {
      t.Omega = t.J * t.G;
      t.omega = invert_or_throw(t.Omega, "Omega");
    }
    const double scale = std::max(1.0, max_abs(t.Omega));
    if (max_abs(Mat(t.Omega + t.Omega.transpose())) > policy().decomposition_tol * scale * 100) {
      throw IncompatiblePair("induced Omega is not antisymmetric");
    }
  } else {
    require_even_square(*Omega, "Omega");
    require_same_dim(*Omega, *J, "complete_triple");
    check_antisymmetric(*Omega, "Omega");
    t.Omega = *Omega;
    t.J = *J;
    t.omega = invert_or_throw(t.Omega, "Omega");
    if (stats == Statistics::Boson) {
      t.G = -t.J * t.Omega;
    } else {
      // J = Omega g  <=>  g = omega J.
      t.g = t.omega * t.J;
      t.G = invert_or_throw(t.g, "g");
    }
    const double scale = std::max(1.0, max_abs(t.G));
    if (max_abs(Mat(t.G - t.G.transpose())) > policy().decomposition_tol * scale * 100) {
      throw IncompatiblePair("induced G is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (t.G + t.G.transpose()));
    if (es.eigenvalues().minCoeff() <= 0.0) {
      throw IncompatiblePair("induced G is not positive definite");
    }
    if (!t.g.size()) t.g = invert_or_throw(t.G, "G");
  }
  if (!t.g.size()) t.g = invert_or_throw(t.G, "G");
  if (!t.omega.size()) t.omega = invert_or_throw(t.Omega, "Omega");

  t.n_modes = int(t.G.rows()) / 2;
  const Mat Jsq = t.J * t.J;
  t.compatible = max_abs(Mat(Jsq + Mat::Identity(t.dim(), t.dim()))) < policy().decomposition_tol * 100;
  return t;
}

double group_residual(const Mat& M, Statistics stats) {
  require_even_square(M, "M");
  const int n = int(M.rows()) / 2;
  if (stats == Statistics::Boson) {
    const Mat O = standard_Omega(n);
    return max_abs(Mat(M * O * M.transpose() - O));
  }
  return max_abs(Mat(M * M.transpose() - Mat::Identity(2 * n, 2 * n)));
}

double algebra_residual(const Mat& K, Statistics stats) {
  require_even_square(K, "K");
  const int n = int(K.rows()) / 2;
  if (stats == Statistics::Boson) {
    const Mat O = standard_Omega(n);
    return max_abs(Mat(K * O + O * K.transpose()));
  }
  return max_abs(Mat(K + K.transpose()));
}

bool is_group_element(const Mat& M, Statistics stats, std::optional<double> tol) {
  return group_residual(M, stats) < tol.value_or(policy().structure_tol * 100);
}

bool is_algebra_element(const Mat& K, Statistics stats, std::optional<double> tol) {
  return algebra_residual(K, stats) < tol.value_or(policy().structure_tol * 100);
}

double killing_form(const Mat& K1, const Mat& K2, Statistics stats) {
  require_same_dim(K1, K2, "killing_form");
  require_even_square(K1, "K1");
  const double n = double(K1.rows()) / 2.0;
  const double pref = stats == Statistics::Boson ? 2.0 * (n + 1.0) : 2.0 * (n - 1.0);
  return pref * (K1 * K2).trace();
}

SplitPM split_pm(const Mat& K, const Mat& J) {
  require_same_dim(K, J, "split_pm");
  SplitPM s;
  const Mat JKJ = J * K * J;
  s.plus = 0.5 * (K + JKJ);
  s.minus = 0.5 * (K - JKJ);
  return s;
}

namespace {

// Pair the multiset {l_i} as (+x, -x) couples; returns x_i >= 0 descending.
std::vector<double> pair_symmetric(std::vector<double> l, double tol, const char* what) {
  std::sort(l.begin(), l.end());
  const int n = int(l.size()) / 2;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double a = l[l.size() - 1 - i];
    const double b = l[i];
    if (std::abs(a + b) > tol * (1.0 + std::abs(a))) {
      throw SpectrumClassificationFailure(std::string(what) + ": spectrum not symmetric");
    }
    out[i] = 0.5 * (a - b);
  }
  return out;  // already descending
}

}  // namespace

RelativeStructure relative_structure(const Mat& J_ref, const Mat& J_target, Statistics stats) {
  require_same_dim(J_ref, J_target, "relative_structure");
  RelativeStructure r;
  r.stats = stats;
  r.Delta = -J_target * J_ref;
  const CVec ev = eigenvalues(r.Delta);
  const double tol = 1e3 * policy().decomposition_tol;

  if (stats == Statistics::Boson) {
    std::vector<double> logs;
    logs.reserve(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      const cplx z = ev(i);
      if (z.real() <= 0.0 || std::abs(z.imag()) > tol * std::abs(z)) {
        throw SpectrumClassificationFailure("bosonic Delta eigenvalue not real positive");
      }
      logs.push_back(std::log(z.real()));
    }
    r.params = pair_symmetric(std::move(logs), tol, "bosonic Delta");
  } else {
    std::vector<double> angles;
    angles.reserve(ev.size());
    int minus_ones = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      const cplx z = ev(i);
      if (std::abs(std::abs(z) - 1.0) > tol) {
        throw SpectrumClassificationFailure("fermionic Delta eigenvalue off the unit circle");
      }
      if (std::abs(z + 1.0) < policy().branch_tol) ++minus_ones;
      angles.push_back(std::abs(std::arg(z)));
    }
    // each pair (e^{i theta}, e^{-i theta}) or (+-1, +-1) contributes two
    // equal |theta| entries; pair them off after sorting
    std::sort(angles.begin(), angles.end(), std::greater<double>());
    r.params.resize(angles.size() / 2);
    for (size_t i = 0; i < r.params.size(); ++i) {
      const double a = angles[2 * i], b = angles[2 * i + 1];
      if (std::abs(a - b) > tol * (1.0 + a)) {
        throw SpectrumClassificationFailure("fermionic Delta angles do not pair");
      }
      r.params[i] = 0.5 * (a + b);
    }
    if (minus_ones % 2 != 0) {
      throw SpectrumClassificationFailure("odd multiplicity of eigenvalue -1");
    }
    r.has_odd_minus_one_pairs = (minus_ones / 2) % 2 == 1;
  }
  return r;
}

namespace {

// Real orthonormal basis of the eigenvalue--(-1) eigenspace of a normal real
// matrix (assembled from complex eigenvectors, then re-orthonormalized).
Mat minus_one_eigenspace(const Mat& Delta, int expected_dim) {
  Eigen::ComplexEigenSolver<CMat> es(Delta.cast<cplx>(), true);
  std::vector<Vec> cols;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()(i) + 1.0) < policy().branch_tol) {
      CVec v = es.eigenvectors().col(i);
      Vec re = v.real(), im = v.imag();
      if (re.norm() > 1e-8) cols.push_back(re);
      if (im.norm() > 1e-8) cols.push_back(im);
    }
  }
  Mat raw(Delta.rows(), cols.size());
  for (size_t i = 0; i < cols.size(); ++i) raw.col(i) = cols[i];
  // rank-revealing orthonormalization
  Eigen::JacobiSVD<Mat> svd(raw, Eigen::ComputeThinU);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > 1e-8 * svd.singularValues()(0)) ++rank;
  }
  if (rank != expected_dim) {
    throw SpectrumClassificationFailure("could not isolate the -1 eigenspace");
  }
  return svd.matrixU().leftCols(rank);
}

// On the -1 eigenspace W (dim divisible by 4) build orthogonal T_W with
// T_W^2 = -1 and {T_W, J_W} = 0; this is the phi = 0 member of the
// non-unique square-root family.
Mat square_root_on_minus_one_block(const Mat& B, const Mat& J) {
  const int m = int(B.cols());
  const Mat JW = B.transpose() * J * B;
  // adapted basis (e_1, J e_1, e_2, J e_2, ...) inside W
  Mat E = Mat::Zero(m, m);
  Mat basis = Mat::Identity(m, m);
  int filled = 0;
  for (int attempt = 0; attempt < m && filled < m; ++attempt) {
    Vec cand = basis.col(attempt % m);
    for (int j = 0; j < filled; ++j) cand -= E.col(j).dot(cand) * E.col(j);
    if (cand.norm() < 1e-8) continue;
    Vec e = cand / cand.norm();
    Vec f = JW * e;
    for (int j = 0; j < filled; ++j) f -= E.col(j).dot(f) * E.col(j);
    if (f.norm() < 1e-8) continue;
    f /= f.norm();
    E.col(filled) = e;
    E.col(filled + 1) = f;
    filled += 2;
  }
  if (filled != m) throw SpectrumClassificationFailure("adapted basis construction failed");
  // pairwise block: T e1 = e2, T f1 = -f2, T e2 = -e1, T f2 = f1
  Mat Tad = Mat::Zero(m, m);
  for (int k = 0; k + 3 < m; k += 4) {
    Tad(k + 2, k) = 1.0;
    Tad(k + 3, k + 1) = -1.0;
    Tad(k, k + 2) = -1.0;
    Tad(k + 1, k + 3) = 1.0;
  }
  return (B * E) * Tad * (B * E).transpose();
}

}  // namespace

CartanResult cartan_decompose(const Mat& M, const Mat& J, Statistics stats) {
  require_same_dim(M, J, "cartan_decompose");
  if (!is_group_element(M, stats, policy().decomposition_tol * 1e3)) {
    throw NotGroupElement("cartan_decompose: M is not a group element");
  }
  const Mat JM = M * J * M.inverse();
  const Mat Delta = -JM * J;

  CartanResult res;
  if (stats == Statistics::Fermion) {
    if (M.determinant() < 0.0) {
      throw NoCartanDecomposition(
          "M lies in the component not connected to the identity (odd (-1,-1) pairs)");
    }
    const CVec ev = eigenvalues(Delta);
    int minus_ones = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (std::abs(ev(i) + 1.0) < policy().branch_tol) ++minus_ones;
    }
    if (minus_ones > 0) {
      // (-1,-1,-1,-1) quadruples: square root exists but is not unique.
      res.unique = false;
      const Mat B = minus_one_eigenspace(Delta, minus_ones);
      const Mat P = B * B.transpose();
      const Mat shifted = Delta + 2.0 * P;  // move -1 eigenvalues to +1
      const Mat S = matrix_function(shifted, MatFun::Sqrt);
      res.T = S * (Mat::Identity(Delta.rows(), Delta.cols()) - P) +
              square_root_on_minus_one_block(B, J);
    } else {
      res.T = matrix_function(Delta, MatFun::Sqrt);
    }
  } else {
    res.T = matrix_function(Delta, MatFun::Sqrt);
  }
  res.u = res.T.inverse() * M;

  const double scale = std::max(1.0, max_abs(M));
  const double guard = 1e4 * policy().decomposition_tol * scale;
  if (max_abs(Mat(res.T * res.u - M)) > guard ||
      max_abs(Mat(res.T * J * res.T - J)) > guard ||
      max_abs(Mat(res.u * J - J * res.u)) > guard) {
    throw IllConditioned("cartan_decompose residuals exceed policy guard");
  }
  return res;
}

Mat generator_between(const Mat& J_ref, const Mat& J_target, Statistics stats) {
  RelativeStructure rel = relative_structure(J_ref, J_target, stats);
  if (stats == Statistics::Fermion && rel.has_odd_minus_one_pairs) {
    throw NoCartanDecomposition("generator_between: disconnected parity sectors");
  }
  return 0.5 * matrix_function(rel.Delta, MatFun::Log);
}

namespace {

struct SchurBlocks {
  Mat U;                       // orthogonal, B = U S U^T with S canonical
  std::vector<double> sigmas;  // positive, sorted descending
};

// Canonical antisymmetric Schur form: S = direct sum of [[0, s],[-s, 0]] with
// s > 0, blocks sorted descending. Sign fixed by column swaps, order by block
// permutations; deterministic for a deterministic input.
SchurBlocks antisymmetric_canonical(const Mat& B, const char* what) {
  const Eigen::Index n = B.rows();
  Eigen::RealSchur<Mat> schur(B);
  if (schur.info() != Eigen::Success) throw IllConditioned("real Schur failed");
  Mat U = schur.matrixU();
  Mat S = schur.matrixT();
  const double scale = std::max(1.0, max_abs(B));

  std::vector<std::pair<double, Eigen::Index>> blocks;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    double s = S(k, k + 1);
    if (std::abs(S(k + 1, k)) < 1e-12 * scale && std::abs(s) < 1e-12 * scale) {
      throw DegenerateForm(std::string(what) + ": singular antisymmetric form");
    }
    if (s < 0) {  // swap the two columns to flip the block sign
      U.col(k).swap(U.col(k + 1));
      s = -s;
    }
    blocks.emplace_back(s, k);
  }
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  SchurBlocks out;
  out.U.resize(n, n);
  for (size_t i = 0; i < blocks.size(); ++i) {
    out.U.col(2 * i) = U.col(blocks[i].second);
    out.U.col(2 * i + 1) = U.col(blocks[i].second + 1);
    out.sigmas.push_back(blocks[i].first);
  }
  return out;
}

}  // namespace

BlockStandardForm block_standard_form(const Mat& h, Statistics stats) {
  require_even_square(h, "h");
  const int N = int(h.rows()) / 2;
  const Mat P = qp_to_interleaved_perm(N);
  BlockStandardForm out;

  if (stats == Statistics::Boson) {
    check_symmetric(h, "h");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.transpose()));
    if (es.eigenvalues().minCoeff() <= 0.0) {
      throw NotPositiveDefinite("bosonic h must be positive definite");
    }
    const Mat W = es.operatorSqrt();
    const Mat Oint = P * standard_Omega(N) * P.transpose();
    const Mat h_int = P * h * P.transpose();
    const Mat W_int = P * W * P.transpose();
    SchurBlocks sb = antisymmetric_canonical(W_int * Oint * W_int, "W Omega W");
    Mat Lambda = Mat::Zero(2 * N, 2 * N);
    for (int i = 0; i < N; ++i) {
      Lambda(2 * i, 2 * i) = std::sqrt(sb.sigmas[i]);
      Lambda(2 * i + 1, 2 * i + 1) = std::sqrt(sb.sigmas[i]);
    }
    const Mat M_int = W_int.inverse() * sb.U * Lambda;
    out.M = P.transpose() * M_int * P;
    out.params = sb.sigmas;
    (void)h_int;
  } else {
    check_antisymmetric(h, "h");
    SchurBlocks sb = antisymmetric_canonical(0.5 * (h - h.transpose()), "h");
    out.M = sb.U * P;  // M^T h M lands in QP ordering [[0, diag(b)], [-diag(b), 0]]
    out.params = sb.sigmas;
  }
  return out;
}

BlockStandardForm block_standard_form_from_generator(const Mat& K, Statistics stats) {
  require_even_square(K, "K");
  const int N = int(K.rows()) / 2;
  Mat h;
  if (stats == Statistics::Boson) {
    h = -standard_Omega(N) * K;  // h = omega K with omega = -Omega for standard form
  } else {
    h = K;  // g = 1
  }
  return block_standard_form(h, stats);
}

Mat project_complex_structure(const Mat& J_near) {
  require_even_square(J_near, "J");
  const Mat S = matrix_function(Mat(-J_near * J_near), MatFun::Sqrt);
  return J_near * S.inverse();
}

IdentityReport validate_identities(const KahlerTriple& t) {
  const int d = t.dim();
  const Mat I = Mat::Identity(d, d);
  IdentityReport rep;
  auto add = [&rep](const std::string& name, const Mat& resid) {
    rep.residuals.emplace_back(name, max_abs(resid));
  };
  add("-J^2 = 1", -t.J * t.J - I);
  add("J Omega J^T = Omega", t.J * t.Omega * t.J.transpose() - t.Omega);
  add("-Omega J^T = J Omega", -t.Omega * t.J.transpose() - t.J * t.Omega);
  add("J G J^T = G", t.J * t.G * t.J.transpose() - t.G);
  add("-G J^T = J G", -t.G * t.J.transpose() - t.J * t.G);
  add("Omega J^T = G", t.Omega * t.J.transpose() - t.G);
  add("-J Omega = G", -t.J * t.Omega - t.G);
  add("Omega omega = 1", t.Omega * t.omega - I);
  add("G g = 1", t.G * t.g - I);
  add("-omega G omega = g", -t.omega * t.G * t.omega - t.g);
  add("-g Omega g = omega", -t.g * t.Omega * t.g - t.omega);
  add("Omega g = J", t.Omega * t.g - t.J);
  add("-G omega = J", -t.G * t.omega - t.J);
  add("Omega^T = -Omega", t.Omega.transpose() + t.Omega);
  add("G^T = G", t.G.transpose() - t.G);
  rep.max_residual = 0.0;
  for (auto& [name, r] : rep.residuals) rep.max_residual = std::max(rep.max_residual, r);
  return rep;
}

Statistics statistics_from_string(const std::string& s) {
  if (s == "boson" || s == "Boson" || s == "bosons") return Statistics::Boson;
  if (s == "fermion" || s == "Fermion" || s == "fermions") return Statistics::Fermion;
  throw ValidationError("unknown statistics '" + s + "'");
}

Ordering ordering_from_string(const std::string& s) {
  if (s == "QP" || s == "qp") return Ordering::QP;
  if (s == "AAdag" || s == "aadag") return Ordering::AAdag;
  throw ValidationError("unknown ordering '" + s + "'");
}

}  // namespace gaussk
