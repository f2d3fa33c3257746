#include "gaussk/matfun.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "gaussk/policy.hpp"

namespace gaussk {

namespace {

struct EigData {
  CMat V;
  CVec d;
  CMat Vinv;
};

EigData decompose(const CMat& A) {
  Eigen::ComplexEigenSolver<CMat> es(A, true);
  if (es.info() != Eigen::Success) {
    throw IllConditioned("complex eigendecomposition failed");
  }
  EigData e;
  e.V = es.eigenvectors();
  e.d = es.eigenvalues();
  Eigen::JacobiSVD<CMat> svd(e.V);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0 || smax / smin > policy().condition_limit) {
    throw IllConditioned("eigenvector matrix condition exceeds policy bound");
  }
  e.Vinv = e.V.inverse();
  return e;
}

void check_off_negative_axis(cplx z, const char* fname, bool exclude_zero) {
  const double tol = policy().branch_tol;
  if (exclude_zero && std::abs(z) < tol) {
    throw BranchViolation(std::string(fname) + ": eigenvalue at 0");
  }
  if (z.real() < 0.0 && std::abs(z.imag()) <= tol * std::max(1.0, std::abs(z))) {
    throw BranchViolation(std::string(fname) + ": eigenvalue on the negative real axis");
  }
}

void check_away_from(cplx z, cplx pole, const char* fname) {
  if (std::abs(z - pole) < policy().branch_tol) {
    throw BranchViolation(std::string(fname) + ": eigenvalue at a pole/branch point");
  }
}

// argh(x) = 1/4 log((1+x)/(1-x))^2: arctanh on [0,1), arccoth on (1,inf).
// Real eigenvalues take the real formula; the principal-log expression would
// pick up a spurious i*pi/2 for x > 1.
cplx scalar_argh(cplx z) {
  check_away_from(z, cplx(1, 0), "argh");
  check_away_from(z, cplx(-1, 0), "argh");
  if (std::abs(z.imag()) < policy().branch_tol * std::max(1.0, std::abs(z))) {
    const double x = z.real();
    return cplx(0.25 * std::log(((1 + x) * (1 + x)) / ((1 - x) * (1 - x))), 0.0);
  }
  return 0.5 * (std::log(1.0 + z) - std::log(1.0 - z));
}

cplx apply_scalar(MatFun f, cplx z) {
  switch (f) {
    case MatFun::Sqrt:
      check_off_negative_axis(z, "sqrt", false);
      return std::sqrt(z);
    case MatFun::Log:
      check_off_negative_axis(z, "log", true);
      return std::log(z);
    case MatFun::Exp:
      return std::exp(z);
    case MatFun::Tanh:
      if (std::abs(std::cosh(z)) < policy().branch_tol) {
        throw BranchViolation("tanh: eigenvalue at a pole");
      }
      return std::tanh(z);
    case MatFun::Argh:
      return scalar_argh(z);
    case MatFun::Tan:
      if (std::abs(std::cos(z)) < policy().branch_tol) {
        throw BranchViolation("tan: eigenvalue at a pole");
      }
      return std::tan(z);
    case MatFun::Cot:
      if (std::abs(std::sin(z)) < policy().branch_tol) {
        throw BranchViolation("cot: eigenvalue at a pole");
      }
      return std::cos(z) / std::sin(z);
    case MatFun::Abs:
      return cplx(std::abs(z), 0.0);
  }
  throw ValidationError("unknown matrix function");
}

CMat apply_spectral(const CMat& A, const std::function<cplx(cplx)>& f) {
  if (A.rows() != A.cols()) throw DimensionMismatch("matrix function needs a square matrix");
  EigData e = decompose(A);
  CVec fd(e.d.size());
  for (Eigen::Index i = 0; i < e.d.size(); ++i) fd(i) = f(e.d(i));
  return e.V * fd.asDiagonal() * e.Vinv;
}

Mat realify(const CMat& R, const char* what) {
  const double scale = std::max(1.0, max_abs(R));
  const double imag = R.imag().size() ? R.imag().cwiseAbs().maxCoeff() : 0.0;
  if (imag > policy().decomposition_tol * scale * 10.0) {
    throw IllConditioned(std::string(what) +
                         ": result has a non-negligible imaginary part (spectrum not "
                         "conjugate-symmetric?)");
  }
  return R.real();
}

}  // namespace

CMat matrix_function(const CMat& A, MatFun f) {
  return apply_spectral(A, [f](cplx z) { return apply_scalar(f, z); });
}

CMat matrix_function(const CMat& A, const std::function<cplx(cplx)>& f) { return apply_spectral(A, f); }

Mat matrix_function(const Mat& A, MatFun f) {
  return realify(matrix_function(CMat(A.cast<cplx>()), f), "matrix_function");
}

Mat matrix_function(const Mat& A, const std::function<cplx(cplx)>& f) {
  return realify(apply_spectral(A.cast<cplx>(), f), "matrix_function");
}

Mat matrix_exp(const Mat& A) { return matrix_function(A, MatFun::Exp); }

CVec eigenvalues(const Mat& A) {
  Eigen::ComplexEigenSolver<CMat> es(A.cast<cplx>(), false);
  if (es.info() != Eigen::Success) throw IllConditioned("eigenvalue computation failed");
  return es.eigenvalues();
}

Mat matrix_expm1_over(const Mat& A) {
  auto f = [](cplx z) -> cplx {
    if (std::abs(z) < policy().series_threshold) {
      // (1 - e^{-z})/z = sum_k (-z)^k/(k+1)!
      cplx acc(1, 0), term(1, 0);
      for (int k = 1; k <= 6; ++k) {
        term *= -z / double(k + 1);
        acc += term;
      }
      return acc;
    }
    return (1.0 - std::exp(-z)) / z;
  };
  return matrix_function(A, f);
}

CMat matrix_x_over_expm1(const CMat& K) {
  auto f = [](cplx z) -> cplx {
    if (std::abs(z) < policy().series_threshold) {
      const cplx z2 = z * z;
      return 1.0 - z / 2.0 + z2 / 12.0 - z2 * z2 / 720.0;
    }
    const cplx den = std::exp(z) - 1.0;
    if (std::abs(den) < policy().branch_tol) {
      throw IllConditioned("x/(e^x-1): eigenvalue near 2*pi*i*k");
    }
    return z / den;
  };
  return matrix_function(K, f);
}

CMat matrix_bch_F(const CMat& K) {
  auto f = [](cplx z) -> cplx {
    if (std::abs(z) < policy().series_threshold) {
      const cplx z2 = z * z;
      return z / 12.0 - z * z2 / 360.0 + z * z2 * z2 / 10080.0;
    }
    const cplx den = 1.0 - std::cosh(z);
    if (std::abs(den) < policy().branch_tol) {
      throw IllConditioned("F(K): eigenvalue near 2*pi*i*k");
    }
    return 0.25 * (z - std::sinh(z)) / den;
  };
  return matrix_function(K, f);
}

int pfaffian_sign(const Mat& A) {
  const Eigen::Index n = A.rows();
  if (n % 2 != 0) return 0;
  Mat B = 0.5 * (A - A.transpose());  // enforce antisymmetry
  const double scale = std::max(1.0, max_abs(B));
  int sign = 1;
  double logmag = 0.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    // pivot: largest |B(j,k)| for j > k
    Eigen::Index piv = k + 1;
    double best = std::abs(B(k + 1, k));
    for (Eigen::Index j = k + 2; j < n; ++j) {
      if (std::abs(B(j, k)) > best) {
        best = std::abs(B(j, k));
        piv = j;
      }
    }
    if (best < 1e-13 * scale) return 0;
    if (piv != k + 1) {
      B.row(piv).swap(B.row(k + 1));
      B.col(piv).swap(B.col(k + 1));
      sign = -sign;
    }
    for (Eigen::Index j = k + 2; j < n; ++j) {
      const double factor = B(j, k) / B(k + 1, k);
      B.row(j) -= factor * B.row(k + 1);
      B.col(j) -= factor * B.col(k + 1);
    }
    logmag += std::log(std::abs(B(k, k + 1)));
    if (B(k, k + 1) < 0) sign = -sign;
  }
  (void)logmag;
  return sign;
}

}  // namespace gaussk
