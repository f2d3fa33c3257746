#pragma once

#include <functional>

#include "gaussk/errors.hpp"
#include "gaussk/types.hpp"

namespace gaussk {

/// Scalar functions liftable to matrices through the spectral decomposition.
/// `Argh` is arctanh on [0,1) continued as arccoth on (1,inf), i.e.
/// argh(x) = 1/4 log((1+x)/(1-x))^2.
enum class MatFun { Sqrt, Log, Exp, Tanh, Argh, Tan, Cot, Abs };

/// Apply f on the spectrum of a diagonalizable complex matrix.
/// Throws IllConditioned when the eigenvector matrix condition exceeds the
/// policy bound and BranchViolation when an eigenvalue sits on the cut.
CMat matrix_function(const CMat& A, MatFun f);
CMat matrix_function(const CMat& A, const std::function<cplx(cplx)>& f);

/// Real-in real-out variant: the spectrum of A must be closed under complex
/// conjugation and f must commute with conjugation; the result is realified
/// (imaginary residue checked against tolerance, then dropped).
Mat matrix_function(const Mat& A, MatFun f);
Mat matrix_function(const Mat& A, const std::function<cplx(cplx)>& f);

/// exp(A) for real A; spectral route like every other matrix function here.
Mat matrix_exp(const Mat& A);

/// Eigenvalues of a real matrix, unsorted.
CVec eigenvalues(const Mat& A);

/// phi(A) = A^{-1}(1 - exp(-A)), the exponential integrator kernel, with the
/// removable singularity at eigenvalue 0 evaluated by series.
Mat matrix_expm1_over(const Mat& A);

/// x/(e^x - 1) applied spectrally (series below policy().series_threshold).
CMat matrix_x_over_expm1(const CMat& K);

/// F(K) = 1/4 (K - sinh K)/(1 - cosh K), odd, F(0) = 0; series near 0.
CMat matrix_bch_F(const CMat& K);

/// Sign of the Pfaffian of a real antisymmetric matrix (Parlett-Reid with
/// pivoting). Returns 0 if the matrix is singular within tolerance.
int pfaffian_sign(const Mat& A);

/// || A ||_max, convenience for residual checks.
inline double max_abs(const Mat& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const CMat& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace gaussk
