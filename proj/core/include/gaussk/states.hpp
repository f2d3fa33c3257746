#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gaussk/kahler.hpp"
#include "gaussk/types.hpp"

namespace gaussk {

/// Pure Gaussian state |J, z>: compatible Kahler triple plus displacement
/// (z = 0 for fermions). Immutable after construction.
struct PureGaussianState {
  KahlerTriple triple;
  Vec z;

  Statistics stats() const { return triple.stats; }
  int n_modes() const { return triple.n_modes; }
  int dim() const { return triple.dim(); }
  const Mat& J() const { return triple.J; }

  /// State-dependent covariance matrix: G for bosons, Omega for fermions.
  const Mat& covariance() const {
    return triple.stats == Statistics::Boson ? triple.G : triple.Omega;
  }
  CMat two_point() const {
    return 0.5 * (triple.G.cast<cplx>() + cplx(0, 1) * triple.Omega.cast<cplx>());
  }
};

PureGaussianState pure_state(Statistics stats, const Mat& J, const Vec& z = Vec());

/// J' = M J M^{-1}, z' = M z + z_shift.
PureGaussianState transform(const PureGaussianState& state, const Mat& M,
                            const Vec& z_shift = Vec());

/// Mixed Gaussian state rho = exp(-Q): structures (G, Omega) with the
/// restricted complex structure J (eigenvalues +-i lambda, lambda >= 1 bosons,
/// lambda in [0,1] fermions). The exponent data (q, c) is present when the
/// state was built from it or has been computed (pure directions make q
/// divergent, hence optional).
struct MixedGaussianState {
  Statistics stats = Statistics::Boson;
  int n_modes = 0;
  Mat G;
  Mat Omega;
  Mat J;
  Vec z;
  std::optional<Mat> q;
  std::optional<double> c;

  int dim() const { return 2 * n_modes; }
  const Mat& covariance() const { return stats == Statistics::Boson ? G : Omega; }
  CMat two_point() const { return 0.5 * (G.cast<cplx>() + cplx(0, 1) * Omega.cast<cplx>()); }

  /// lambda_i >= 0 sorted descending, one per mode.
  std::vector<double> lambdas() const;
  bool is_pure(double tol = 0.0) const;
};

/// Build from the exponent bilinear form q (symmetric positive definite for
/// bosons, antisymmetric for fermions) and displacement z (bosons only).
MixedGaussianState mixed_from_q(Statistics stats, const Mat& q, const Vec& z = Vec());

/// Build from a restricted complex structure J; spectrum validated.
MixedGaussianState mixed_from_J(Statistics stats, const Mat& J, const Vec& z = Vec());

/// View a pure state as a mixed one (q, c unset: the exponent diverges).
MixedGaussianState mixed_from_pure(const PureGaussianState& state);

/// Recover (q, c) from J; PureDirection when an eigenvalue sits at the pure
/// boundary and the exponent diverges.
std::pair<Mat, double> q_from_mixed(const MixedGaussianState& state);

/// Spectrum of rho as per-mode Gaussian weights lambda_n generated by beta_i.
struct GaussianSpectrum {
  Statistics stats = Statistics::Boson;
  std::vector<double> betas;  // aligned with lambdas() ordering; +inf = pure mode
  double weight(int mode, int occupation) const;
};

GaussianSpectrum gaussian_spectrum(const MixedGaussianState& state);

/// Wick pairing sum over the given phase-space indices of the centered
/// operators; odd orders vanish. Deterministic pairwise tree summation.
cplx wick_npoint(const PureGaussianState& state, const std::vector<int>& indices);
cplx wick_npoint(const MixedGaussianState& state, const std::vector<int>& indices);
cplx wick_npoint_c2(const CMat& C2, const std::vector<int>& indices, Statistics stats);

struct OverlapResult {
  double value = 0.0;
  bool parity_orthogonal = false;
};

/// |<J1,z1|J2,z2>|^2 from the relative structure spectrum; exact 0 with the
/// parity flag for fermionic states in opposite parity sectors.
OverlapResult overlap_abs2(const PureGaussianState& s1, const PureGaussianState& s2);

/// Bosonic characteristic function chi(w) = exp(-1/4 w G w - i w z).
cplx characteristic_function(const MixedGaussianState& state, const Vec& w);
cplx characteristic_function(const PureGaussianState& state, const Vec& w);

/// Fermionic chi has a Grassmann argument; its coefficient bilinear -i/4 Omega.
CMat characteristic_coefficient(const MixedGaussianState& state);

/// Mode functions u (columns, J u = -i u) and dual covectors v (rows) with
/// omega u* u = i delta (bosons) / g u* u = delta (fermions), v u = delta.
struct ModeBasis {
  CMat u;  // 2N x N
  CMat v;  // N x 2N
};

ModeBasis mode_basis(const PureGaussianState& state);

/// Bogoliubov coefficients of target's ladder operators in terms of ref's.
struct BogoliubovData {
  CMat alpha, beta;
};

BogoliubovData bogoliubov(const PureGaussianState& ref, const PureGaussianState& target);

/// <target| N_ref |target> = -+ 1/4 tr(1 - Delta) (- bosons, + fermions)
/// plus 1/2 (z - z~) g (z - z~) for bosons.
double number_expectation(const PureGaussianState& target, const PureGaussianState& ref);

/// L = tanh K_+ and the scalar |<J|exp(K_+ hat)|J>| = det^{+-1/8}(1 - L^2).
struct NormalOrderFactors {
  Mat L;
  double scalar = 1.0;
};

NormalOrderFactors normal_order_factors(const Mat& K_plus, const PureGaussianState& state);

/// log(e^K e^w) = K + eta + w B w with eta = w K/(e^K - 1) and
/// B = i F(K) Omega (bosons) / F(K) G (fermions). K may be complexified.
struct BchLinearQuadratic {
  CVec eta;  // covector components
  CMat B;
};

BchLinearQuadratic bch_linear_quadratic(const CMat& K, const CVec& w, Statistics stats);

/// J -> -J^{-1}: maps bosonic mixed spectra {lambda} to fermionic {1/lambda}.
Mat duality(const Mat& J);

}  // namespace gaussk
