#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gaussk/errors.hpp"
#include "gaussk/matfun.hpp"
#include "gaussk/types.hpp"

namespace gaussk {

/// Compatible (or deliberately incompatible, for mixed states) Kahler data
/// (G, Omega, J) with cached inverses. Storage is always real QP ordering
/// (q_1..q_N, p_1..p_N); the AAdag representation is a derived view.
struct KahlerTriple {
  Statistics stats = Statistics::Boson;
  int n_modes = 0;
  Mat G;      // dual metric G^{ab}
  Mat Omega;  // dual symplectic form Omega^{ab}
  Mat J;      // linear complex structure J^a_b
  Mat g;      // inverse metric g_{ab}
  Mat omega;  // inverse symplectic form omega_{ab}
  bool compatible = false;  // J^2 = -1 within policy

  int dim() const { return 2 * n_modes; }
};

/// Standard-form triple in QP ordering: G = 1, Omega = J = [[0,1],[-1,0]].
KahlerTriple standard_structures(Statistics stats, int n_modes);

/// How a 2N x 2N tensor (or 2N vector) transforms under a basis change.
enum class TensorKind { Bilinear, LinearMap, Form, Vector, Covector };

/// Basis change xi_AAdag = C xi_QP with a_k = (q_k + i p_k)/sqrt(2).
CMat aadag_basis_change(int n_modes);

/// Matrix representation of a QP tensor in the AAdag basis.
CMat to_aadag(const Mat& t, TensorKind kind, int n_modes);

struct AAdagView {
  CMat G, Omega, J;
};
AAdagView to_aadag(const KahlerTriple& triple);

/// Build the triple from any two of (G, Omega, J); the third follows from the
/// compatibility equation (stats selects the branch used for J). The result
/// is flagged `compatible` iff J^2 = -1 within tolerance.
KahlerTriple complete_triple(Statistics stats, std::optional<Mat> G, std::optional<Mat> Omega,
                             std::optional<Mat> J);

/// Residual of the defining group/algebra relation w.r.t. the standard
/// background structure (Omega for bosons, G for fermions).
double group_residual(const Mat& M, Statistics stats);
double algebra_residual(const Mat& K, Statistics stats);

bool is_group_element(const Mat& M, Statistics stats, std::optional<double> tol = {});
bool is_algebra_element(const Mat& K, Statistics stats, std::optional<double> tol = {});

/// Killing form 2(N+1)Tr(K1 K2) for bosons, 2(N-1)Tr(K1 K2) for fermions.
double killing_form(const Mat& K1, const Mat& K2, Statistics stats);

struct SplitPM {
  Mat plus;   // anticommutes with J (u_perp part)
  Mat minus;  // commutes with J (u part)
};

/// K_pm = (K +- J K J)/2 with K = K_+ + K_-.
SplitPM split_pm(const Mat& K, const Mat& J);

/// Delta = -J_target J_ref with its classified spectrum. `params` holds one
/// entry per eigenvalue pair, sorted descending: squeeze rho_i >= 0 for
/// bosons (pair e^{rho}, e^{-rho}), angle theta_i in [0,pi] for fermions.
struct RelativeStructure {
  Mat Delta;
  Statistics stats = Statistics::Boson;
  std::vector<double> params;
  bool has_odd_minus_one_pairs = false;
};

RelativeStructure relative_structure(const Mat& J_ref, const Mat& J_target, Statistics stats);

/// Cartan decomposition M = T u with T = sqrt(Delta), T J T = J, [u, J] = 0.
/// `unique` is false when fermionic (-1,-1,-1,-1) quadruples force a choice.
struct CartanResult {
  Mat T;
  Mat u;
  bool unique = true;
};

CartanResult cartan_decompose(const Mat& M, const Mat& J, Statistics stats);

/// K_+ = 1/2 log Delta; exp(K_+) J_ref exp(-K_+) = J_target.
Mat generator_between(const Mat& J_ref, const Mat& J_target, Statistics stats);

/// Group element M and positive parameters with M^T h M in standard form:
/// diag(eps, eps) (bosons, Williamson) resp. [[0, diag(beta)], [-diag(beta), 0]]
/// (fermions), QP ordering, parameters sorted descending.
struct BlockStandardForm {
  Mat M;
  std::vector<double> params;
};

BlockStandardForm block_standard_form(const Mat& h, Statistics stats);
BlockStandardForm block_standard_form_from_generator(const Mat& K, Statistics stats);

/// Nearest exact complex structure to a near-complex structure (eigenvalues
/// +- i lambda with lambda near 1): J (-J^2)^{-1/2}, which rescales the
/// spectrum back to +-i without moving the eigenspaces.
Mat project_complex_structure(const Mat& J_near);

/// Residual of every Kahler identity from the common-formula list.
struct IdentityReport {
  std::vector<std::pair<std::string, double>> residuals;
  double max_residual = 0.0;
  bool pass(double tol) const { return max_residual < tol; }
};

IdentityReport validate_identities(const KahlerTriple& triple);

/// Permutation matrix mapping QP ordering to interleaved (q_1,p_1,...,q_N,p_N).
Mat qp_to_interleaved_perm(int n_modes);

}  // namespace gaussk
