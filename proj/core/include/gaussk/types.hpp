#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace gaussk {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

/// Which canonical background structure is fixed: Omega (bosons) or G (fermions).
enum class Statistics { Boson, Fermion };

/// Component ordering of xi: QP is (q_1..q_N, p_1..p_N); AAdag the derived
/// complex ladder representation (a_1..a_N, a'_1..a'_N).
enum class Ordering { QP, AAdag };

inline const char* to_string(Statistics s) {
  return s == Statistics::Boson ? "boson" : "fermion";
}

inline const char* to_string(Ordering o) { return o == Ordering::QP ? "QP" : "AAdag"; }

Statistics statistics_from_string(const std::string& s);
Ordering ordering_from_string(const std::string& s);

/// Statistics sign: +1 for bosons, -1 for fermions.
inline double stats_sign(Statistics s) { return s == Statistics::Boson ? 1.0 : -1.0; }

inline int phase_dim(int n_modes) { return 2 * n_modes; }

}  // namespace gaussk
