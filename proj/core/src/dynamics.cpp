#include "gaussk/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "gaussk/matfun.hpp"
#include "gaussk/policy.hpp"

namespace gaussk {

namespace {

void require_match(const PureGaussianState& s, const QuadraticHamiltonian& H, const char* what) {
  if (s.stats() != H.stats || s.n_modes() != H.n_modes) {
    throw DimensionMismatch(std::string(what) + ": state and Hamiltonian do not match");
  }
}

PureGaussianState make_state_unchecked(Statistics stats, const Mat& J, const Vec& z) {
  PureGaussianState s;
  const int n = int(J.rows()) / 2;
  const KahlerTriple std_t = standard_structures(stats, n);
  s.triple.stats = stats;
  s.triple.n_modes = n;
  s.triple.J = J;
  s.triple.Omega = stats == Statistics::Boson ? std_t.Omega : Mat(J * std_t.G);
  s.triple.G = stats == Statistics::Boson ? Mat(-J * std_t.Omega) : std_t.G;
  s.triple.g = s.triple.G.inverse();
  s.triple.omega = s.triple.Omega.inverse();
  s.triple.compatible =
      max_abs(Mat(J * J + Mat::Identity(2 * n, 2 * n))) < 1e2 * policy().decomposition_tol;
  s.z = z.size() ? z : Vec::Zero(2 * n);
  return s;
}

}  // namespace

QuadraticHamiltonian quadratic_hamiltonian(Statistics stats, const Mat& h_raw, const Vec& f,
                                           double c0) {
  if (h_raw.rows() != h_raw.cols() || h_raw.rows() % 2 != 0 || h_raw.rows() == 0) {
    throw DimensionMismatch("quadratic_hamiltonian: h must be 2N x 2N");
  }
  QuadraticHamiltonian H;
  H.stats = stats;
  H.n_modes = int(h_raw.rows()) / 2;
  H.c0 = c0;
  const KahlerTriple std_t = standard_structures(stats, H.n_modes);
  if (stats == Statistics::Boson) {
    H.h = 0.5 * (h_raw + h_raw.transpose());
    H.f = f.size() ? f : Vec::Zero(H.dim());
    if (H.f.size() != H.dim()) throw DimensionMismatch("quadratic_hamiltonian: f size");
    H.K = std_t.Omega * H.h;
    Eigen::SelfAdjointEigenSolver<Mat> es(H.h, Eigen::EigenvaluesOnly);
    H.stable = es.eigenvalues().minCoeff() > 0.0;
  } else {
    H.h = 0.5 * (h_raw - h_raw.transpose());
    if (f.size() && f.cwiseAbs().maxCoeff() > 0.0) {
      throw FermionDisplacement("quadratic_hamiltonian: fermionic linear term is unphysical");
    }
    H.f = Vec::Zero(H.dim());
    H.K = std_t.G * H.h;
    H.stable = true;
  }
  return H;
}

QuadraticHamiltonian DrivenHamiltonian::at(double t) const {
  return quadratic_hamiltonian(stats, h(t), f ? f(t) : Vec());
}

DrivenHamiltonian constant_drive(const QuadraticHamiltonian& H) {
  DrivenHamiltonian d;
  d.stats = H.stats;
  d.n_modes = H.n_modes;
  Mat h = H.h;
  Vec f = H.f;
  const int dim = H.dim();
  d.h = [h](double) { return h; };
  d.f = [f](double) { return f; };
  d.h_derivative = [dim](double, int) { return Mat::Zero(dim, dim); };
  d.f_derivative = [dim](double, int) { return Vec::Zero(dim); };
  return d;
}

double energy_of(const Mat& J, const Vec& z, const QuadraticHamiltonian& H) {
  // bosons: c0 - 1/4 Tr(KJ); fermions carry the opposite sign (fixed against
  // exact diagonalization; the trace term flips with the i in the fermionic H)
  double e = H.c0 - stats_sign(H.stats) * 0.25 * (H.K * J).trace();
  if (z.size() && z.cwiseAbs().maxCoeff() > 0.0) {
    e += 0.5 * z.dot(H.h * z) + H.f.dot(z);
  }
  return e;
}

double energy(const PureGaussianState& state, const QuadraticHamiltonian& H) {
  require_match(state, H, "energy");
  return energy_of(state.J(), state.z, H);
}

namespace {

void require_stable(const QuadraticHamiltonian& H, const char* what) {
  if (H.stats == Statistics::Boson) {
    if (!H.stable) throw UnstableHamiltonian(std::string(what) + ": h is not positive definite");
  } else {
    const CVec ev = eigenvalues(H.K);
    const double emax = ev.cwiseAbs().maxCoeff();
    if (emax == 0.0 || ev.cwiseAbs().minCoeff() < 1e-10 * emax) {
      throw UnstableHamiltonian(std::string(what) + ": fermionic h is degenerate");
    }
  }
}

}  // namespace

PureGaussianState ground_state(const QuadraticHamiltonian& H) {
  require_stable(H, "ground_state");
  const Mat absK = matrix_function(H.K, MatFun::Abs);
  const Mat J0 = absK.inverse() * H.K;
  Vec z0;
  if (H.stats == Statistics::Boson) {
    z0 = -H.h.ldlt().solve(H.f);
  }
  return pure_state(H.stats, J0, z0);
}

double vacuum_energy(const QuadraticHamiltonian& H) {
  require_stable(H, "vacuum_energy");
  const Mat absK = matrix_function(H.K, MatFun::Abs);
  double e0 = H.c0 + stats_sign(H.stats) * 0.25 * absK.trace();
  if (H.stats == Statistics::Boson && H.f.cwiseAbs().maxCoeff() > 0.0) {
    e0 -= 0.5 * H.f.dot(H.h.ldlt().solve(H.f));
  }
  return e0;
}

PureGaussianState evolve_const(const PureGaussianState& state, const QuadraticHamiltonian& H,
                               double t) {
  require_match(state, H, "evolve_const");
  if (t == 0.0) return state;
  const Mat M = matrix_exp(Mat(H.K * t));
  const Mat J1 = M * state.J() * M.inverse();
  Vec z1 = M * state.z;
  if (H.stats == Statistics::Boson && H.f.cwiseAbs().maxCoeff() > 0.0) {
    const KahlerTriple std_t = standard_structures(H.stats, H.n_modes);
    // int_0^t e^{K(t-t')} dt' Omega f = t M (1 - e^{-Kt})/(Kt) Omega f
    z1 += t * M * matrix_expm1_over(Mat(H.K * t)) * (std_t.Omega * H.f);
  }
  return pure_state(H.stats, J1, z1);
}

EvolutionResult evolve_driven(const PureGaussianState& state, const DrivenHamiltonian& Hd,
                              double t0, double t1, double dt) {
  if (dt <= 0.0 || t1 < t0) throw ValidationError("evolve_driven: bad time grid");
  if (state.stats() != Hd.stats || state.n_modes() != Hd.n_modes) {
    throw DimensionMismatch("evolve_driven: state and Hamiltonian do not match");
  }
  EvolutionResult res;
  const int steps = int(std::llround((t1 - t0) / dt));
  const int d = state.dim();
  res.M_accum = Mat::Identity(d, d);
  res.times.push_back(t0);
  res.states.push_back(state);
  res.group_residuals.push_back(0.0);

  Mat J = state.J();
  Vec z = state.z;
  const KahlerTriple std_t = standard_structures(state.stats(), state.n_modes());
  for (int k = 0; k < steps; ++k) {
    const double tm = t0 + (k + 0.5) * dt;
    const QuadraticHamiltonian Hm = Hd.at(tm);
    const Mat F = matrix_exp(Mat(Hm.K * dt));
    const Mat Finv = F.inverse();
    J = F * J * Finv;
    Vec znew = F * z;
    if (state.stats() == Statistics::Boson && Hm.f.cwiseAbs().maxCoeff() > 0.0) {
      znew += dt * F * matrix_expm1_over(Mat(Hm.K * dt)) * (std_t.Omega * Hm.f);
    }
    z = znew;
    res.M_accum = F * res.M_accum;
    res.times.push_back(t0 + (k + 1) * dt);
    res.states.push_back(make_state_unchecked(state.stats(), J, z));
    res.group_residuals.push_back(group_residual(res.M_accum, state.stats()));
  }
  return res;
}

PureGaussianState instantaneous_vacuum(const DrivenHamiltonian& Hd, double t) {
  return ground_state(Hd.at(t));
}

namespace {

using Jet = std::vector<Mat>;  // Jet[p] = (1/p!) d^p/dt^p at the base point

Jet jet_mul(const Jet& A, const Jet& B, int order) {
  const int d = int(A[0].rows());
  Jet C(size_t(order) + 1, Mat::Zero(d, d));
  for (int p = 0; p <= order; ++p) {
    for (int q = 0; q <= p; ++q) C[size_t(p)] += A[size_t(q)] * B[size_t(p - q)];
  }
  return C;
}

Jet jet_neg_square(const Jet& K, int order) {
  Jet X = jet_mul(K, K, order);
  for (auto& x : X) x = -x;
  return X;
}

// Fornberg finite-difference weights for derivative `m` at x0 = 0 on grid xs.
std::vector<double> fd_weights(const std::vector<double>& xs, int m) {
  const int n = int(xs.size());
  std::vector<std::vector<std::vector<double>>> c(
      size_t(n), std::vector<std::vector<double>>(size_t(n), std::vector<double>(size_t(m) + 1, 0.0)));
  c[0][0][0] = 1.0;
  double c1 = 1.0;
  for (int i = 1; i < n; ++i) {
    double c2 = 1.0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[size_t(i)] - xs[size_t(j)];
      c2 *= c3;
      for (int k = 0; k <= std::min(i, m); ++k) {
        c[size_t(i)][size_t(j)][size_t(k)] =
            (xs[size_t(i)] * c[size_t(i - 1)][size_t(j)][size_t(k)] -
             (k > 0 ? k * c[size_t(i - 1)][size_t(j)][size_t(k - 1)] : 0.0)) /
            c3;
      }
    }
    for (int k = 0; k <= std::min(i, m); ++k) {
      c[size_t(i)][size_t(i)][size_t(k)] =
          c1 / c2 *
          ((k > 0 ? k * c[size_t(i - 1)][size_t(i - 1)][size_t(k - 1)] : 0.0) -
           xs[size_t(i - 1)] * c[size_t(i - 1)][size_t(i - 1)][size_t(k)]);
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) w[size_t(j)] = c[size_t(n - 1)][size_t(j)][size_t(m)];
  return w;
}

struct KEig {
  CMat W, Winv;
  CVec d;       // eigenvalues +- i eps
  CVec jhat;    // +-i per eigenvector (J0 eigenvalue)
};

KEig decompose_generator(const Mat& K0, const char* what) {
  Eigen::ComplexEigenSolver<CMat> es(K0.cast<cplx>(), true);
  if (es.info() != Eigen::Success) throw IllConditioned("generator eigensolve failed");
  KEig e;
  e.W = es.eigenvectors();
  e.d = es.eigenvalues();
  e.Winv = e.W.inverse();
  const double emax = e.d.cwiseAbs().maxCoeff();
  const double scale = std::max(emax, max_abs(K0));
  e.jhat.resize(e.d.size());
  for (long i = 0; i < e.d.size(); ++i) {
    if (std::abs(e.d(i).real()) > 1e-8 * scale) {
      throw UnstableHamiltonian(std::string(what) + ": generator spectrum not imaginary");
    }
    if (std::abs(e.d(i)) < 1e-8 * scale) {
      throw DegenerateSpectrum(std::string(what) + ": near-zero mode frequency");
    }
    e.jhat(i) = cplx(0, e.d(i).imag() > 0 ? 1.0 : -1.0);
  }
  return e;
}

// sqrt jet of X with S0 S_p + S_p S0 = X_p - sum_{q=1..p-1} S_q S_{p-q},
// solved in the eigenbasis of K0 (which diagonalizes S0 = |K0|).
Jet jet_sqrt(const Jet& X, const KEig& e, int order) {
  const int d = int(X[0].rows());
  Jet S(size_t(order) + 1, Mat::Zero(d, d));
  CVec eps(e.d.size());
  for (long i = 0; i < e.d.size(); ++i) eps(i) = std::abs(e.d(i).imag());
  S[0] = (e.W * eps.asDiagonal() * e.Winv).real();
  for (int p = 1; p <= order; ++p) {
    Mat R = X[size_t(p)];
    for (int q = 1; q < p; ++q) R -= S[size_t(q)] * S[size_t(p - q)];
    CMat Rt = e.Winv * R.cast<cplx>() * e.W;
    CMat St(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        St(i, j) = Rt(i, j) / (eps(i) + eps(j));
      }
    }
    S[size_t(p)] = (e.W * St * e.Winv).real();
  }
  return S;
}

Jet jet_inverse(const Jet& S, int order) {
  const int d = int(S[0].rows());
  Jet Y(size_t(order) + 1, Mat::Zero(d, d));
  Y[0] = S[0].inverse();
  for (int p = 1; p <= order; ++p) {
    Mat acc = Mat::Zero(d, d);
    for (int q = 1; q <= p; ++q) acc += S[size_t(q)] * Y[size_t(p - q)];
    Y[size_t(p)] = -Y[0] * acc;
  }
  return Y;
}

}  // namespace

AdiabaticVacuum adiabatic_vacuum(const DrivenHamiltonian& Hd, double t, int order) {
  if (order < 0) throw ValidationError("adiabatic_vacuum: order must be >= 0");
  const bool analytic = Hd.analytic();
  if (!analytic && order > 4) {
    throw ValidationError("adiabatic_vacuum: finite-difference samplers support order <= 4");
  }
  const QuadraticHamiltonian H0 = Hd.at(t);
  require_stable(H0, "adiabatic_vacuum");
  const int d = H0.dim();
  const KahlerTriple std_t = standard_structures(H0.stats, H0.n_modes);
  const Mat metric_struct = H0.stats == Statistics::Boson ? std_t.Omega : std_t.G;

  // K jet to order `order`
  Jet K(size_t(order) + 1);
  K[0] = H0.K;
  if (order > 0) {
    if (analytic) {
      for (int p = 1; p <= order; ++p) {
        Mat hp = Hd.h_derivative(t, p);
        hp = H0.stats == Statistics::Boson ? Mat(0.5 * (hp + hp.transpose()))
                                           : Mat(0.5 * (hp - hp.transpose()));
        double fact = 1.0;
        for (int q = 2; q <= p; ++q) fact *= q;
        K[size_t(p)] = metric_struct * hp / fact;
      }
    } else {
      // 9-point central stencil, Fornberg weights per derivative order
      const double scale = std::max(1.0, max_abs(H0.K));
      const double step = 1e-2 / std::sqrt(scale);
      std::vector<double> xs;
      std::vector<Mat> samples;
      for (int j = -4; j <= 4; ++j) {
        xs.push_back(j * step);
        samples.push_back(Hd.at(t + j * step).K);
      }
      for (int p = 1; p <= order; ++p) {
        const std::vector<double> w = fd_weights(xs, p);
        Mat acc = Mat::Zero(d, d);
        for (size_t j = 0; j < xs.size(); ++j) acc += w[j] * samples[j];
        double fact = 1.0;
        for (int q = 2; q <= p; ++q) fact *= q;
        K[size_t(p)] = acc / fact;
      }
    }
  }

  const KEig eig = decompose_generator(K[0], "adiabatic_vacuum");

  // J0 jet = (sqrt(-K^2))^{-1} K
  const Jet X = jet_neg_square(K, order);
  const Jet S = jet_sqrt(X, eig, order);
  const Jet Sinv = jet_inverse(S, order);
  Jet A0 = jet_mul(Sinv, K, order);  // A0 = J^(0) jet

  std::vector<Jet> A(size_t(order) + 1);
  A[0] = A0;

  AdiabaticVacuum out;
  for (int n = 1; n <= order; ++n) {
    const int top = order - n;
    Jet An(size_t(top) + 1, Mat::Zero(d, d));
    for (int p = 0; p <= top; ++p) {
      // commutator RHS: (p+1) A_{n-1}[p+1] - sum_{q>=1} [K_q, A_n[p-q]]
      Mat R1 = double(p + 1) * A[size_t(n - 1)][size_t(p + 1)];
      for (int q = 1; q <= std::min(p, order); ++q) {
        R1 -= K[size_t(q)] * An[size_t(p - q)] - An[size_t(p - q)] * K[size_t(q)];
      }
      // anticommutator RHS: -(sum_k A_k A_{n-k})[p] - sum_{q>=1} {J0[q], A_n[p-q]}
      Mat R2 = Mat::Zero(d, d);
      for (int k = 1; k <= n - 1; ++k) {
        for (int q = 0; q <= p; ++q) {
          R2 -= A[size_t(k)][size_t(q)] * A[size_t(n - k)][size_t(p - q)];
        }
      }
      for (int q = 1; q <= p; ++q) {
        R2 -= A[0][size_t(q)] * An[size_t(p - q)] + An[size_t(p - q)] * A[0][size_t(q)];
      }
      const CMat R1t = eig.Winv * R1.cast<cplx>() * eig.W;
      const CMat R2t = eig.Winv * R2.cast<cplx>() * eig.W;
      CMat At(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          const cplx jsum = eig.jhat(i) + eig.jhat(j);
          if (std::abs(jsum) > 0.5) {
            At(i, j) = R2t(i, j) / jsum;  // J0-commuting block from the constraint
          } else {
            At(i, j) = R1t(i, j) / (eig.d(i) - eig.d(j));  // anticommuting block
          }
        }
      }
      An[size_t(p)] = (eig.W * At * eig.Winv).real();
    }
    A[size_t(n)] = An;

    // defining-equation residuals at the base point
    Mat comm = K[0] * An[0] - An[0] * K[0];
    out.commutator_residual.push_back(max_abs(Mat(comm - A[size_t(n - 1)][1])));
    Mat anti = A[0][0] * An[0] + An[0] * A[0][0];
    Mat rhs = Mat::Zero(d, d);
    for (int k = 1; k <= n - 1; ++k) rhs -= A[size_t(k)][0] * A[size_t(n - k)][0];
    out.anticommutator_residual.push_back(max_abs(Mat(anti - rhs)));
  }

  Mat Jm = A[0][0];
  for (int n = 1; n <= order; ++n) {
    out.A.push_back(A[size_t(n)][0]);
    Jm += A[size_t(n)][0];
  }
  out.jsq_residual = max_abs(Mat(Jm * Jm + Mat::Identity(d, d)));

  // z series (bosons): zeta_0 = -h^{-1} f, zeta_n = K^{-1} d/dt zeta_{n-1}
  Vec zm = Vec::Zero(d);
  if (H0.stats == Statistics::Boson && Hd.f) {
    Jet hj(size_t(order) + 1, Mat::Zero(d, d));
    std::vector<Vec> fj(size_t(order) + 1, Vec::Zero(d));
    hj[0] = H0.h;
    fj[0] = H0.f;
    for (int p = 1; p <= order; ++p) {
      double fact = 1.0;
      for (int q = 2; q <= p; ++q) fact *= q;
      if (analytic) {
        Mat hp = Hd.h_derivative(t, p);
        hj[size_t(p)] = 0.5 * (hp + hp.transpose()) / fact;
        fj[size_t(p)] = (Hd.f_derivative ? Hd.f_derivative(t, p) : Vec::Zero(d)) / fact;
      } else {
        const double step = 1e-2;
        std::vector<double> xs;
        std::vector<Mat> hs;
        std::vector<Vec> fs;
        for (int j = -4; j <= 4; ++j) {
          xs.push_back(j * step);
          const QuadraticHamiltonian Hj = Hd.at(t + j * step);
          hs.push_back(Hj.h);
          fs.push_back(Hj.f);
        }
        const std::vector<double> w = fd_weights(xs, p);
        Mat acc = Mat::Zero(d, d);
        Vec accf = Vec::Zero(d);
        for (size_t j = 0; j < xs.size(); ++j) {
          acc += w[j] * hs[j];
          accf += w[j] * fs[j];
        }
        hj[size_t(p)] = acc / fact;
        fj[size_t(p)] = accf / fact;
      }
    }
    const Jet hinv = jet_inverse(hj, order);
    // zeta_0 jet
    std::vector<Vec> zeta_prev(size_t(order) + 1, Vec::Zero(d));
    for (int p = 0; p <= order; ++p) {
      for (int q = 0; q <= p; ++q) zeta_prev[size_t(p)] -= hinv[size_t(q)] * fj[size_t(p - q)];
    }
    zm = zeta_prev[0];
    const Jet Kinv = jet_inverse(K, order);
    for (int n = 1; n <= order; ++n) {
      const int top = order - n;
      std::vector<Vec> zeta(size_t(top) + 1, Vec::Zero(d));
      for (int p = 0; p <= top; ++p) {
        for (int q = 0; q <= p; ++q) {
          zeta[size_t(p)] +=
              Kinv[size_t(q)] * (double(p - q + 1) * zeta_prev[size_t(p - q + 1)]);
        }
      }
      out.zeta.push_back(zeta[0]);
      zm += zeta[0];
      zeta_prev = zeta;
      zeta_prev.resize(size_t(top) + 1);
    }
  }

  out.state = make_state_unchecked(H0.stats, Jm, zm);
  return out;
}

double vacuum_subtraction(const PureGaussianState& state, const DrivenHamiltonian& Hd, double t,
                          int order) {
  const AdiabaticVacuum av = adiabatic_vacuum(Hd, t, order);
  const QuadraticHamiltonian Ht = Hd.at(t);
  require_match(state, Ht, "vacuum_subtraction");
  return -stats_sign(Ht.stats) * 0.25 * (Ht.K * (state.J() - av.state.J())).trace();
}

}  // namespace gaussk
