#include "gaussk/fock.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include "gaussk/dynamics.hpp"
#include "gaussk/policy.hpp"
#include "gaussk/states.hpp"

namespace gaussk {

namespace {

SpCMat sp_identity(long n) {
  SpCMat I(n, n);
  I.setIdentity();
  return I;
}

SpCMat kron(const SpCMat& A, const SpCMat& B) {
  SpCMat C(A.rows() * B.rows(), A.cols() * B.cols());
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(size_t(A.nonZeros()) * size_t(B.nonZeros()));
  for (int ka = 0; ka < A.outerSize(); ++ka) {
    for (SpCMat::InnerIterator ia(A, ka); ia; ++ia) {
      for (int kb = 0; kb < B.outerSize(); ++kb) {
        for (SpCMat::InnerIterator ib(B, kb); ib; ++ib) {
          trips.emplace_back(ia.row() * B.rows() + ib.row(), ia.col() * B.cols() + ib.col(),
                             ia.value() * ib.value());
        }
      }
    }
  }
  C.setFromTriplets(trips.begin(), trips.end());
  return C;
}

void check_budget(Statistics stats, int n_modes, long dim) {
  const double dense_mb = double(dim) * double(dim) * 16.0 / (1024.0 * 1024.0);
  if (dense_mb * 4.0 > policy().memory_budget_mb) {
    throw BudgetExceeded("fock_build: dense Hilbert-space matrices exceed the memory budget");
  }
  if (stats == Statistics::Fermion && n_modes > 12) {
    throw BudgetExceeded("fock_build: fermionic mode count capped at 12");
  }
}

}  // namespace

FockRep fock_build(Statistics stats, int n_modes, int cutoff) {
  if (n_modes < 1) throw DimensionMismatch("fock_build: n_modes must be >= 1");
  FockRep rep;
  rep.stats = stats;
  rep.n_modes = n_modes;

  if (stats == Statistics::Boson) {
    if (cutoff <= 0) cutoff = policy().boson_cutoff;
    if (cutoff < 2) throw ValidationError("fock_build: bosonic cutoff must be >= 2");
    rep.cutoff = cutoff;
    rep.dim = 1;
    for (int i = 0; i < n_modes; ++i) {
      rep.dim *= cutoff;
      if (rep.dim > (1L << 40)) throw BudgetExceeded("fock_build: bosonic dimension overflow");
    }
    check_budget(stats, n_modes, rep.dim);

    SpCMat a(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) a.insert(n - 1, n) = std::sqrt(double(n));
    a.makeCompressed();
    const SpCMat ad = SpCMat(a.adjoint());
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<SpCMat> q_ops, p_ops;
    for (int m = 0; m < n_modes; ++m) {
      SpCMat q = sp_identity(1), p = sp_identity(1);
      for (int k = 0; k < n_modes; ++k) {
        const SpCMat local_q = (k == m) ? SpCMat(s * (a + ad)) : sp_identity(cutoff);
        const SpCMat local_p = (k == m) ? SpCMat(cplx(0, -s) * (a - ad)) : sp_identity(cutoff);
        q = kron(q, local_q);
        p = kron(p, local_p);
      }
      q_ops.push_back(q);
      p_ops.push_back(p);
    }
    for (auto& q : q_ops) rep.xi.push_back(std::move(q));
    for (auto& p : p_ops) rep.xi.push_back(std::move(p));
  } else {
    rep.cutoff = 2;
    rep.dim = 1L << n_modes;
    check_budget(stats, n_modes, rep.dim);

    SpCMat sm(2, 2), Z(2, 2);
    sm.insert(0, 1) = 1.0;  // annihilator |1> -> |0>
    Z.insert(0, 0) = 1.0;
    Z.insert(1, 1) = -1.0;
    sm.makeCompressed();
    Z.makeCompressed();

    std::vector<SpCMat> q_ops, p_ops;
    const double s = 1.0 / std::sqrt(2.0);
    for (int m = 0; m < n_modes; ++m) {
      SpCMat am = sp_identity(1);
      for (int k = 0; k < n_modes; ++k) {
        SpCMat local = (k < m) ? Z : (k == m ? sm : sp_identity(2));
        am = kron(am, local);
      }
      const SpCMat adm = SpCMat(am.adjoint());
      q_ops.push_back(SpCMat(s * (am + adm)));
      p_ops.push_back(SpCMat(cplx(0, -s) * (am - adm)));
    }
    for (auto& q : q_ops) rep.xi.push_back(std::move(q));
    for (auto& p : p_ops) rep.xi.push_back(std::move(p));
  }
  return rep;
}

std::vector<int> fock_occupations(const FockRep& rep, long index) {
  std::vector<int> occ(size_t(rep.n_modes));
  const int base = rep.stats == Statistics::Boson ? rep.cutoff : 2;
  for (int m = rep.n_modes - 1; m >= 0; --m) {
    occ[size_t(m)] = int(index % base);
    index /= base;
  }
  return occ;
}

CMat dense(const SpCMat& m) { return CMat(m); }

CVec fock_state_vector(const FockRep& rep, const PureGaussianState& state) {
  if (state.stats() != rep.stats || state.n_modes() != rep.n_modes) {
    throw DimensionMismatch("fock_state_vector: state does not match the representation");
  }
  const int d = state.dim();
  const long N = rep.dim;
  // annihilator rows (1 + iJ)(xi - z)/2 as sparse operators
  const CMat Jc = state.J().cast<cplx>();
  std::vector<SpCMat> ann;
  ann.reserve(size_t(d));
  for (int row = 0; row < d; ++row) {
    SpCMat op(N, N);
    cplx shift(0, 0);
    for (int b = 0; b < d; ++b) {
      const cplx coeff = 0.5 * ((row == b ? 1.0 : 0.0) + cplx(0, 1) * Jc(row, b));
      if (std::abs(coeff) == 0.0) continue;
      op += coeff * rep.op(b);
      shift += coeff * state.z(b);
    }
    if (std::abs(shift) > 0.0) {
      SpCMat I(N, N);
      I.setIdentity();
      op -= shift * I;
    }
    op.makeCompressed();
    ann.push_back(std::move(op));
  }
  std::vector<SpCMat> annH;
  annH.reserve(ann.size());
  for (const SpCMat& a : ann) annH.push_back(SpCMat(a.adjoint()));
  auto applyH = [&](const CVec& x) {  // H = sum_r A_r^dag A_r
    CVec out = CVec::Zero(N);
    for (size_t r = 0; r < ann.size(); ++r) out += annH[r] * (ann[r] * x);
    return out;
  };
  // largest eigenvalue of H by power iteration
  CVec v = CVec::Constant(N, cplx(1.0, 0.0)).normalized();
  double lmax = 1.0;
  for (int it = 0; it < 60; ++it) {
    CVec w = applyH(v);
    lmax = w.norm();
    if (lmax == 0.0) break;
    v = w / lmax;
  }
  // kernel vector by shifted power iteration on c - H; deterministic seed
  // with generic overlap in both parity sectors
  const double c = 1.05 * lmax;
  CVec psi(N);
  uint64_t s = 0x9e3779b97f4a7c15ULL;
  for (long i = 0; i < N; ++i) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    psi(i) = cplx(double((s >> 16) % 1000) / 1000.0 - 0.5,
                  double((s >> 40) % 1000) / 1000.0 - 0.5);
  }
  psi.normalize();
  double lam = std::numeric_limits<double>::max();
  for (int it = 0; it < 12000; ++it) {
    CVec w = c * psi - applyH(psi);
    w.normalize();
    const double change = (w - psi).norm();
    psi = w;
    if (it > 200 && change < 1e-13) break;
  }
  lam = psi.dot(applyH(psi)).real();
  const double rel_resid = std::sqrt(std::max(lam, 0.0) / std::max(lmax, 1e-300));
  if (rel_resid > 1e-2) {
    throw DegenerateKernel("fock_state_vector: no numerical kernel (truncation too hard?)");
  }
  // uniqueness probe: a deflated iterate must stay well away from the kernel
  {
    CVec u = CVec::Zero(N);
    u(std::min<long>(1, N - 1)) = 1.0;
    u -= psi.dot(u) * psi;
    if (u.norm() > 1e-8) {
      u.normalize();
      for (int it = 0; it < 200; ++it) {
        CVec w = c * u - applyH(u);
        w -= psi.dot(w) * psi;
        w.normalize();
        u = w;
      }
      const double lam2 = u.dot(applyH(u)).real();
      if (lam2 < 1e-8 * std::max(lmax, 1.0)) {
        throw DegenerateKernel("fock_state_vector: kernel dimension exceeds one");
      }
    }
  }
  // fix the global phase: first sizable amplitude real positive
  for (long i = 0; i < psi.size(); ++i) {
    if (std::abs(psi(i)) > 1e-8) {
      psi *= std::conj(psi(i)) / std::abs(psi(i));
      break;
    }
  }
  if (rep.stats == Statistics::Boson) {
    const double tail = fock_tail_mass(rep, psi);
    if (tail > 1e-6) {
      throw TruncationTooSmall("fock_state_vector: boundary occupation mass " +
                               std::to_string(tail));
    }
  }
  return psi;
}

double fock_tail_mass(const FockRep& rep, const CVec& psi) {
  double mass = 0.0;
  for (long i = 0; i < psi.size(); ++i) {
    const std::vector<int> occ = fock_occupations(rep, i);
    bool boundary = false;
    for (int o : occ) {
      if (o >= rep.cutoff - 1) boundary = true;
    }
    if (boundary) mass += std::norm(psi(i));
  }
  return mass;
}

CMat fock_density_matrix(const FockRep& rep, const MixedGaussianState& state) {
  if (state.stats != rep.stats || state.n_modes != rep.n_modes) {
    throw DimensionMismatch("fock_density_matrix: state does not match the representation");
  }
  Mat q;
  double c;
  if (state.q && state.c) {
    q = *state.q;
    c = *state.c;
  } else {
    auto qc = q_from_mixed(state);
    q = qc.first;
    c = qc.second;
  }
  const int d = state.dim();
  const long N = rep.dim;
  CMat Q = CMat::Zero(N, N);
  std::vector<CMat> ops;
  ops.reserve(size_t(d));
  for (int a = 0; a < d; ++a) {
    CMat x = dense(rep.op(a));
    if (state.z.size() && state.z(a) != 0.0) x -= state.z(a) * CMat::Identity(N, N);
    ops.push_back(std::move(x));
  }
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if (q(a, b) == 0.0) continue;
      Q += q(a, b) * ops[size_t(a)] * ops[size_t(b)];
    }
  }
  if (rep.stats == Statistics::Fermion) Q *= cplx(0, 1);
  Q += c * CMat::Identity(N, N);
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (Q + Q.adjoint()));
  CVec w = es.eigenvalues().cast<cplx>();
  for (long i = 0; i < w.size(); ++i) w(i) = std::exp(-w(i).real());
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

CMat fock_hamiltonian(const FockRep& rep, const QuadraticHamiltonian& H) {
  if (H.stats != rep.stats || H.n_modes != rep.n_modes) {
    throw DimensionMismatch("fock_hamiltonian: Hamiltonian does not match the representation");
  }
  const int d = H.dim();
  const long N = rep.dim;
  CMat out = CMat::Zero(N, N);
  for (int a = 0; a < d; ++a) {
    if (H.h.row(a).cwiseAbs().sum() == 0.0) continue;
    const CMat xa = dense(rep.op(a));
    for (int b = 0; b < d; ++b) {
      if (H.h(a, b) == 0.0) continue;
      out += 0.5 * H.h(a, b) * xa * dense(rep.op(b));
    }
  }
  if (rep.stats == Statistics::Fermion) out *= cplx(0, 1);
  if (H.f.size()) {
    for (int a = 0; a < d; ++a) {
      if (H.f(a) != 0.0) out += H.f(a) * dense(rep.op(a));
    }
  }
  out += H.c0 * CMat::Identity(N, N);
  return out;
}

namespace {

CVec apply_centered(const FockRep& rep, int a, const Vec& z, const CVec& v) {
  CVec out = rep.op(a) * v;
  if (z.size() && z(a) != 0.0) out -= z(a) * v;
  return out;
}

}  // namespace

cplx fock_npoint(const FockRep& rep, const CVec& psi, const std::vector<int>& idx, const Vec& z) {
  CVec v = psi;
  for (auto it = idx.rbegin(); it != idx.rend(); ++it) v = apply_centered(rep, *it, z, v);
  return psi.dot(v);  // Eigen dot conjugates the left argument
}

cplx fock_npoint(const FockRep& rep, const CMat& rho, const std::vector<int>& idx, const Vec& z) {
  CMat term = rho;
  for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
    CMat x = dense(rep.op(*it));
    if (z.size() && z(*it) != 0.0) x -= z(*it) * CMat::Identity(rho.rows(), rho.cols());
    term = x * term;
  }
  return term.trace();
}

double fock_npoint_scan(const FockRep& rep, const CVec& psi, const Vec& z, int max_order,
                        const std::function<cplx(const std::vector<int>&)>& reference) {
  const int d = 2 * rep.n_modes;
  double worst = 0.0;
  std::vector<int> idx;
  std::function<void(const CVec&, int)> dfs = [&](const CVec& v, int depth) {
    if (depth > 0) {
      const cplx value = psi.dot(v);
      worst = std::max(worst, std::abs(value - reference(idx)));
    }
    if (depth == max_order) return;
    for (int a = 0; a < d; ++a) {
      idx.insert(idx.begin(), a);  // extend on the left; v carries the suffix product
      dfs(apply_centered(rep, a, z, v), depth + 1);
      idx.erase(idx.begin());
    }
  };
  dfs(psi, 0);
  return worst;
}

double fock_npoint_scan(const FockRep& rep, const CMat& rho, const Vec& z, int max_order,
                        const std::function<cplx(const std::vector<int>&)>& reference) {
  const int d = 2 * rep.n_modes;
  std::vector<CMat> ops;
  ops.reserve(size_t(d));
  for (int a = 0; a < d; ++a) {
    CMat x = dense(rep.op(a));
    if (z.size() && z(a) != 0.0) x -= z(a) * CMat::Identity(rho.rows(), rho.cols());
    ops.push_back(std::move(x));
  }
  double worst = 0.0;
  std::vector<int> idx;
  std::function<void(const CMat&, int)> dfs = [&](const CMat& suffix, int depth) {
    if (depth > 0) worst = std::max(worst, std::abs(suffix.trace() - reference(idx)));
    if (depth == max_order) return;
    for (int a = 0; a < d; ++a) {
      idx.insert(idx.begin(), a);
      dfs(ops[size_t(a)] * suffix, depth + 1);
      idx.erase(idx.begin());
    }
  };
  dfs(rho, 0);
  return worst;
}

double fock_overlap_abs2(const CVec& a, const CVec& b) { return std::norm(a.dot(b)); }

CVec fock_evolve(const FockRep& rep, const CMat& H, double t, const CVec& psi) {
  (void)rep;
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (H + H.adjoint()));
  CVec phases(es.eigenvalues().size());
  for (long i = 0; i < phases.size(); ++i) {
    phases(i) = std::exp(cplx(0, -es.eigenvalues()(i) * t));
  }
  return es.eigenvectors() * (phases.asDiagonal() * (es.eigenvectors().adjoint() * psi));
}

namespace {

struct TraceLayout {
  long dimA = 1, dimB = 1;
  std::vector<long> strideA;  // per global index precomputed below
};

// decompose global index into (kept, traced) sub-indices, mode-major
void split_index(const FockRep& rep, const std::vector<int>& keep, long index, long& iA,
                 long& iB) {
  const int base = rep.stats == Statistics::Boson ? rep.cutoff : 2;
  iA = 0;
  iB = 0;
  std::vector<int> occ = fock_occupations(rep, index);
  size_t k = 0;
  for (int m = 0; m < rep.n_modes; ++m) {
    const bool kept = k < keep.size() && keep[k] == m;
    if (kept) {
      iA = iA * base + occ[size_t(m)];
      ++k;
    } else {
      iB = iB * base + occ[size_t(m)];
    }
  }
}

void check_keep(const FockRep& rep, const std::vector<int>& keep) {
  if (keep.empty()) throw InvalidSubsystem("fock_partial_trace: empty subsystem");
  for (size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= rep.n_modes) {
      throw InvalidSubsystem("fock_partial_trace: mode index out of range");
    }
    if (i > 0 && keep[i] <= keep[i - 1]) {
      throw InvalidSubsystem("fock_partial_trace: modes must be strictly ascending");
    }
  }
  if (rep.stats == Statistics::Fermion) {
    // Jordan-Wigner strings cancel only for a prefix of the mode order.
    for (size_t i = 0; i < keep.size(); ++i) {
      if (keep[i] != int(i)) {
        throw InvalidSubsystem("fock_partial_trace: fermionic subsystem must be a JW prefix");
      }
    }
  }
}

}  // namespace

CMat fock_partial_trace(const FockRep& rep, const CVec& psi, const std::vector<int>& keep) {
  check_keep(rep, keep);
  const int base = rep.stats == Statistics::Boson ? rep.cutoff : 2;
  long dimA = 1;
  for (size_t i = 0; i < keep.size(); ++i) dimA *= base;
  const long dimB = rep.dim / dimA;
  CMat psi_mat = CMat::Zero(dimA, dimB);
  for (long i = 0; i < psi.size(); ++i) {
    long iA, iB;
    split_index(rep, keep, i, iA, iB);
    psi_mat(iA, iB) = psi(i);
  }
  return psi_mat * psi_mat.adjoint();
}

CMat fock_partial_trace(const FockRep& rep, const CMat& rho, const std::vector<int>& keep) {
  check_keep(rep, keep);
  const int base = rep.stats == Statistics::Boson ? rep.cutoff : 2;
  long dimA = 1;
  for (size_t i = 0; i < keep.size(); ++i) dimA *= base;
  CMat out = CMat::Zero(dimA, dimA);
  std::vector<long> iAs(size_t(rep.dim)), iBs(size_t(rep.dim));
  for (long i = 0; i < rep.dim; ++i) split_index(rep, keep, i, iAs[size_t(i)], iBs[size_t(i)]);
  for (long i = 0; i < rep.dim; ++i) {
    for (long j = 0; j < rep.dim; ++j) {
      if (iBs[size_t(i)] == iBs[size_t(j)]) out(iAs[size_t(i)], iAs[size_t(j)]) += rho(i, j);
    }
  }
  return out;
}

double fock_entropy(const CMat& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-14) s -= p * std::log(p);
  }
  return s;
}

}  // namespace gaussk
