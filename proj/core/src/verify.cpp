#include "gaussk/verify.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gaussk/entanglement.hpp"
#include "gaussk/fock.hpp"
#include "gaussk/policy.hpp"
#include "gaussk/random.hpp"

namespace gaussk {

namespace {

struct Collector {
  std::vector<std::string>* lines;
  bool* passed;

  void check(const std::string& name, double residual, double tol) {
    char buf[160];
    const bool ok = residual < tol;
    std::snprintf(buf, sizeof(buf), "[%s] %-46s residual %.3e (tol %.1e)",
                  ok ? "ok" : "FAIL", name.c_str(), residual, tol);
    lines->push_back(buf);
    if (!ok) *passed = false;
  }
};

PureGaussianState random_pure(Rng& rng, Statistics stats, int n, double squeeze,
                              double displacement = 0.0) {
  Vec z;
  if (stats == Statistics::Boson && displacement > 0.0) {
    z = Vec(2 * n);
    for (int i = 0; i < 2 * n; ++i) z(i) = rng.gauss(displacement);
  }
  return pure_state(stats, random_compatible_J(rng, stats, n, squeeze), z);
}

}  // namespace

std::string VerifyReport::text() const {
  std::ostringstream os;
  for (const auto& l : lines) os << l << "\n";
  os << (passed ? "verify: all checks passed" : "verify: FAILURES detected") << "\n";
  return os.str();
}

VerifyReport run_verification(const VerifyOptions& opt) {
  VerifyReport rep;
  Collector c{&rep.lines, &rep.passed};
  Rng rng(opt.seed);
  const int cutoff = opt.cutoff > 0 ? opt.cutoff : policy().boson_cutoff;
  const int nf = std::min(std::max(opt.max_modes, 2), 5);

  {
    char buf[120];
    std::snprintf(buf, sizeof(buf), "gaussk verify: seed=%llu modes<=%d cutoff=%d",
                  static_cast<unsigned long long>(opt.seed), opt.max_modes, cutoff);
    rep.lines.push_back(buf);
    rep.lines.push_back("policy: " + policy().describe());
  }

  // --- Kahler identities on random compatible triples
  for (Statistics stats : {Statistics::Boson, Statistics::Fermion}) {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 1 + rng.uniform_int(0, std::max(1, opt.max_modes - 1));
      worst = std::max(worst,
                       validate_identities(random_compatible_triple(rng, stats, n)).max_residual);
    }
    c.check(std::string("kahler identities (") + to_string(stats) + ")", worst, 1e-10);
  }

  // --- Cartan decomposition
  for (Statistics stats : {Statistics::Boson, Statistics::Fermion}) {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 1 + rng.uniform_int(0, std::max(1, opt.max_modes - 1));
      const KahlerTriple t = standard_structures(stats, n);
      const Mat M = random_group_element(rng, stats, n, 0.8);
      const CartanResult cr = cartan_decompose(M, t.J, stats);
      const Mat Delta = -(M * t.J * M.inverse()) * t.J;
      worst = std::max({worst, max_abs(Mat(cr.T * cr.T - Delta)),
                        max_abs(Mat(cr.T * t.J * cr.T - t.J)),
                        max_abs(Mat(cr.u * t.J - t.J * cr.u)), max_abs(Mat(cr.T * cr.u - M))});
    }
    c.check(std::string("cartan decomposition (") + to_string(stats) + ")", worst, 1e-9);
  }

  // --- Wick vs oracle, fermions (exact dimension)
  {
    FockRep rep_f = fock_build(Statistics::Fermion, nf);
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      PureGaussianState s = random_pure(rng, Statistics::Fermion, nf, 1.0);
      const CVec psi = fock_state_vector(rep_f, s);
      const CMat C2 = s.two_point();
      worst = std::max(worst, fock_npoint_scan(rep_f, psi, Vec::Zero(2 * nf), 4,
                                               [&](const std::vector<int>& idx) {
                                                 return wick_npoint_c2(C2, idx,
                                                                       Statistics::Fermion);
                                               }));
    }
    c.check("wick n-point vs oracle (fermion)", worst, 1e-10);
  }

  // --- Wick vs oracle, bosons (truncated; squeeze kept within the tail budget)
  {
    FockRep rep_b = fock_build(Statistics::Boson, 2, std::max(cutoff, 22));
    double worst = 0.0;
    for (int trial = 0; trial < 2; ++trial) {
      PureGaussianState s = random_pure(rng, Statistics::Boson, 2, 0.5, 0.15);
      const CVec psi = fock_state_vector(rep_b, s);
      const CMat C2 = s.two_point();
      worst = std::max(worst, fock_npoint_scan(rep_b, psi, s.z, 4,
                                               [&](const std::vector<int>& idx) {
                                                 return wick_npoint_c2(C2, idx,
                                                                       Statistics::Boson);
                                               }));
    }
    c.check("wick n-point vs oracle (boson)", worst, 1e-6);
  }

  // --- Overlaps vs oracle
  {
    double worst = 0.0;
    FockRep rep_f = fock_build(Statistics::Fermion, nf);
    for (int trial = 0; trial < 3; ++trial) {
      PureGaussianState a = random_pure(rng, Statistics::Fermion, nf, 1.0);
      PureGaussianState b = random_pure(rng, Statistics::Fermion, nf, 1.0);
      const double oracle =
          fock_overlap_abs2(fock_state_vector(rep_f, a), fock_state_vector(rep_f, b));
      worst = std::max(worst, std::abs(overlap_abs2(a, b).value - oracle));
    }
    c.check("overlap vs oracle (fermion)", worst, 1e-9);
    FockRep rep_b = fock_build(Statistics::Boson, 1, std::max(cutoff, 24));
    worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      PureGaussianState a = random_pure(rng, Statistics::Boson, 1, 0.6, 0.3);
      PureGaussianState b = random_pure(rng, Statistics::Boson, 1, 0.6, 0.3);
      const double oracle =
          fock_overlap_abs2(fock_state_vector(rep_b, a), fock_state_vector(rep_b, b));
      worst = std::max(worst, std::abs(overlap_abs2(a, b).value - oracle));
    }
    c.check("overlap vs oracle (boson)", worst, 1e-7);
  }

  // --- Entanglement entropies vs oracle partial trace
  {
    FockRep rep_f = fock_build(Statistics::Fermion, nf);
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      PureGaussianState s = random_pure(rng, Statistics::Fermion, nf, 1.2);
      const SubsystemSpec A = subsystem({0, 1});
      const CVec psi = fock_state_vector(rep_f, s);
      const double oracle = fock_entropy(fock_partial_trace(rep_f, psi, A.modes));
      worst = std::max(worst, std::abs(entanglement_entropy(s, A) - oracle));
      worst = std::max(worst, std::abs(renyi2(s, A) - renyi(s, A, 2.0)));
    }
    c.check("entanglement entropy vs oracle (fermion)", worst, 1e-9);
  }

  // --- Mixed-state round trip and spectrum normalization
  {
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const Mat qb = random_spd(rng, 4, 0.6);
      const MixedGaussianState mb = mixed_from_q(Statistics::Boson, qb);
      const auto [qb2, cb2] = q_from_mixed(mb);
      worst = std::max(worst, max_abs(Mat(qb2 - 0.5 * (qb + qb.transpose()))));
      const Mat qf = random_antisymmetric(rng, 4, 0.8);
      const MixedGaussianState mf = mixed_from_q(Statistics::Fermion, qf);
      const auto [qf2, cf2] = q_from_mixed(mf);
      worst = std::max(worst, max_abs(Mat(qf2 - qf)));
      (void)cb2;
      (void)cf2;
    }
    c.check("mixed-state q <-> J round trip", worst, 1e-8);

    double wsum = 0.0;
    const MixedGaussianState mb =
        mixed_from_q(Statistics::Boson, Mat(0.6 * Mat::Identity(4, 4)));
    const GaussianSpectrum gs = gaussian_spectrum(mb);
    for (int mode = 0; mode < 2; ++mode) {
      double sum = 0.0;
      for (int k = 0; k < 600; ++k) sum += gs.weight(mode, k);
      wsum = std::max(wsum, std::abs(sum - 1.0));
    }
    c.check("gaussian spectrum normalization", wsum, 1e-12);
  }

  // --- Dynamics: conservation, ground states, driven flow vs oracle
  {
    Mat h = random_spd(rng, 4, 0.5) + Mat::Identity(4, 4);
    Vec f(4);
    for (int i = 0; i < 4; ++i) f(i) = rng.gauss(0.3);
    const QuadraticHamiltonian H = quadratic_hamiltonian(Statistics::Boson, h, f);
    PureGaussianState s = random_pure(rng, Statistics::Boson, 2, 0.6, 0.4);
    const double e0 = energy(s, H);
    double drift = 0.0;
    for (double t : {2.5, 10.0}) {
      drift = std::max(drift, std::abs(energy(evolve_const(s, H, t), H) - e0) /
                                  (1.0 + std::abs(e0)));
    }
    c.check("constant-evolution energy conservation", drift, 1e-10);

    FockRep rep_f = fock_build(Statistics::Fermion, std::min(nf, 3));
    const int n3 = rep_f.n_modes;
    const QuadraticHamiltonian Hf =
        quadratic_hamiltonian(Statistics::Fermion, random_antisymmetric(rng, 2 * n3, 1.0));
    Eigen::SelfAdjointEigenSolver<CMat> es(fock_hamiltonian(rep_f, Hf));
    double worst = std::abs(vacuum_energy(Hf) - es.eigenvalues()(0));
    const PureGaussianState gs = ground_state(Hf);
    const CMat C2 = gs.two_point();
    const CVec psi0 = es.eigenvectors().col(0);
    for (int a = 0; a < 2 * n3; ++a) {
      for (int b = 0; b < 2 * n3; ++b) {
        const cplx oracle = psi0.dot(dense(rep_f.op(a)) * (dense(rep_f.op(b)) * psi0));
        worst = std::max(worst, std::abs(oracle - C2(a, b)));
      }
    }
    c.check("fermionic ground state vs oracle", worst, 1e-9);

    // driven two-point functions against the oracle step product
    Mat h0 = random_antisymmetric(rng, 2 * n3, 1.0);
    Mat h1 = random_antisymmetric(rng, 2 * n3, 0.5);
    DrivenHamiltonian Hd;
    Hd.stats = Statistics::Fermion;
    Hd.n_modes = n3;
    Hd.h = [h0, h1](double t) { return Mat(h0 + std::sin(t) * h1); };
    PureGaussianState sf = random_pure(rng, Statistics::Fermion, n3, 0.8);
    const double dt = 0.02, T = 1.0;
    EvolutionResult r = evolve_driven(sf, Hd, 0.0, T, dt);
    CVec psi = fock_state_vector(rep_f, sf);
    for (int k = 0; k < int(std::llround(T / dt)); ++k) {
      psi = fock_evolve(rep_f, fock_hamiltonian(rep_f, Hd.at((k + 0.5) * dt)), dt, psi);
    }
    const CMat C2T = r.states.back().two_point();
    worst = 0.0;
    for (int a = 0; a < 2 * n3; ++a) {
      for (int b = 0; b < 2 * n3; ++b) {
        const cplx oracle = psi.dot(dense(rep_f.op(a)) * (dense(rep_f.op(b)) * psi));
        worst = std::max(worst, std::abs(oracle - C2T(a, b)));
      }
    }
    c.check("driven fermionic flow vs oracle", worst, 1e-9);
  }

  // --- Adiabatic orders on an analytic ramp
  {
    DrivenHamiltonian Hd;
    Hd.stats = Statistics::Boson;
    Hd.n_modes = 1;
    Hd.h = [](double t) {
      Mat h = Mat::Zero(2, 2);
      h(0, 0) = 1.0 + 0.25 * t;
      h(1, 1) = 1.0;
      return h;
    };
    Hd.h_derivative = [](double, int k) {
      Mat h = Mat::Zero(2, 2);
      if (k == 1) h(0, 0) = 0.25;
      return h;
    };
    const AdiabaticVacuum av = adiabatic_vacuum(Hd, 0.7, 4);
    double worst = 0.0;
    for (double r : av.commutator_residual) worst = std::max(worst, r);
    for (double r : av.anticommutator_residual) worst = std::max(worst, r);
    c.check("adiabatic defining-equation residuals", worst, 1e-9);
  }

  return rep;
}

}  // namespace gaussk
