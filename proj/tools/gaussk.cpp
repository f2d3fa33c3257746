// gaussk: batch front door for Gaussian-state computations.
//
// JSON in, CSV/JSON out. Exit codes: 0 success, 1 I/O failure,
// 2 validation failure, 3 numeric-policy violation (including failed verify).

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "gaussk/entanglement.hpp"
#include "gaussk/io.hpp"
#include "gaussk/policy.hpp"
#include "gaussk/verify.hpp"

namespace {

using namespace gaussk;

struct TimeGrid {
  double t0 = 0.0, t1 = 0.0, dt = 0.0;
  bool single = true;
};

TimeGrid parse_time(const std::string& spec) {
  TimeGrid g;
  const size_t c1 = spec.find(':');
  if (c1 == std::string::npos) {
    g.t0 = g.t1 = std::stod(spec);
    return g;
  }
  const size_t c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos) throw ValidationError("--t expects t0:t1:dt or a single time");
  g.t0 = std::stod(spec.substr(0, c1));
  g.t1 = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
  g.dt = std::stod(spec.substr(c2 + 1));
  g.single = false;
  if (g.dt <= 0.0 || g.t1 < g.t0) throw ValidationError("--t grid must have dt > 0 and t1 >= t0");
  return g;
}

std::vector<int> parse_modes(const std::string& spec) {
  std::vector<int> modes;
  size_t pos = 0;
  while (pos < spec.size()) {
    size_t next = spec.find(',', pos);
    if (next == std::string::npos) next = spec.size();
    modes.push_back(std::stoi(spec.substr(pos, next - pos)));
    pos = next + 1;
  }
  return modes;
}

int exit_code_for(const Error& e) {
  const std::string& code = e.code();
  if (code == "IoError") return 1;
  if (code == "BranchViolation" || code == "IllConditioned" || code == "DegenerateKernel" ||
      code == "TruncationTooSmall" || code == "SpectrumOutOfRange" ||
      code == "SpectrumClassificationFailure" || code == "DegenerateSpectrum" ||
      code == "NoCartanDecomposition") {
    return 3;
  }
  return 2;
}

int cmd_check(const std::string& state_path, const std::string& triple_path) {
  bool ok = true;
  if (!triple_path.empty()) {
    const KahlerTriple t = read_triple(triple_path);
    const IdentityReport rep = validate_identities(t);
    for (const auto& [name, r] : rep.residuals) {
      std::printf("%-24s %.3e\n", name.c_str(), r);
    }
    std::printf("max residual            %.3e (tol %.1e)\n", rep.max_residual,
                policy().structure_tol);
    std::printf("compatible              %s\n", t.compatible ? "yes" : "no");
    ok = rep.pass(policy().structure_tol);
  } else {
    const StateVariant sv = read_state(state_path);
    if (std::holds_alternative<PureGaussianState>(sv)) {
      const auto& s = std::get<PureGaussianState>(sv);
      const IdentityReport rep = validate_identities(s.triple);
      for (const auto& [name, r] : rep.residuals) {
        std::printf("%-24s %.3e\n", name.c_str(), r);
      }
      std::printf("max residual            %.3e (tol %.1e)\n", rep.max_residual,
                  policy().structure_tol);
      ok = rep.pass(policy().structure_tol);
    } else {
      const auto& m = std::get<MixedGaussianState>(sv);
      std::printf("mixed %s state, N = %d\n", to_string(m.stats), m.n_modes);
      const auto lams = m.lambdas();
      for (size_t i = 0; i < lams.size(); ++i) {
        std::printf("lambda_%zu               %.12g\n", i, lams[i]);
      }
      if (m.q) {
        const auto [q2, c2] = q_from_mixed(m);
        const double resid = max_abs(Mat(q2 - *m.q));
        std::printf("q round-trip residual   %.3e (tol %.1e)\n", resid, 1e-8);
        ok = resid < 1e-8;
        (void)c2;
      }
    }
  }
  return ok ? 0 : 3;
}

int cmd_ground(const std::string& ham_path, const std::string& out_path) {
  const HamiltonianFile hf = read_hamiltonian(ham_path);
  const PureGaussianState gs = ground_state(hf.H);
  const double e0 = vacuum_energy(hf.H);
  std::printf("model      %s\n", hf.description.c_str());
  std::printf("stats      %s\n", to_string(hf.H.stats));
  std::printf("N          %d\n", hf.H.n_modes);
  std::printf("E0         %.17g\n", e0);
  if (!out_path.empty()) write_ground_state(out_path, gs, e0);
  return 0;
}

int cmd_evolve(const std::string& ham_path, const std::string& state_path,
               const std::string& t_spec, const std::string& A_spec,
               const std::string& out_path) {
  const HamiltonianFile hf = read_hamiltonian(ham_path);
  const TimeGrid grid = parse_time(t_spec);
  if (grid.single) throw ValidationError("evolve needs --t t0:t1:dt");
  PureGaussianState s0 = [&] {
    if (state_path.empty()) return ground_state(hf.driven.at(grid.t0));
    const StateVariant sv = read_state(state_path);
    if (!std::holds_alternative<PureGaussianState>(sv)) {
      throw ValidationError("evolve expects a pure input state");
    }
    return std::get<PureGaussianState>(sv);
  }();

  std::optional<SubsystemSpec> A;
  if (!A_spec.empty()) A = subsystem(parse_modes(A_spec));

  const EvolutionResult res = evolve_driven(s0, hf.driven, grid.t0, grid.t1, grid.dt);
  std::vector<std::string> cols{"t", "E"};
  if (A) {
    cols.push_back("S_A");
    cols.push_back("R2_A");
  }
  cols.push_back("complexity");
  CsvWriter csv(out_path.empty() ? "evolve.csv" : out_path, cols);
  for (size_t k = 0; k < res.states.size(); ++k) {
    const double t = res.times[k];
    const PureGaussianState& s = res.states[k];
    std::vector<double> row{t, energy(s, hf.driven.at(t))};
    if (A) {
      row.push_back(entanglement_entropy(s, *A));
      row.push_back(renyi2(s, *A));
    }
    row.push_back(circuit_complexity(s.J(), s0.J(), s.stats()));
    csv.row(row);
  }
  return 0;
}

int cmd_entropy(const std::string& state_path, const std::string& A_spec,
                const std::string& out_path) {
  const StateVariant sv = read_state(state_path);
  const SubsystemSpec A = subsystem(parse_modes(A_spec));
  double s_a = 0.0, r2 = 0.0;
  if (std::holds_alternative<PureGaussianState>(sv)) {
    const auto& s = std::get<PureGaussianState>(sv);
    s_a = entanglement_entropy(s, A);
    r2 = renyi2(s, A);
  } else {
    const auto& m = std::get<MixedGaussianState>(sv);
    const MixedGaussianState red = reduce(m, A);
    s_a = entropy_vn(red);
    r2 = m.stats == Statistics::Boson
             ? 0.5 * std::log(std::abs(red.J.determinant()))
             : -0.5 * std::log(
                   Mat(0.5 * (Mat::Identity(red.dim(), red.dim()) - red.J * red.J))
                       .determinant());
  }
  std::printf("S_A  %.17g\n", s_a);
  std::printf("R2_A %.17g\n", r2);
  if (!out_path.empty()) {
    CsvWriter csv(out_path, {"S_A", "R2_A"});
    csv.row({s_a, r2});
  }
  return 0;
}

int cmd_complexity(const std::string& state_path, const std::string& ref_path) {
  const StateVariant sv = read_state(state_path);
  const StateVariant rv = read_state(ref_path);
  if (!std::holds_alternative<PureGaussianState>(sv) ||
      !std::holds_alternative<PureGaussianState>(rv)) {
    throw ValidationError("complexity expects pure states");
  }
  const auto& s = std::get<PureGaussianState>(sv);
  const auto& r = std::get<PureGaussianState>(rv);
  std::printf("complexity %.17g\n", circuit_complexity(s.J(), r.J(), s.stats()));
  return 0;
}

int cmd_adiabatic(const std::string& ham_path, const std::string& t_spec, int order,
                  const std::string& state_path, const std::string& out_path) {
  const HamiltonianFile hf = read_hamiltonian(ham_path);
  const TimeGrid grid = parse_time(t_spec);
  const double t = grid.t0;
  const AdiabaticVacuum av = adiabatic_vacuum(hf.driven, t, order);
  std::printf("t            %.17g\n", t);
  std::printf("order        %d\n", order);
  std::printf("J^2 residual %.3e\n", av.jsq_residual);
  for (size_t n = 0; n < av.A.size(); ++n) {
    std::printf("order %zu residuals: commutator %.3e, anticommutator %.3e\n", n + 1,
                av.commutator_residual[n], av.anticommutator_residual[n]);
  }
  if (!state_path.empty()) {
    const StateVariant sv = read_state(state_path);
    if (!std::holds_alternative<PureGaussianState>(sv)) {
      throw ValidationError("adiabatic expects a pure --state");
    }
    const double dE =
        vacuum_subtraction(std::get<PureGaussianState>(sv), hf.driven, t, order);
    std::printf("deltaE       %.17g\n", dE);
  }
  if (!out_path.empty()) write_state(out_path, av.state);
  return 0;
}

int cmd_verify(int modes, int cutoff, uint64_t seed) {
  VerifyOptions opt;
  opt.max_modes = modes;
  opt.cutoff = cutoff;
  opt.seed = seed;
  const VerifyReport rep = run_verification(opt);
  std::fputs(rep.text().c_str(), stdout);
  return rep.passed ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian states from Kahler structures: check, evolve, analyze, verify"};
  app.require_subcommand(1);

  std::string policy_path;
  app.add_option("--policy", policy_path, "numeric policy JSON (overrides GAUSSK_NUM_POLICY)");

  std::string state_path, triple_path, ham_path, ref_path, out_path, t_spec, A_spec;
  int order = 0, modes = 4, cutoff = 0;
  uint64_t seed = 42;

  CLI::App* check = app.add_subcommand("check", "invariant residual report for a file");
  check->add_option("--state", state_path, "state JSON");
  check->add_option("--triple", triple_path, "Kahler triple JSON");

  CLI::App* ground = app.add_subcommand("ground", "ground state and vacuum energy");
  ground->add_option("--hamiltonian", ham_path, "Hamiltonian JSON")->required();
  ground->add_option("--out", out_path, "output JSON (J0, z0, E0)");

  CLI::App* evolve = app.add_subcommand("evolve", "evolve a state, write per-step CSV");
  evolve->add_option("--hamiltonian", ham_path, "Hamiltonian JSON")->required();
  evolve->add_option("--state", state_path, "initial pure state JSON (default: ground state)");
  evolve->add_option("--t", t_spec, "time grid t0:t1:dt")->required();
  evolve->add_option("--A", A_spec, "subsystem mode list, e.g. 0,1,4");
  evolve->add_option("--out", out_path, "output CSV path");

  CLI::App* entropy = app.add_subcommand("entropy", "subsystem entropies of a state");
  entropy->add_option("--state", state_path, "state JSON")->required();
  entropy->add_option("--A", A_spec, "subsystem mode list")->required();
  entropy->add_option("--out", out_path, "optional CSV output");

  CLI::App* complexity = app.add_subcommand("complexity", "circuit complexity between states");
  complexity->add_option("--state", state_path, "target state JSON")->required();
  complexity->add_option("--ref", ref_path, "reference state JSON")->required();

  CLI::App* adiabatic = app.add_subcommand("adiabatic", "adiabatic vacuum of order m");
  adiabatic->add_option("--hamiltonian", ham_path, "Hamiltonian JSON")->required();
  adiabatic->add_option("--t", t_spec, "evaluation time")->required();
  adiabatic->add_option("--order", order, "adiabatic order m")->required();
  adiabatic->add_option("--state", state_path, "state for the vacuum subtraction");
  adiabatic->add_option("--out", out_path, "output state JSON for J^(m)");

  CLI::App* verify = app.add_subcommand("verify", "run the oracle certification suite");
  verify->add_option("--modes", modes, "maximum oracle mode count");
  verify->add_option("--cutoff", cutoff, "bosonic Fock cutoff (0 = policy)");
  verify->add_option("--seed", seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!policy_path.empty()) gaussk::set_policy(gaussk::load_policy_file(policy_path));
    if (check->parsed()) {
      if (state_path.empty() == triple_path.empty()) {
        throw gaussk::ValidationError("check needs exactly one of --state / --triple");
      }
      return cmd_check(state_path, triple_path);
    }
    if (ground->parsed()) return cmd_ground(ham_path, out_path);
    if (evolve->parsed()) return cmd_evolve(ham_path, state_path, t_spec, A_spec, out_path);
    if (entropy->parsed()) return cmd_entropy(state_path, A_spec, out_path);
    if (complexity->parsed()) return cmd_complexity(state_path, ref_path);
    if (adiabatic->parsed()) {
      return cmd_adiabatic(ham_path, t_spec, order, state_path, out_path);
    }
    if (verify->parsed()) return cmd_verify(modes, cutoff, seed);
  } catch (const gaussk::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
