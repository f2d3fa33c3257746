#include <benchmark/benchmark.h>

#include "gaussk/entanglement.hpp"
#include "gaussk/random.hpp"

using namespace gaussk;

namespace {

PureGaussianState make_state(Statistics stats, int n) {
  Rng rng(42);
  return pure_state(stats, random_compatible_J(rng, stats, n, 0.8));
}

void BM_wick_sixpoint(benchmark::State& state) {
  const int n = int(state.range(0));
  const PureGaussianState s = make_state(Statistics::Fermion, n);
  const CMat C2 = s.two_point();
  std::vector<int> idx{0, 1, 2, 0, 1, 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(wick_npoint_c2(C2, idx, Statistics::Fermion));
  }
}
BENCHMARK(BM_wick_sixpoint)->Arg(4)->Arg(8);

void BM_cartan(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng rng(7);
  const KahlerTriple t = standard_structures(Statistics::Boson, n);
  const Mat M = random_group_element(rng, Statistics::Boson, n, 0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cartan_decompose(M, t.J, Statistics::Boson));
  }
}
BENCHMARK(BM_cartan)->Arg(2)->Arg(6)->Arg(12);

void BM_matrix_log(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng rng(11);
  const Mat M = random_group_element(rng, Statistics::Fermion, n, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(matrix_function(M, MatFun::Log));
  }
}
BENCHMARK(BM_matrix_log)->Arg(4)->Arg(16);

void BM_evolve_driven_step(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng rng(13);
  const Mat h0 = random_spd(rng, 2 * n, 0.5) + Mat::Identity(2 * n, 2 * n);
  DrivenHamiltonian Hd;
  Hd.stats = Statistics::Boson;
  Hd.n_modes = n;
  Hd.h = [h0](double t) { return Mat(h0 * (1.0 + 0.1 * t)); };
  const PureGaussianState s = instantaneous_vacuum(Hd, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_driven(s, Hd, 0.0, 0.1, 0.05));
  }
}
BENCHMARK(BM_evolve_driven_step)->Arg(2)->Arg(8);

void BM_entanglement_entropy(benchmark::State& state) {
  const int n = int(state.range(0));
  const PureGaussianState s = make_state(Statistics::Boson, n);
  std::vector<int> modes;
  for (int i = 0; i < n / 2; ++i) modes.push_back(i);
  const SubsystemSpec A = subsystem(modes);
  for (auto _ : state) {
    benchmark::DoNotOptimize(entanglement_entropy(s, A));
  }
}
BENCHMARK(BM_entanglement_entropy)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
