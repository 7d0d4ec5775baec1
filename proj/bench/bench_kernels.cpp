// OpenMP kernels against the serial reference implementations.
//
//   bench_kernels --benchmark_filter=Conjugate
//
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "reshqcnn/kernels.hpp"
#include "reshqcnn/netcore.hpp"
#include "reshqcnn/reference.hpp"

using namespace reshqcnn;

namespace {

ComplexMatrix random_state(int n, Rng& rng) {
  std::normal_distribution<double> g;
  const Eigen::Index d = Eigen::Index{1} << n;
  ComplexMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex{g(rng), g(rng)};
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

// A perceptron on the first n-2 qubits plus the last one, as in a layer
// with m_prev = n - 2.
std::vector<int> support(int n) {
  std::vector<int> q(n - 1);
  std::iota(q.begin(), q.end() - 1, 0);
  q.back() = n - 1;
  return q;
}

void BM_ConjugateKernel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const ComplexMatrix rho = random_state(n, rng);
  const auto q = support(n);
  const ComplexMatrix gate = haar_random_unitary(static_cast<int>(q.size()), rng).matrix();
  for (auto _ : state) {
    ComplexMatrix m = rho;
    kernels::conjugate(m, gate, q, n);
    benchmark::DoNotOptimize(m.data());
  }
}

void BM_ConjugateReference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const ComplexMatrix rho = random_state(n, rng);
  const auto q = support(n);
  const ComplexMatrix gate = haar_random_unitary(static_cast<int>(q.size()), rng).matrix();
  for (auto _ : state) {
    ComplexMatrix m = reference::conjugate(rho, gate, q, n);
    benchmark::DoNotOptimize(m.data());
  }
}

void BM_PartialTraceKernel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const ComplexMatrix rho = random_state(n, rng);
  std::vector<int> keep{n - 3, n - 2, n - 1};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::partial_trace(rho, n, keep).data());
}

void BM_PartialTraceReference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const ComplexMatrix rho = random_state(n, rng);
  std::vector<int> keep{n - 3, n - 2, n - 1};
  for (auto _ : state) benchmark::DoNotOptimize(reference::partial_trace(rho, n, keep).data());
}

// One [m, m+1] layer: the production path against the monolithic oracle.
void BM_LayerKernel(benchmark::State& state) {
  const int mp = static_cast<int>(state.range(0));
  const int ml = mp + 1;
  Rng rng(3);
  const OperatorState rho(random_state(mp, rng));
  std::vector<UnitaryMatrix> layer;
  for (int j = 0; j < ml; ++j) layer.push_back(haar_random_unitary(mp + 1, rng));
  for (auto _ : state) benchmark::DoNotOptimize(layer_forward(rho, layer, mp, ml).matrix().data());
}

void BM_LayerReference(benchmark::State& state) {
  const int mp = static_cast<int>(state.range(0));
  const int ml = mp + 1;
  Rng rng(3);
  const ComplexMatrix rho = random_state(mp, rng);
  std::vector<ComplexMatrix> layer;
  for (int j = 0; j < ml; ++j) layer.push_back(haar_random_unitary(mp + 1, rng).matrix());
  for (auto _ : state) benchmark::DoNotOptimize(reference::layer_forward(rho, layer, mp, ml).data());
}

}  // namespace

BENCHMARK(BM_ConjugateKernel)->DenseRange(5, 8);
BENCHMARK(BM_ConjugateReference)->DenseRange(5, 8);
BENCHMARK(BM_PartialTraceKernel)->DenseRange(5, 8);
BENCHMARK(BM_PartialTraceReference)->DenseRange(5, 8);
BENCHMARK(BM_LayerKernel)->DenseRange(2, 3);
BENCHMARK(BM_LayerReference)->DenseRange(2, 3);

BENCHMARK_MAIN();
