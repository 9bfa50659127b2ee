#include <benchmark/benchmark.h>

#include <vector>

#include "solvable_pg/kernels.hpp"
#include "solvable_pg/paramchain.hpp"

using namespace solvable_pg;

namespace {

const GamblerEnv kEnv{9, 3, 0.0, 9.0};

const GradientTable& table() {
  static const GradientTable t = tabulate_gradients(kEnv, PolicyFamily{}, GridSpec{});
  return t;
}

const Csr& theta_kernel() {
  static const Csr k = build_kernel(table(), KernelOptions{2e-4}).rows;
  return k;
}

const Csr& momentum_kernel() {
  static const Csr k = build_momentum_kernel(table(), VelocityGrid{}, MomentumOptions{}).rows;
  return k;
}

std::vector<double> uniform(int n) { return std::vector<double>(n, 1.0 / n); }

void push_parallel(benchmark::State& state, const Csr& p) {
  set_threads(static_cast<int>(state.range(0)));
  const Csr pt = p.transposed();
  auto in = uniform(p.rows), out = in;
  for (auto _ : state) {
    kernels::push_forward(pt, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(p.nnz()));
  set_threads(0);
}

void push_serial(benchmark::State& state, const Csr& p) {
  auto in = uniform(p.rows), out = in;
  for (auto _ : state) {
    kernels::push_forward_serial(p, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(p.nnz()));
}

void BM_PushForward(benchmark::State& s) { push_parallel(s, theta_kernel()); }
void BM_PushForwardSerial(benchmark::State& s) { push_serial(s, theta_kernel()); }
void BM_PushForwardMomentum(benchmark::State& s) { push_parallel(s, momentum_kernel()); }
void BM_PushForwardMomentumSerial(benchmark::State& s) { push_serial(s, momentum_kernel()); }

void BM_Multiply(benchmark::State& state) {
  set_threads(static_cast<int>(state.range(1)));
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n), b = Eigen::MatrixXd::Random(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::multiply(a, b).data());
  state.SetItemsProcessed(state.iterations() * 2L * n * n * n);
  set_threads(0);
}

void BM_MultiplySerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n), b = Eigen::MatrixXd::Random(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::multiply_serial(a, b).data());
  state.SetItemsProcessed(state.iterations() * 2L * n * n * n);
}

void BM_TabulateGradients(benchmark::State& state) {
  set_threads(static_cast<int>(state.range(0)));
  GridSpec grid;
  grid.bins = 256;
  for (auto _ : state) benchmark::DoNotOptimize(tabulate_gradients(kEnv, PolicyFamily{}, grid).samples.data());
  set_threads(0);
}

}  // namespace

BENCHMARK(BM_PushForward)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();
BENCHMARK(BM_PushForwardSerial);
BENCHMARK(BM_PushForwardMomentum)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();
BENCHMARK(BM_PushForwardMomentumSerial);
BENCHMARK(BM_Multiply)->Args({256, 1})->Args({256, 4})->Args({512, 1})->Args({512, 4})->UseRealTime();
BENCHMARK(BM_MultiplySerial)->Arg(256)->Arg(512);
BENCHMARK(BM_TabulateGradients)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
