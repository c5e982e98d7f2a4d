#include <vector>

#include <benchmark/benchmark.h>

#include "weakstrong/kernels.hpp"

using namespace weakstrong;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

const kernels::CatWignerTerms kTerms{0.4, 0.5, -0.3, 2.9};

template <auto Fn>
void BM_wigner(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto u = linspace(-8, 8, n);
  const auto v = linspace(-6, 6, n);
  Eigen::MatrixXd out(n, n);
  for (auto _ : state) {
    Fn(kTerms, u, v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

template <auto Fn>
void BM_row_trapezoid(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd m = Eigen::MatrixXd::Random(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(m, 0.05));
}

template <auto Fn>
void BM_design(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto k = linspace(0, 5, 82);
  std::vector<Basis> basis(82, Basis::sigma_z);
  for (int i = 41; i < 82; ++i) basis[i] = Basis::sigma_y;
  const auto z = linspace(-8, 8, n);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(k, basis, z, 16.0 / (n - 1)));
}

template <auto Fn>
void BM_fourier(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto k = linspace(0, 5, 41);
  std::vector<double> c(41, 0.3), s(41, -0.2);
  const auto z = linspace(-8, 8, n);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(k, c, s, z));
}

}  // namespace

BENCHMARK(BM_wigner<kernels::wigner_grid_serial>)->Name("wigner_grid/serial")->Arg(128)->Arg(512);
BENCHMARK(BM_wigner<kernels::wigner_grid_parallel>)->Name("wigner_grid/parallel")->Arg(128)->Arg(512);
BENCHMARK(BM_row_trapezoid<kernels::row_trapezoid_serial>)->Name("row_trapezoid/serial")->Arg(512);
BENCHMARK(BM_row_trapezoid<kernels::row_trapezoid_parallel>)->Name("row_trapezoid/parallel")->Arg(512);
BENCHMARK(BM_design<kernels::characteristic_design_serial>)->Name("characteristic_design/serial")->Arg(201)->Arg(2001);
BENCHMARK(BM_design<kernels::characteristic_design_parallel>)->Name("characteristic_design/parallel")->Arg(201)->Arg(2001);
BENCHMARK(BM_fourier<kernels::fourier_density_serial>)->Name("fourier_density/serial")->Arg(201)->Arg(2001);
BENCHMARK(BM_fourier<kernels::fourier_density_parallel>)->Name("fourier_density/parallel")->Arg(201)->Arg(2001);

BENCHMARK_MAIN();
