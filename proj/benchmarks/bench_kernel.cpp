#include <benchmark/benchmark.h>

#include <complex>

#include "hka/asymptotics.hpp"
#include "hka/gtf.hpp"
#include "hka/heatkernel.hpp"
#include "hka/specfun.hpp"

namespace hk = hka::heatkernel;
namespace as = hka::asymptotics;
namespace sf = hka::specfun;
using cplx = std::complex<double>;

static void BM_PDirect(benchmark::State& state) {
  const double v = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto p = hk::p_direct({1, 1, 1.0, v});
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_PDirect)->Arg(2)->Arg(5)->Arg(8);

static void BM_PContour(benchmark::State& state) {
  const double v = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto p = hk::p_contour(1, 1.0, cplx(v));
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_PContour)->Arg(10)->Arg(100)->Arg(1000);

static void BM_DeriveChain(benchmark::State& state) {
  for (auto _ : state) {
    auto p = hk::kernel_value(2, 3, 1.0, 100.0);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_DeriveChain);

static void BM_MuInverse(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto eps = sf::mu_inverse_offset(cplx(x));
    benchmark::DoNotOptimize(eps);
  }
}
BENCHMARK(BM_MuInverse)->Arg(1000)->Arg(1000000);

static void BM_QTheorem(benchmark::State& state) {
  for (auto _ : state) {
    auto q = as::q_closed_form(2, 3, 1.0, 200.0);
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_QTheorem);

static void BM_BesselIScaled(benchmark::State& state) {
  const double z = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto b = sf::bessel_i_scaled(1.0, cplx(z));
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(BM_BesselIScaled)->Arg(5)->Arg(25)->Arg(100);

static void BM_GtfRatio(benchmark::State& state) {
  auto g = hka::gtf::FunctionSpec::power_log(1.0, 2.0);
  for (auto _ : state) {
    double c = hka::gtf::gtf_ratio(g, cplx(1e4), 2.5e3);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_GtfRatio);

BENCHMARK_MAIN();
