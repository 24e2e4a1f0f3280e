// Serial vs OpenMP convolution kernels, plus one full solver step on the
// 64x64 deblurring problem. Threads follow OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "minmaxkit/imaging.hpp"
#include "minmaxkit/kernels.hpp"
#include "minmaxkit/linops.hpp"
#include "minmaxkit/solvers.hpp"

using namespace minmax;

namespace {

using ConvFn = void (*)(const double*, std::size_t, std::size_t, const double*, std::size_t,
                        std::size_t, double*);

template <ConvFn F>
void BM_Convolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = Kernel2D::gaussian(static_cast<std::size_t>(state.range(1)), 1.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u;
  Vec img(n * n), out(n * n);
  for (auto& v : img) v = u(rng);
  for (auto _ : state) {
    F(img.data(), n, n, k.w.data(), k.rows, k.cols, out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

void BM_PdRgaStep(benchmark::State& state) {
  DeblurOptions opt;
  opt.n = static_cast<std::size_t>(state.range(0));
  const auto setup = make_deblur_setup(opt);
  const auto p = build_imaging_minmax(setup.problem);
  const auto cfg = StepSizeConfig::from_tau(1e-4, 1.0, p.constants);
  SolverState s{setup.observation.pixels, Vec(p.dim_y, 0.0), 0};
  for (auto _ : state) {
    s = pd_rga_step(p, s, cfg);
    benchmark::DoNotOptimize(s.x.data());
  }
}

}  // namespace

BENCHMARK(BM_Convolve<kernels::serial::convolve>)->Name("convolve/serial")->Args({64, 7})->Args({256, 7})->Args({512, 15});
BENCHMARK(BM_Convolve<kernels::parallel::convolve>)->Name("convolve/parallel")->Args({64, 7})->Args({256, 7})->Args({512, 15});
BENCHMARK(BM_Convolve<kernels::serial::correlate>)->Name("correlate/serial")->Args({256, 7});
BENCHMARK(BM_Convolve<kernels::parallel::correlate>)->Name("correlate/parallel")->Args({256, 7});
BENCHMARK(BM_PdRgaStep)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
