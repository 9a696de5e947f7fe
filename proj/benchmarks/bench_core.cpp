#include <benchmark/benchmark.h>

#include <curvjac/classify.hpp>
#include <curvjac/generate.hpp>

using namespace curvjac;

namespace {

Model random_model(int m) { return gen_random_acurv(InnerProduct(m, 0), 3, 17); }

void BM_JacobiContract(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Model model = random_model(m);
  const Matrix p = Matrix::Identity(m, m);
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_contract(model, p));
}
BENCHMARK(BM_JacobiContract)->DenseRange(4, 12, 4);

void BM_Pullback(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Model model = random_model(m);
  const SignedFrame f = sample_orthonormal_frame(model.metric(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(pullback(model.curvature(), f.vectors));
}
BENCHMARK(BM_Pullback)->DenseRange(4, 12, 4);

void BM_GrassmannSample(benchmark::State& state) {
  const InnerProduct g(3, 3);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_grassmannian(g, 1, 2, seed++));
}
BENCHMARK(BM_GrassmannSample);

void BM_Decompose(benchmark::State& state) {
  GeneratorSpec a;
  a.kind = GeneratorKind::Constant;
  a.p = 3;
  a.kappa = 1.0;
  GeneratorSpec b = a;
  b.p = 2;
  b.kappa = 2.5;
  GeneratorSpec c = a;
  c.p = 3;
  c.kappa = -0.5;
  const std::vector<GeneratorSpec> kids{a, b, c};
  const Model model = gen_direct_sum(kids, true, 4).model;
  for (auto _ : state) benchmark::DoNotOptimize(decompose(model));
}
BENCHMARK(BM_Decompose);

void BM_Sweep(benchmark::State& state) {
  const Model model = gen_random_acurv(InnerProduct(2, 2), 2, 5);
  SweepRequest req;
  req.mode = SweepMode::C2;
  req.samples = 256;
  req.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sweep_commutation(model, req));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->UseRealTime();

void BM_PuffiniVidev(benchmark::State& state) {
  const Model model = random_model(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(puffini_videv_check(model));
}
BENCHMARK(BM_PuffiniVidev)->DenseRange(4, 8, 2);

}  // namespace

BENCHMARK_MAIN();
