#include "ng/busemann.hpp"
#include "ng/domain.hpp"
#include "ng/finsler.hpp"
#include "ng/immersions.hpp"
#include "ng/pencils.hpp"

#include <benchmark/benchmark.h>

using namespace ng;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

Vec tau_delta(int n) {
  std::vector<int> all(n - 1);
  for (int i = 0; i < n - 1; ++i) all[i] = i;
  return normalized_coroot(RootSystem::sl(n), all);
}

void BM_BusemannBatch(benchmark::State& s) {
  const int n = 4;
  const Vec tau = tau_delta(n);
  std::vector<IdealPoint> a;
  std::vector<SymPoint> x;
  Rng rng(1);
  for (int i = 0; i < 4000; ++i) {
    a.push_back(make_ideal(random_flag(n, type_of_weights(tau), rng), tau));
    x.push_back(random_point(n, 1.0, rng));
  }
  const SymPoint o = SymPoint::origin(n);
  for (auto _ : s) benchmark::DoNotOptimize(busemann_batch(a, o, x, exec_of(s)));
}

void BM_BusemannSup(benchmark::State& s) {
  const FinslerContext ctx = make_finsler_context(RootSystem::sl(3), tau_delta(3));
  Rng rng(2);
  const SymPoint x = random_point(3, 1.0, rng), y = random_point(3, 1.0, rng);
  for (auto _ : s) benchmark::DoNotOptimize(busemann_sup(ctx, x, y, 5000, kDefaultSeed, exec_of(s)));
}

void BM_LimitCone(benchmark::State& s) {
  LimitConeOptions opt;
  opt.max_len = 6;
  opt.exec = exec_of(s);
  const auto gens = fuchsian_generators(2);
  for (auto _ : s) benchmark::DoNotOptimize(limit_cone_sample(irr_embedding(3), gens, tau_delta(3), opt));
}

void BM_DomainBatch(benchmark::State& s) {
  const EquivariantSurface u(irr_embedding(3));
  std::vector<IdealPoint> a;
  Rng rng(3);
  for (int i = 0; i < 200; ++i) a.push_back(make_ideal(random_flag(3, {1, 2}, rng), tau_delta(3)));
  for (auto _ : s) benchmark::DoNotOptimize(domain_membership_batch(a, u, SymPoint::origin(3), {}, exec_of(s)));
}

void BM_BaseFlags(benchmark::State& s) {
  const Pencil p = tangent_pencil(preset_pencil("P_irr"));
  BaseOptions opt;
  opt.exec = exec_of(s);
  for (auto _ : s) benchmark::DoNotOptimize(base_flags(p, tau_delta(3), opt));
}

}  // namespace

// Argument 0 runs the serial twin, 1 the OpenMP kernel.
BENCHMARK(BM_BusemannBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BusemannSup)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LimitCone)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DomainBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BaseFlags)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
