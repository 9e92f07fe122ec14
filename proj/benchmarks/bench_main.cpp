#include <benchmark/benchmark.h>

#include "theta/catalog.hpp"
#include "theta/cfrac.hpp"
#include "theta/identities.hpp"
#include "theta/params.hpp"
#include "theta/qseries.hpp"
#include "theta/radexpr.hpp"

using namespace theta;

static void BM_ThetaPhi(benchmark::State& state) {
  Precision p(static_cast<int>(state.range(0)));
  BigReal q(Rational(3, 5), p);
  for (auto _ : state) benchmark::DoNotOptimize(theta_phi(q));
}
BENCHMARK(BM_ThetaPhi)->Arg(50)->Arg(100)->Arg(200);

static void BM_EulerProduct(benchmark::State& state) {
  Precision p(static_cast<int>(state.range(0)));
  BigReal q(Rational(3, 5), p);
  for (auto _ : state) benchmark::DoNotOptimize(euler_product(q));
}
BENCHMARK(BM_EulerProduct)->Arg(50)->Arg(100);

static void BM_QuotientA(benchmark::State& state) {
  Precision p(50);
  BigReal q(Rational(1, 4), p);
  for (auto _ : state) benchmark::DoNotOptimize(eval_quotient(QuotientKind::A, 1, q));
}
BENCHMARK(BM_QuotientA);

static void BM_EllipticK(benchmark::State& state) {
  Precision p(static_cast<int>(state.range(0)));
  BigReal k = BigReal::from_string("0.9", p);
  for (auto _ : state) benchmark::DoNotOptimize(elliptic_K(k));
}
BENCHMARK(BM_EllipticK)->Arg(50)->Arg(200);

static void BM_VerifyIdentity(benchmark::State& state) {
  Catalog c = Catalog::builtin();
  Identity id = Identity::from_record(c.identities.front());
  Precision p(50);
  std::vector<ThetaPoint> grid = sample_grid();
  BigReal tol = default_tolerance(p);
  for (auto _ : state) benchmark::DoNotOptimize(verify(id, grid, tol, p));
}
BENCHMARK(BM_VerifyIdentity)->Unit(benchmark::kMillisecond);

static void BM_Param(benchmark::State& state) {
  Precision p(50);
  for (auto _ : state) benchmark::DoNotOptimize(eval_param({Family::L, Rational(5), Rational(4, 3)}, p));
}
BENCHMARK(BM_Param);

static void BM_HProduct(benchmark::State& state) {
  Precision p(50);
  BigReal q(Rational(1, 2), p);
  for (auto _ : state) benchmark::DoNotOptimize(H_product(q));
}
BENCHMARK(BM_HProduct);

static void BM_ParseCatalog(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Catalog::builtin());
}
BENCHMARK(BM_ParseCatalog)->Unit(benchmark::kMillisecond);

static void BM_ParsePrint(benchmark::State& state) {
  const std::string text =
      "3^(1/4)*(5^(1/2) - 2)^(1/4)*((5^(1/2) - 3^(1/2))/2)^(1/2)*(1 + 3^(1/2))^(1/2)";
  for (auto _ : state) benchmark::DoNotOptimize(print(parse(text)));
}
BENCHMARK(BM_ParsePrint);
BENCHMARK_MAIN();
