#include <benchmark/benchmark.h>

#include <random>

#include "kobball/distance_oracles.hpp"
#include "kobball/domain.hpp"
#include "kobball/harness.hpp"
#include "kobball/minimal_basis.hpp"

using namespace kobball;

namespace {

CVector point(std::initializer_list<Complex> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const Complex& x : xs) v[i++] = x;
  return v;
}

void BM_MinimalBasisBall(benchmark::State& state) {
  const DomainSpec d = DomainSpec::unit_ball(2);
  const CVector q = point({0.5, Complex(0.1, 0.2)});
  for (auto _ : state) benchmark::DoNotOptimize(compute_minimal_basis(d, q));
}
BENCHMARK(BM_MinimalBasisBall);

void BM_MinimalBasisEllipsoid(benchmark::State& state) {
  RVector m(3);
  m << 1.0, 2.0, 3.5;
  const DomainSpec d = DomainSpec::ellipsoid(m);
  const CVector q = point({0.2, Complex(0.1, -0.3), 0.1});
  for (auto _ : state) benchmark::DoNotOptimize(compute_minimal_basis(d, q));
}
BENCHMARK(BM_MinimalBasisEllipsoid);

void BM_MinimalBasisPolytope(benchmark::State& state) {
  std::vector<CVector> normals;
  std::vector<double> offsets;
  for (int k = 0; k < 16; ++k) {
    const double t = 2.0 * 3.141592653589793 * k / 16.0;
    normals.push_back(point({std::polar(1.0, t), std::polar(0.5, 3.0 * t)}));
    offsets.push_back(1.0);
  }
  const DomainSpec d = DomainSpec::polytope(normals, offsets);
  const CVector q = point({0.1, Complex(0.0, 0.1)});
  for (auto _ : state) benchmark::DoNotOptimize(compute_minimal_basis(d, q));
}
BENCHMARK(BM_MinimalBasisPolytope);

void BM_TriangularMapBall(benchmark::State& state) {
  const DomainSpec d = DomainSpec::unit_ball(2);
  const MinimalBasis mb = compute_minimal_basis(d, point({0.5, 0.0}));
  const StandardPosition sp = rotate_to_standard(mb, d);
  const auto samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(triangular_map(sp.domain, sp.basis, samples));
}
BENCHMARK(BM_TriangularMapBall)->Arg(1000)->Arg(10000);

void BM_BallDistance(benchmark::State& state) {
  const CVector c = CVector::Zero(2);
  const CVector z = point({0.3, Complex(0.1, 0.4)});
  const CVector w = point({Complex(-0.2, 0.5), 0.6});
  for (auto _ : state) benchmark::DoNotOptimize(ball_distance(c, 1.0, z, w));
}
BENCHMARK(BM_BallDistance);

void BM_ConvexBracketBall(benchmark::State& state) {
  const DomainSpec d = DomainSpec::unit_ball(2);
  const CVector z = point({0.3, Complex(0.1, 0.4)});
  const CVector w = point({Complex(-0.2, 0.5), 0.6});
  for (auto _ : state) benchmark::DoNotOptimize(convex_bracket(d, z, w));
}
BENCHMARK(BM_ConvexBracketBall);

void BM_ConvexBracketEllipsoid(benchmark::State& state) {
  RVector m(2);
  m << 1.0, 3.0;
  const DomainSpec d = DomainSpec::ellipsoid(m);
  const CVector z = point({0.3, Complex(0.1, 0.4)});
  const CVector w = point({Complex(-0.2, 0.5), 0.6});
  for (auto _ : state) benchmark::DoNotOptimize(convex_bracket(d, z, w));
}
BENCHMARK(BM_ConvexBracketEllipsoid);

void BM_SandwichBall(benchmark::State& state) {
  ExperimentConfig c = parse_config(R"({"domain": {"type": "unit_ball", "dimension": 2}, "points": [[0.5, 0]]})");
  c.samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_sandwich(c));
}
BENCHMARK(BM_SandwichBall)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_MetricTriples(benchmark::State& state) {
  ExperimentConfig c;
  c.metric.triples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_metric_properties(c));
}
BENCHMARK(BM_MetricTriples)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
