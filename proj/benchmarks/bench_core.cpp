#include <benchmark/benchmark.h>

#include <flexcross/angles.hpp>
#include <flexcross/embedding.hpp>
#include <flexcross/flatgeom.hpp>
#include <flexcross/measure.hpp>

using namespace flexcross;

namespace {

SimplestTypeData sample(Kind kind, int n) {
  Rng rng(split_seed(0xBE4C, to_string(kind) + std::to_string(n)));
  return flexcross::random_data(kind, n, rng);
}

Kind kind_arg(int64_t k) { return static_cast<Kind>(k); }

void BM_Build(benchmark::State& st) {
  const SimplestTypeData d = sample(kind_arg(st.range(0)), static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(build(d));
}
BENCHMARK(BM_Build)->ArgsProduct({{0, 1, 2}, {3, 5, 6}});

void BM_Configuration(benchmark::State& st) {
  FamilyPtr fam = build(sample(kind_arg(st.range(0)), static_cast<int>(st.range(1))));
  double u = 0.1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(configuration(fam, FlexParam::finite(u)));
    u += 1e-3;
  }
}
BENCHMARK(BM_Configuration)->ArgsProduct({{0, 1, 2}, {3, 5, 6}});

void BM_AllDihedralAngles(benchmark::State& st) {
  const int n = static_cast<int>(st.range(1));
  const Configuration c = configuration(build(sample(kind_arg(st.range(0)), n)), FlexParam::finite(0.7));
  const auto rs = ridges(n);
  for (auto _ : st)
    for (const FaceId& r : rs) benchmark::DoNotOptimize(measured_dihedral(c, r));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(rs.size()));
}
BENCHMARK(BM_AllDihedralAngles)->ArgsProduct({{0, 1, 2}, {3, 4, 5}});

void BM_CurvedTetrahedronVolume(benchmark::State& st) {
  const Space sp{kind_arg(st.range(0)), 3};
  const Configuration c = configuration(build(sample(sp.kind, 3)), FlexParam::finite(0.7));
  const std::vector<Vec> v{c.a[0], c.a[1], c.a[2], c.b[0]};
  for (auto _ : st) benchmark::DoNotOptimize(simplex_volume(sp, v));
}
BENCHMARK(BM_CurvedTetrahedronVolume)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_GeneralizedVolume(benchmark::State& st) {
  const Configuration c = configuration(build(sample(kind_arg(st.range(0)), 3)), FlexParam::finite(0.7));
  for (auto _ : st) benchmark::DoNotOptimize(generalized_volume(c));
}
BENCHMARK(BM_GeneralizedVolume)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_SchlafliVolume(benchmark::State& st) {
  FamilyPtr fam = build(sample(Kind::spherical, static_cast<int>(st.range(0))));
  FaceVolumeCache cache(fam);
  schlafli_volume(cache, FlexParam::finite(0));  // warm the face cache
  double u = 0.1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(schlafli_volume(cache, FlexParam::finite(u)));
    u += 1e-3;
  }
}
BENCHMARK(BM_SchlafliVolume)->Arg(3)->Arg(4);

void BM_IsEmbedded(benchmark::State& st) {
  const int n = static_cast<int>(st.range(1));
  const Configuration c = configuration(build(sample(kind_arg(st.range(0)), n)), FlexParam::finite(0.05));
  for (auto _ : st) benchmark::DoNotOptimize(is_embedded(c));
}
BENCHMARK(BM_IsEmbedded)->ArgsProduct({{0, 1, 2}, {3, 4}})->Unit(benchmark::kMillisecond);

void BM_ConcurrencyAndClassification(benchmark::State& st) {
  const int n = static_cast<int>(st.range(1));
  const Configuration c = configuration(build(sample(kind_arg(st.range(0)), n)), FlexParam::finite(0));
  for (auto _ : st) benchmark::DoNotOptimize(classify_flat(c, concurrency_point(c)));
}
BENCHMARK(BM_ConcurrencyAndClassification)->ArgsProduct({{0, 1, 2}, {3, 4, 5}})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
