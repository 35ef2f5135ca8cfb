#include <benchmark/benchmark.h>

#include "knotband/diagram.hpp"
#include "knotband/invariants.hpp"
#include "knotband/knot_table.hpp"
#include "knotband/pipeline.hpp"

namespace {

using namespace knotband;

const KnotTable& table() {
  static const KnotTable t = KnotTable::load(KNOTBAND_DATA_DIR);
  return t;
}

LatticePolygon seed(const std::string& knot) {
  static const auto s = read_polygon_file(std::string(KNOTBAND_DATA_DIR) + "/seeds/seeds.txt");
  return seed_for(knot, s);
}

// A typical sampled 8_20 conformation (CMC defaults, first sample).
const LatticePolygon& sample_8_20() {
  static const LatticePolygon p = CompositeChain(seed("8_20"), ChainParams{}).next();
  return p;
}

void BM_BfacfMoves(benchmark::State& state) {
  BfacfChain chain(seed("8_20"), 0.2);
  Rng rng(1);
  for (auto _ : state) chain.run(rng, 10000);
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_BfacfMoves);

void BM_FindSites(benchmark::State& state) {
  const auto& p = sample_8_20();
  for (auto _ : state) benchmark::DoNotOptimize(find_sites(p, Alignment::Parallel));
  state.counters["length"] = p.length();
}
BENCHMARK(BM_FindSites);

void BM_ProjectSimplify(benchmark::State& state) {
  const auto& p = sample_8_20();
  for (auto _ : state) benchmark::DoNotOptimize(simplify(project(p, 1)));
}
BENCHMARK(BM_ProjectSimplify);

void BM_Identify(benchmark::State& state) {
  const auto& p = sample_8_20();
  for (auto _ : state) benchmark::DoNotOptimize(identify(p, table()));
}
BENCHMARK(BM_Identify);

void BM_HomflyReference(benchmark::State& state) {
  const auto& pd = table().at("8_20").pd;
  for (auto _ : state) benchmark::DoNotOptimize(homfly(pd));
}
BENCHMARK(BM_HomflyReference);

// One reconnection event at CMC defaults after burn-in: sampling, site choice, surgery, identification.
void BM_RecombineEvent(benchmark::State& state) {
  RecombineOptions opts;
  opts.events = 1;
  CompositeChain chain(seed("8_20"), opts.chain);
  chain.next();
  std::uint64_t step = 0;
  for (auto _ : state) {
    const auto conf = chain.next();
    const auto sites = find_sites(conf, Alignment::Parallel);
    if (const auto* s = choose_site(sites, 1, step++)) {
      benchmark::DoNotOptimize(identify(reconnect(conf, *s).products.front(), table()));
    }
  }
}
BENCHMARK(BM_RecombineEvent)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
