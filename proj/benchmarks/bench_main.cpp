#include <benchmark/benchmark.h>

#include <sstream>

#include "pondguard/dsl/decision_tree.hpp"
#include "pondguard/dsl/parser.hpp"
#include "pondguard/evidence/campaign.hpp"
#include "pondguard/rbr/engine.hpp"
#include "pondguard/sim/episode.hpp"
#include "pondguard/verify/checker.hpp"

namespace {

using namespace pondguard;

const char* kBaselineRules =
    "rule emergency_stop: when contact do stop\n"
    "rule back_off: when voted_trip and distance < 1.8 do reverse\n"
    "rule avoid_trip: when voted_trip do turn_away\n"
    "rule keep_clear: when trip_latched and distance < 3.0 do turn_away\n"
    "rule cruise: when always do hold_course\n";

sim::ScenarioConfig bench_scenario() {
  sim::ScenarioConfig cfg;
  cfg.map.width = 20.0;
  cfg.map.height = 20.0;
  cfg.map.circles.push_back({10.0, 10.0, 1.0});
  cfg.start = {3.0, 3.0, 0.785398};
  cfg.max_ticks = 400;
  cfg.physics.c_drag = 2.0;
  cfg.whisker_reach = 0.15;
  return cfg;
}

void BM_ParseRules(benchmark::State& state) {
  for (auto _ : state) {
    auto rs = dsl::parse(kBaselineRules);
    benchmark::DoNotOptimize(rs.source_hash());
  }
}
BENCHMARK(BM_ParseRules);

void BM_Deliberate(benchmark::State& state) {
  const auto rs = dsl::parse(kBaselineRules);
  rbr::Percept p;
  p.distance = 1.2;
  p.voted_trip = true;
  rbr::BeliefState b;
  b.trip_latched = true;
  b.ticks_since_trip = 3;
  for (auto _ : state) {
    auto step = rbr::deliberate(b, p, rs);
    benchmark::DoNotOptimize(step.action);
  }
}
BENCHMARK(BM_Deliberate);

void BM_CompileDecisionTree(benchmark::State& state) {
  const auto rs = dsl::parse(kBaselineRules);
  for (auto _ : state) {
    auto tree = dsl::DecisionTree::compile(rs);
    benchmark::DoNotOptimize(tree.leaf_count());
  }
}
BENCHMARK(BM_CompileDecisionTree);

void BM_Raycast(benchmark::State& state) {
  const auto cfg = bench_scenario();
  double heading = 0.0;
  for (auto _ : state) {
    heading += 0.1;
    benchmark::DoNotOptimize(
        sim::raycast_distance(cfg.map, 3.0, 3.0, heading, 0.4));
  }
}
BENCHMARK(BM_Raycast);

void BM_Episode(benchmark::State& state) {
  const auto cfg = bench_scenario();
  const auto rs = dsl::parse(kBaselineRules);
  std::uint64_t ticks = 0;
  for (auto _ : state) {
    const auto result = sim::run_episode(cfg, rs, /*keep_records=*/false);
    ticks += result.ticks;
    benchmark::DoNotOptimize(result.outcome);
  }
  state.counters["ticks_per_episode"] =
      benchmark::Counter(static_cast<double>(ticks) /
                         static_cast<double>(state.iterations()));
}
BENCHMARK(BM_Episode);

void BM_BuildStateSpace(benchmark::State& state) {
  const auto rs = dsl::parse(kBaselineRules);
  verify::EnvOptions opts;
  opts.wdt_deadline = static_cast<std::uint32_t>(state.range(0));
  const auto env = verify::EnvAbstraction::for_ruleset(rs, opts);
  std::size_t states = 0;
  for (auto _ : state) {
    const auto graph = verify::build_state_space(rs, env);
    states = graph.state_count();
    benchmark::DoNotOptimize(graph.transition_count());
  }
  state.counters["states"] = static_cast<double>(states);
}
BENCHMARK(BM_BuildStateSpace)->Arg(4)->Arg(8);

void BM_CheckBoundedResponse(benchmark::State& state) {
  const auto rs = dsl::parse(kBaselineRules);
  const auto env = verify::EnvAbstraction::for_ruleset(rs, {});
  const auto graph = verify::build_state_space(rs, env);
  const auto prop = verify::parse_properties(
      "avoid : G( voted_trip -> F<=2 ( action=stop | action=reverse | "
      "action=turn_away ) )\n")[0];
  for (auto _ : state) {
    const auto verdict = verify::check(graph, prop);
    benchmark::DoNotOptimize(verdict.outcome);
  }
}
BENCHMARK(BM_CheckBoundedResponse);

void BM_Wilson(benchmark::State& state) {
  std::uint64_t k = 0;
  for (auto _ : state) {
    k = (k + 1) % 1000;
    benchmark::DoNotOptimize(evidence::wilson95(k, 1000));
  }
}
BENCHMARK(BM_Wilson);

}  // namespace

BENCHMARK_MAIN();
