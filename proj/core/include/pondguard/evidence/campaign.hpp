#pragma once

// Monte Carlo fault-injection campaigns: N independent episodes with derived
// seeds, aggregated into a collision probability estimate with a Wilson 95%
// interval. Aggregation is associative and order independent, so the result
// is identical for any worker count.

#include <cstdint>
#include <string>

#include "pondguard/dsl/ast.hpp"
#include "pondguard/sim/scenario.hpp"

namespace pondguard::evidence {

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

// Wilson score interval at z = 1.959964. Well behaved at zero counts, which
// is the expected baseline outcome.
WilsonInterval wilson95(std::uint64_t successes, std::uint64_t trials);

struct CampaignResult {
  std::uint64_t episodes = 0;
  std::uint64_t collisions = 0;
  std::uint64_t guard_demands = 0;
  std::uint64_t wdt_escalations = 0;
  std::uint64_t guard_stops = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t completed = 0;
  double p_collision_hat = 0.0;
  WilsonInterval ci95;
  std::uint64_t root_seed = 0;
  std::uint64_t ruleset_source_hash = 0;
  std::uint64_t scenario_hash = 0;

  std::string to_json() const;  // stable key order
};

// threads == 0 picks the hardware concurrency, capped by the episode count.
CampaignResult run_campaign(const sim::ScenarioConfig& cfg,
                            const dsl::RuleSet& rs, std::uint64_t episodes,
                            std::uint64_t root_seed, unsigned threads = 0);

}  // namespace pondguard::evidence
