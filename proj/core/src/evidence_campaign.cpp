#include "pondguard/evidence/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <json.hpp>
#include <thread>
#include <vector>

#include "pondguard/sim/episode.hpp"
#include "pondguard/util/hash.hpp"
#include "pondguard/util/rng.hpp"

namespace pondguard::evidence {

WilsonInterval wilson95(std::uint64_t successes, std::uint64_t trials) {
  constexpr double z = 1.959964;
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval ci;
  // Clamp to [0, 1] and snap rounding dust so the interval always contains
  // the point estimate exactly.
  ci.low = std::min(std::max(0.0, centre - half), p);
  ci.high = std::max(std::min(1.0, centre + half), p);
  return ci;
}

namespace {

struct EpisodeStats {
  sim::Outcome outcome = sim::Outcome::kTimeout;
  std::uint64_t demands = 0;
  std::uint64_t escalations = 0;
};

}  // namespace

CampaignResult run_campaign(const sim::ScenarioConfig& cfg,
                            const dsl::RuleSet& rs, std::uint64_t episodes,
                            std::uint64_t root_seed, unsigned threads) {
  if (episodes < 1) throw ConfigError("campaign needs at least one episode");
  cfg.validate();

  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, episodes));

  std::vector<EpisodeStats> stats(episodes);
  std::atomic<std::uint64_t> next_index{0};

  auto worker = [&]() {
    while (true) {
      const std::uint64_t i = next_index.fetch_add(1);
      if (i >= episodes) break;
      sim::ScenarioConfig episode_cfg = cfg;
      episode_cfg.rng_seed = util::derive_seed(root_seed, i);
      const sim::EpisodeResult r =
          sim::run_episode(episode_cfg, rs, /*keep_records=*/false);
      stats[i] = EpisodeStats{r.outcome, r.demand_count, r.wdt_escalations};
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  CampaignResult result;
  result.episodes = episodes;
  result.root_seed = root_seed;
  result.ruleset_source_hash = rs.source_hash();
  result.scenario_hash = cfg.content_hash();
  for (const EpisodeStats& s : stats) {
    result.guard_demands += s.demands;
    result.wdt_escalations += s.escalations;
    switch (s.outcome) {
      case sim::Outcome::kCollision: ++result.collisions; break;
      case sim::Outcome::kGuardStop: ++result.guard_stops; break;
      case sim::Outcome::kTimeout: ++result.timeouts; break;
      case sim::Outcome::kCompleted: ++result.completed; break;
    }
  }
  result.p_collision_hat = static_cast<double>(result.collisions) /
                           static_cast<double>(episodes);
  result.ci95 = wilson95(result.collisions, episodes);
  return result;
}

std::string CampaignResult::to_json() const {
  nlohmann::ordered_json j;
  j["episodes"] = episodes;
  j["collisions"] = collisions;
  j["guard_demands"] = guard_demands;
  j["wdt_escalations"] = wdt_escalations;
  j["guard_stops"] = guard_stops;
  j["timeouts"] = timeouts;
  j["completed"] = completed;
  j["p_collision_hat"] = p_collision_hat;
  j["ci95"]["low"] = ci95.low;
  j["ci95"]["high"] = ci95.high;
  j["root_seed"] = root_seed;
  j["ruleset_source_hash"] = util::hex_u64(ruleset_source_hash);
  j["scenario_hash"] = util::hex_u64(scenario_hash);
  return j.dump(2) + "\n";
}

}  // namespace pondguard::evidence
