#pragma once

// One closed-loop episode: sense -> vote -> update beliefs -> deliberate ->
// act -> watchdog -> guard -> power gate -> dynamics -> collision check,
// every tick, deterministically from (scenario, rules). The trace CSV is the
// kernel event log and the evidence artifact for simulation claims.

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pondguard/dsl/ast.hpp"
#include "pondguard/sim/scenario.hpp"

namespace pondguard::sim {

struct TickRecord {
  std::uint64_t tick = 0;
  AsvState asv;  // state after this tick's motion
  double sonar_dist = 0.0;
  bool sonar_trip = false;
  bool sonar_healthy = true;
  bool clf_trip = false;
  bool clf_healthy = true;
  bool voted_trip = false;
  Action action;
  std::string fired_rule;
  bool wdt_armed = false;
  std::uint32_t wdt_remaining = 0;
  bool guard_latched = false;
  std::uint64_t demand_count = 0;
  bool contact = false;
  bool collision = false;
};

enum class Outcome : std::uint8_t { kCompleted, kCollision, kGuardStop, kTimeout };

std::string_view outcome_name(Outcome o);

struct EpisodeResult {
  Outcome outcome = Outcome::kTimeout;
  std::uint64_t ticks = 0;
  std::uint64_t demand_count = 0;
  std::uint64_t wdt_escalations = 0;
  std::uint64_t trip_count = 0;  // ticks with voted_trip set
  std::vector<TickRecord> records;  // empty when keep_records is false
};

EpisodeResult run_episode(const ScenarioConfig& cfg, const dsl::RuleSet& rs,
                          bool keep_records = true);

// Fixed header and 6-decimal floats; byte-identical for identical episodes.
void write_trace_csv(std::ostream& out, std::span<const TickRecord> records);

inline constexpr const char* kTraceCsvHeader =
    "tick,x,y,heading,surge,thrust_l,thrust_r,sonar_dist,sonar_trip,"
    "sonar_healthy,clf_trip,clf_healthy,voted_trip,action,rule,wdt_armed,"
    "wdt_remaining,guard_latched,demand_count,contact,collision";

}  // namespace pondguard::sim
