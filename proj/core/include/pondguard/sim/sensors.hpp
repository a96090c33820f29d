#pragma once

// The three sensing channels. Randomness is drawn in a fixed order every
// tick (sonar noise, classifier detect, classifier false positive) whether or
// not the value ends up used, so a fault schedule on one channel never
// perturbs another channel's stream.

#include <cstdint>

#include "pondguard/kernel/safety.hpp"
#include "pondguard/sim/dynamics.hpp"
#include "pondguard/sim/scenario.hpp"
#include "pondguard/util/rng.hpp"

namespace pondguard::sim {

struct SenseResult {
  kernel::ChannelReading sonar;
  double sonar_distance = 0.0;  // what the channel reports, noise included
  kernel::ChannelReading classifier;
  bool whisker_contact = false;
  double true_ray_distance = 0.0;     // noise-free raycast along heading
  double true_min_clearance = 0.0;    // omnidirectional, collision truth
};

SenseResult sense(const AsvState& s, const PondMap& map,
                  const SensorParams& sensors, double whisker_reach,
                  std::uint64_t tick, util::Rng& rng);

}  // namespace pondguard::sim
