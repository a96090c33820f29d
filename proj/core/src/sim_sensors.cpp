#include "pondguard/sim/sensors.hpp"

#include <algorithm>

#include "pondguard/rbr/engine.hpp"

namespace pondguard::sim {

namespace {

// First active window for the channel wins; later overlaps are ignored.
const FaultWindow* active_fault(const SensorParams& sensors,
                                FaultWindow::Channel channel,
                                std::uint64_t tick) {
  for (const FaultWindow& f : sensors.faults) {
    if (f.channel == channel && f.active(tick)) return &f;
  }
  return nullptr;
}

}  // namespace

SenseResult sense(const AsvState& s, const PondMap& map,
                  const SensorParams& sensors, double whisker_reach,
                  std::uint64_t tick, util::Rng& rng) {
  SenseResult out;
  out.true_ray_distance =
      raycast_distance(map, s.x, s.y, s.heading, s.hull_radius);
  out.true_min_clearance = min_clearance(map, s.x, s.y, s.hull_radius);

  // Fixed draw order; see header.
  const double noise = rng.gaussian();
  const double u_detect = rng.uniform01();
  const double u_false_positive = rng.uniform01();

  // Sonar: noisy ranging against the trip threshold.
  out.sonar.tick = tick;
  out.sonar_distance = std::max(
      0.0, out.true_ray_distance + sensors.sonar_noise_sigma * noise);
  out.sonar.tripped = out.sonar_distance < sensors.sonar_trip_threshold;
  out.sonar.healthy = true;
  if (const FaultWindow* f =
          active_fault(sensors, FaultWindow::Channel::kSonar, tick)) {
    switch (f->kind) {
      case FaultWindow::Kind::kStuckLow:
        out.sonar_distance = 0.0;
        out.sonar.tripped = true;
        break;
      case FaultWindow::Kind::kStuckHigh:
        out.sonar_distance = rbr::kDistanceSentinel;
        out.sonar.tripped = false;
        break;
      case FaultWindow::Kind::kDropout:
        out.sonar_distance = rbr::kDistanceSentinel;
        out.sonar.tripped = false;
        out.sonar.healthy = false;
        break;
    }
    if (f->mark_unhealthy) out.sonar.healthy = false;
  }

  // Classifier: detection stub against the noise-free distance.
  out.classifier.tick = tick;
  if (out.true_ray_distance <= sensors.classifier_detect_range) {
    out.classifier.tripped = u_detect < sensors.classifier_p_detect;
  } else {
    out.classifier.tripped =
        u_false_positive < sensors.classifier_false_positive_rate;
  }
  out.classifier.healthy = true;
  if (const FaultWindow* f =
          active_fault(sensors, FaultWindow::Channel::kClassifier, tick)) {
    switch (f->kind) {
      case FaultWindow::Kind::kStuckLow:
        out.classifier.tripped = true;
        break;
      case FaultWindow::Kind::kStuckHigh:
        out.classifier.tripped = false;
        break;
      case FaultWindow::Kind::kDropout:
        out.classifier.tripped = false;
        out.classifier.healthy = false;
        break;
    }
    if (f->mark_unhealthy) out.classifier.healthy = false;
  }

  // Whiskers ring the hull, so contact is the omnidirectional clearance test.
  out.whisker_contact = out.true_min_clearance <= whisker_reach;
  return out;
}

}  // namespace pondguard::sim
