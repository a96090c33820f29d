#pragma once

// Differential-thrust surface kinematics with first-order drag:
//   surge'    = surge + dt * (k_thrust * (l + r) / 2 - c_drag * surge)
//   yaw_rate' = k_yaw * (r - l)
//   heading'  = normalize(heading + dt * yaw_rate')
//   position advances along the new heading by dt * surge'

#include "pondguard/rbr/engine.hpp"

namespace pondguard::sim {

struct PhysicsParams {
  double k_thrust = 1.0;
  double c_drag = 0.8;
  double k_yaw = 1.0;
};

struct AsvState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians, (-pi, pi]
  double surge = 0.0;    // m/s
  double yaw_rate = 0.0;
  double thrust_left = 0.0;   // command applied this tick
  double thrust_right = 0.0;
  double hull_radius = 0.4;
};

double normalize_heading(double a);

AsvState step_dynamics(const AsvState& s, const rbr::ThrustCommand& cmd,
                       const PhysicsParams& phys, double dt);

}  // namespace pondguard::sim
