#include "pondguard/sim/dynamics.hpp"

#include <cmath>

namespace pondguard::sim {

double normalize_heading(double a) {
  constexpr double kPi = 3.14159265358979323846;
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

AsvState step_dynamics(const AsvState& s, const rbr::ThrustCommand& cmd,
                       const PhysicsParams& phys, double dt) {
  AsvState next = s;
  next.thrust_left = cmd.left;
  next.thrust_right = cmd.right;
  next.surge = s.surge + dt * (phys.k_thrust * (cmd.left + cmd.right) * 0.5 -
                               phys.c_drag * s.surge);
  next.yaw_rate = phys.k_yaw * (cmd.right - cmd.left);
  next.heading = normalize_heading(s.heading + dt * next.yaw_rate);
  next.x = s.x + dt * next.surge * std::cos(next.heading);
  next.y = s.y + dt * next.surge * std::sin(next.heading);
  return next;
}

}  // namespace pondguard::sim
