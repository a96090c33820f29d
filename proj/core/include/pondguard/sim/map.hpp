#pragma once

// Pond geometry: a rectangular walled basin with circular and axis-aligned
// rectangular obstacles. Collision truth and the whisker predicate use the
// omnidirectional hull clearance; the sonar uses the ray along the heading.

#include <vector>

#include "pondguard/util/errors.hpp"

namespace pondguard::sim {

struct Circle {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;
};

struct RectObstacle {
  double x = 0.0;  // lower-left corner
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
};

struct PondMap {
  double width = 20.0;
  double height = 20.0;
  std::vector<Circle> circles;
  std::vector<RectObstacle> rects;

  // Checks positive extent and that obstacles sit inside the walls.
  void validate() const;  // throws ConfigError
};

class PoseOutsidePond : public Error {
 public:
  PoseOutsidePond() : Error("pose outside pond boundary") {}
};

// Exact distance from (x, y) along `heading` to the first wall or obstacle
// surface, minus hull_radius, floored at zero. The pond is closed, so the
// result is always finite.
double raycast_distance(const PondMap& map, double x, double y, double heading,
                        double hull_radius);

// Signed omnidirectional clearance of a hull of radius hull_radius centred at
// (x, y): minimum over walls and obstacles, negative once overlapping.
double min_clearance(const PondMap& map, double x, double y,
                     double hull_radius);

// Relative bearing (radians, (-pi, pi], positive to port) of the closest
// geometry feature. Drives the turn-away direction captured at trip time.
double nearest_obstacle_bearing(const PondMap& map, double x, double y,
                                double heading);

}  // namespace pondguard::sim
