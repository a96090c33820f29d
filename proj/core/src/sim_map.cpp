#include "pondguard/sim/map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pondguard::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double normalize_angle(double a) {
  while (a > 3.14159265358979323846) a -= 2.0 * 3.14159265358979323846;
  while (a <= -3.14159265358979323846) a += 2.0 * 3.14159265358979323846;
  return a;
}

// Nearest positive ray parameter hitting the rectangle border [0,w]x[0,h]
// from inside.
double ray_to_walls(const PondMap& map, double x, double y, double dx,
                    double dy) {
  double best = kInf;
  if (dx > 0.0) best = std::min(best, (map.width - x) / dx);
  if (dx < 0.0) best = std::min(best, (0.0 - x) / dx);
  if (dy > 0.0) best = std::min(best, (map.height - y) / dy);
  if (dy < 0.0) best = std::min(best, (0.0 - y) / dy);
  return best;
}

double ray_to_circle(const Circle& c, double x, double y, double dx,
                     double dy) {
  const double ox = x - c.x;
  const double oy = y - c.y;
  const double b = ox * dx + oy * dy;
  const double q = ox * ox + oy * oy - c.r * c.r;
  const double disc = b * b - q;
  if (disc < 0.0) return kInf;
  const double root = std::sqrt(disc);
  const double t1 = -b - root;
  const double t2 = -b + root;
  if (t1 > 0.0) return t1;
  if (t2 > 0.0) return t2;  // inside the circle: exit point
  return kInf;
}

double ray_to_rect(const RectObstacle& r, double x, double y, double dx,
                   double dy) {
  // Slab method.
  double t_enter = -kInf;
  double t_exit = kInf;
  const double lo[2] = {r.x, r.y};
  const double hi[2] = {r.x + r.w, r.y + r.h};
  const double origin[2] = {x, y};
  const double dir[2] = {dx, dy};
  for (int axis = 0; axis < 2; ++axis) {
    if (dir[axis] == 0.0) {
      if (origin[axis] < lo[axis] || origin[axis] > hi[axis]) return kInf;
      continue;
    }
    double t0 = (lo[axis] - origin[axis]) / dir[axis];
    double t1 = (hi[axis] - origin[axis]) / dir[axis];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
  }
  if (t_enter > t_exit) return kInf;
  if (t_enter > 0.0) return t_enter;
  if (t_exit > 0.0 && t_enter <= 0.0) return 0.0;  // starting inside
  return kInf;
}

double point_to_rect_distance(const RectObstacle& r, double x, double y) {
  const double cx = std::clamp(x, r.x, r.x + r.w);
  const double cy = std::clamp(y, r.y, r.y + r.h);
  return std::hypot(x - cx, y - cy);
}

}  // namespace

void PondMap::validate() const {
  if (!(width > 0.0) || !(height > 0.0)) {
    throw ConfigError("pond extent must be positive");
  }
  for (const Circle& c : circles) {
    if (!(c.r > 0.0)) throw ConfigError("circle obstacle radius must be positive");
    if (c.x - c.r < 0.0 || c.x + c.r > width || c.y - c.r < 0.0 ||
        c.y + c.r > height) {
      throw ConfigError("circle obstacle extends outside the pond");
    }
  }
  for (const RectObstacle& r : rects) {
    if (!(r.w > 0.0) || !(r.h > 0.0)) {
      throw ConfigError("rect obstacle extent must be positive");
    }
    if (r.x < 0.0 || r.y < 0.0 || r.x + r.w > width || r.y + r.h > height) {
      throw ConfigError("rect obstacle extends outside the pond");
    }
  }
}

double raycast_distance(const PondMap& map, double x, double y, double heading,
                        double hull_radius) {
  if (x < 0.0 || x > map.width || y < 0.0 || y > map.height) {
    throw PoseOutsidePond();
  }
  const double dx = std::cos(heading);
  const double dy = std::sin(heading);
  double best = ray_to_walls(map, x, y, dx, dy);
  for (const Circle& c : map.circles) {
    best = std::min(best, ray_to_circle(c, x, y, dx, dy));
  }
  for (const RectObstacle& r : map.rects) {
    best = std::min(best, ray_to_rect(r, x, y, dx, dy));
  }
  return std::max(0.0, best - hull_radius);
}

double min_clearance(const PondMap& map, double x, double y,
                     double hull_radius) {
  double best = std::min({x, map.width - x, y, map.height - y});
  for (const Circle& c : map.circles) {
    best = std::min(best, std::hypot(x - c.x, y - c.y) - c.r);
  }
  for (const RectObstacle& r : map.rects) {
    best = std::min(best, point_to_rect_distance(r, x, y));
  }
  return best - hull_radius;
}

double nearest_obstacle_bearing(const PondMap& map, double x, double y,
                                double heading) {
  double best = kInf;
  double tx = x;
  double ty = y;

  auto consider = [&](double clearance, double px, double py) {
    if (clearance < best) {
      best = clearance;
      tx = px;
      ty = py;
    }
  };

  consider(x, 0.0, y);
  consider(map.width - x, map.width, y);
  consider(y, x, 0.0);
  consider(map.height - y, x, map.height);
  for (const Circle& c : map.circles) {
    consider(std::hypot(x - c.x, y - c.y) - c.r, c.x, c.y);
  }
  for (const RectObstacle& r : map.rects) {
    const double cx = std::clamp(x, r.x, r.x + r.w);
    const double cy = std::clamp(y, r.y, r.y + r.h);
    consider(std::hypot(x - cx, y - cy), cx, cy);
  }
  return normalize_angle(std::atan2(ty - y, tx - x) - heading);
}

}  // namespace pondguard::sim
