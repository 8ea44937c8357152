#pragma once

#include <vector>

#include "fbplan/esdf.hpp"

namespace fbplan {

/// Root-link reference: grid cell centres from start to goal, each adjacent
/// (8-connected) to the next.
struct ReferencePath {
  std::vector<Vec2> waypoints;

  double length() const;
};

/// 8-connected A* over the ESDF cells whose centre distance exceeds
/// `clearance`. Axial steps cost res, diagonal steps res*sqrt(2).
/// Throws StartBlocked, GoalBlocked or NoPath.
ReferencePath plan_reference_path(const EsdfGrid& esdf, const Vec2& start, const Vec2& goal, double clearance);

}  // namespace fbplan
