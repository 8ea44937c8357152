#include "fbplan/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace fbplan {

double ReferencePath::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) total += (waypoints[i] - waypoints[i - 1]).norm();
  return total;
}

namespace {

struct OpenEntry {
  double f;
  int ix;
  int iy;
  double g;
  // Min-heap on (f, x, y).
  bool operator>(const OpenEntry& o) const { return std::tie(f, ix, iy) > std::tie(o.f, o.ix, o.iy); }
};

}  // namespace

ReferencePath plan_reference_path(const EsdfGrid& esdf, const Vec2& start, const Vec2& goal, double clearance) {
  const int nx = esdf.nx();
  const int ny = esdf.ny();
  int sx = 0, sy = 0, gx = 0, gy = 0;
  if (!esdf.cell_of(start, sx, sy) || !(esdf.at(sx, sy) > clearance)) {
    throw Error(ErrorCode::StartBlocked, "start cell is outside the map or within clearance");
  }
  if (!esdf.cell_of(goal, gx, gy) || !(esdf.at(gx, gy) > clearance)) {
    throw Error(ErrorCode::GoalBlocked, "goal cell is outside the map or within clearance");
  }

  const double res = esdf.resolution();
  const double diag = res * std::sqrt(2.0);
  const Vec2 goal_center = esdf.cell_center(gx, gy);
  auto heuristic = [&](int ix, int iy) { return (esdf.cell_center(ix, iy) - goal_center).norm(); };
  auto idx = [nx](int ix, int iy) { return static_cast<std::size_t>(iy) * nx + ix; };

  const std::size_t total = static_cast<std::size_t>(nx) * ny;
  std::vector<double> g_cost(total, std::numeric_limits<double>::infinity());
  std::vector<int> parent(total, -1);
  std::vector<std::uint8_t> closed(total, 0);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;

  g_cost[idx(sx, sy)] = 0.0;
  open.push({heuristic(sx, sy), sx, sy, 0.0});
  bool found = false;
  while (!open.empty()) {
    const OpenEntry cur = open.top();
    open.pop();
    const std::size_t ci = idx(cur.ix, cur.iy);
    if (closed[ci] || cur.g > g_cost[ci]) continue;
    closed[ci] = 1;
    if (cur.ix == gx && cur.iy == gy) {
      found = true;
      break;
    }
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int nxi = cur.ix + dx;
        const int nyi = cur.iy + dy;
        if (nxi < 0 || nyi < 0 || nxi >= nx || nyi >= ny) continue;
        const std::size_t ni = idx(nxi, nyi);
        if (closed[ni] || !(esdf.at(nxi, nyi) > clearance)) continue;
        const double ng = cur.g + ((dx != 0 && dy != 0) ? diag : res);
        if (ng < g_cost[ni]) {
          g_cost[ni] = ng;
          parent[ni] = static_cast<int>(ci);
          open.push({ng + heuristic(nxi, nyi), nxi, nyi, ng});
        }
      }
    }
  }
  if (!found) throw Error(ErrorCode::NoPath, "goal is unreachable at the requested clearance");

  ReferencePath path;
  for (int k = static_cast<int>(idx(gx, gy)); k >= 0; k = parent[k]) {
    path.waypoints.push_back(esdf.cell_center(k % nx, k / nx));
  }
  std::reverse(path.waypoints.begin(), path.waypoints.end());
  return path;
}

}  // namespace fbplan
