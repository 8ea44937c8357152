#include "doctest.h"
#include "fbplan/guidance.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fbplan;

namespace {

/// Sum of step costs; also checks that every step joins 8-adjacent free cells.
double path_cost(const EsdfGrid& esdf, const ReferencePath& path, double clearance) {
  double cost = 0.0;
  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    int ix = 0, iy = 0;
    REQUIRE(esdf.cell_of(path.waypoints[i], ix, iy));
    CHECK(esdf.at(ix, iy) > clearance);
    if (i == 0) continue;
    const Vec2 step = (path.waypoints[i] - path.waypoints[i - 1]) / esdf.resolution();
    const long sx = std::lround(step.x()), sy = std::lround(step.y());
    CHECK(std::max(std::abs(sx), std::abs(sy)) == 1);
    cost += (sx != 0 && sy != 0) ? esdf.resolution() * std::sqrt(2.0) : esdf.resolution();
  }
  return cost;
}

}  // namespace

TEST_SUITE("guidance") {

TEST_CASE("free space gives the straight line") {
  const EsdfGrid esdf = build_esdf(test::empty_grid(30, 20, 0.1, Vec2(-0.05, -0.95)));
  const ReferencePath path = plan_reference_path(esdf, Vec2(0.0, 0.0), Vec2(1.0, 0.0), 0.0);
  REQUIRE(path.waypoints.size() == 11);
  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    CHECK(path.waypoints[i].x() == doctest::Approx(0.1 * i).epsilon(1e-12));
    CHECK(std::abs(path.waypoints[i].y()) < 1e-12);
  }
  CHECK(path.length() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("start equal to goal") {
  const EsdfGrid esdf = build_esdf(test::empty_grid(10, 10, 0.1));
  const ReferencePath path = plan_reference_path(esdf, Vec2(0.45, 0.45), Vec2(0.45, 0.45), 0.0);
  CHECK(path.waypoints.size() == 1);
  CHECK(path.length() == 0.0);
}

TEST_CASE("blocked and unreachable queries") {
  OccupancyGrid occ = test::empty_grid(20, 20, 0.1);
  for (int i = 5; i <= 14; ++i) {
    occ.set(i, 5, true);
    occ.set(i, 14, true);
    occ.set(5, i, true);
    occ.set(14, i, true);
  }
  const EsdfGrid esdf = build_esdf(occ);
  auto code_of = [&](Vec2 s, Vec2 g) {
    try {
      plan_reference_path(esdf, s, g, 0.0);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of(Vec2(0.15, 0.15), Vec2(1.0, 1.0)) == ErrorCode::NoPath);
  CHECK(code_of(Vec2(0.55, 0.55), Vec2(0.15, 0.15)) == ErrorCode::StartBlocked);
  CHECK(code_of(Vec2(0.15, 0.15), Vec2(0.55, 0.55)) == ErrorCode::GoalBlocked);
  CHECK(code_of(Vec2(-1.0, 0.15), Vec2(0.15, 0.15)) == ErrorCode::StartBlocked);
  // Cell (4, 5) touches the ring: free at clearance 0, blocked at 0.1 m.
  CHECK(plan_reference_path(esdf, Vec2(0.45, 0.55), Vec2(0.15, 0.15), 0.0).waypoints.size() > 1);
  try {
    plan_reference_path(esdf, Vec2(0.45, 0.55), Vec2(0.15, 0.15), 0.1);
    FAIL("start next to a wall passed a 0.1 m clearance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StartBlocked);
  }
}

TEST_CASE("A* cost equals Dijkstra on random grids") {
  std::mt19937_64 rng(40);
  std::uniform_int_distribution<int> cell(0, 59);
  int compared = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const double clearance = trial % 2 == 0 ? 0.0 : 0.1;
    const EsdfGrid esdf = build_esdf(test::random_grid(rng, 60, 60, clearance > 0.0 ? 0.04 : 0.2));
    int sx = 0, sy = 0, gx = 0, gy = 0;
    do {
      sx = cell(rng), sy = cell(rng), gx = cell(rng), gy = cell(rng);
    } while (!(esdf.at(sx, sy) > clearance) || !(esdf.at(gx, gy) > clearance));
    const double expect = oracle::dijkstra_cost(esdf, sx, sy, gx, gy, clearance);
    try {
      const ReferencePath path = plan_reference_path(esdf, esdf.cell_center(sx, sy), esdf.cell_center(gx, gy), clearance);
      CHECK(path_cost(esdf, path, clearance) == doctest::Approx(expect).epsilon(1e-12));
      CHECK((path.waypoints.front() - esdf.cell_center(sx, sy)).norm() < 1e-12);
      CHECK((path.waypoints.back() - esdf.cell_center(gx, gy)).norm() < 1e-12);
      ++compared;
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoPath);
      CHECK(std::isinf(expect));
    }
  }
  CHECK(compared >= 15);
}

}  // TEST_SUITE
