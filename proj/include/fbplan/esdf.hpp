#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fbplan/common.hpp"

namespace fbplan {

struct PointCloud {
  std::vector<Vec3> points;
};

/// Parses `x y z` lines (`#` comments) or an ASCII PCD file.
PointCloud load_point_cloud(const std::filesystem::path& path);

struct Bounds2 {
  Vec2 min = Vec2::Zero();
  Vec2 max = Vec2::Zero();
};

/// 2-D occupancy over half-open cells [origin + i*res, origin + (i+1)*res).
struct OccupancyGrid {
  Vec2 origin = Vec2::Zero();
  double resolution = 0.1;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> cells;  // iy * nx + ix

  bool occupied(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * nx + ix] != 0; }
  void set(int ix, int iy, bool value) { cells[static_cast<std::size_t>(iy) * nx + ix] = value ? 1 : 0; }
  Vec2 cell_center(int ix, int iy) const {
    return origin + resolution * Vec2(ix + 0.5, iy + 0.5);
  }
};

/// Empty grid covering `bounds`; at least 2 cells per axis.
OccupancyGrid make_occupancy(const Bounds2& bounds, double resolution);

/// Marks every cell containing a point whose z lies in [z_lo, z_hi].
/// Points outside the bounds are ignored.
OccupancyGrid voxelize(const PointCloud& cloud, double resolution, const Bounds2& bounds, double z_lo, double z_hi);

struct DistanceQuery {
  double distance = 0.0;
  Vec2 gradient = Vec2::Zero();
  bool out_of_bounds = false;
};

/// Signed distance to obstacles in the plane (positive in free space).
class DistanceField {
 public:
  virtual ~DistanceField() = default;
  virtual DistanceQuery query(const Vec2& p) const = 0;
  /// Batched form; the default loops over query().
  virtual void query_batch(const double* xs, const double* ys, std::size_t n, double* distance, double* grad_x,
                           double* grad_y, std::uint8_t* oob) const;
};

class EsdfGrid final : public DistanceField {
 public:
  EsdfGrid() = default;
  EsdfGrid(Vec2 origin, double resolution, int nx, int ny, std::vector<double> distance);

  DistanceQuery query(const Vec2& p) const override;
  void query_batch(const double* xs, const double* ys, std::size_t n, double* distance, double* grad_x,
                   double* grad_y, std::uint8_t* oob) const override;

  const Vec2& origin() const { return origin_; }
  double resolution() const { return resolution_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double at(int ix, int iy) const { return distance_[index(ix, iy)]; }
  Vec2 gradient_at(int ix, int iy) const { return {grad_x_[index(ix, iy)], grad_y_[index(ix, iy)]}; }
  Vec2 cell_center(int ix, int iy) const { return origin_ + resolution_ * Vec2(ix + 0.5, iy + 0.5); }
  /// Cell containing p under the half-open convention, or false if outside.
  bool cell_of(const Vec2& p, int& ix, int& iy) const;
  const std::vector<double>& distances() const { return distance_; }

  /// Row-major distances, one grid row per line.
  void write_csv(const std::filesystem::path& path) const;

 private:
  std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * nx_ + ix; }

  Vec2 origin_ = Vec2::Zero();
  double resolution_ = 0.1;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<double> distance_;
  std::vector<double> grad_x_;
  std::vector<double> grad_y_;
};

/// Squared Euclidean distance (in cells) from each cell to the nearest cell
/// with `site[k] != 0`; +infinity when there are no sites.
std::vector<double> squared_edt(const std::vector<std::uint8_t>& site, int nx, int ny);

EsdfGrid build_esdf(const OccupancyGrid& occ);

}  // namespace fbplan
