#include "fbplan/esdf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "fbplan/kernels.hpp"

namespace fbplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

Vec3 parse_xyz(const std::string& text, int line_no, int cx, int cy, int cz) {
  std::istringstream in(text);
  std::vector<double> values;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number '" + tok + "'", line_no);
    }
    values.push_back(v);
  }
  const int need = std::max({cx, cy, cz}) + 1;
  if (static_cast<int>(values.size()) < need) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected x y z", line_no);
  }
  return {values[cx], values[cy], values[cz]};
}

// One-dimensional squared distance transform (lower envelope of parabolas)
// over the finite entries of f. Entries of d with no finite site stay +inf.
void edt_1d(const double* f, std::size_t stride, int n, double* d, std::size_t d_stride,
            std::vector<int>& v, std::vector<double>& z) {
  int k = -1;
  for (int q = 0; q < n; ++q) {
    const double fq = f[q * stride];
    if (!std::isfinite(fq)) continue;
    while (k >= 0) {
      const int p = v[k];
      const double s = ((fq + double(q) * q) - (f[p * stride] + double(p) * p)) / (2.0 * q - 2.0 * p);
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -kInf : ((fq + double(q) * q) - (f[v[k - 1] * stride] + double(v[k - 1]) * v[k - 1])) /
                                (2.0 * q - 2.0 * v[k - 1]);
    z[k + 1] = kInf;
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) d[q * d_stride] = kInf;
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double dq = double(q - v[j]);
    d[q * d_stride] = dq * dq + f[v[j] * stride];
  }
}

}  // namespace

PointCloud load_point_cloud(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open point cloud " + path.string());
  PointCloud cloud;
  std::string line;
  int line_no = 0;
  int cx = 0, cy = 1, cz = 2;
  bool pcd_header = false;
  bool in_data = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = strip_comment(line);
    if (blank(body)) continue;
    std::istringstream words(body);
    std::string first;
    words >> first;
    if (!in_data || (cloud.points.empty() && !pcd_header && std::isalpha(static_cast<unsigned char>(first[0])) &&
                     (first == "VERSION" || first == "FIELDS"))) {
      pcd_header = true;
      in_data = false;
      if (first == "FIELDS") {
        std::vector<std::string> names;
        for (std::string w; words >> w;) names.push_back(w);
        auto col = [&](const char* name) {
          const auto it = std::find(names.begin(), names.end(), name);
          if (it == names.end()) throw Error(ErrorCode::ParseError, "PCD header lacks field " + std::string(name), line_no);
          return static_cast<int>(it - names.begin());
        };
        cx = col("x");
        cy = col("y");
        cz = col("z");
      } else if (first == "DATA") {
        std::string kind;
        words >> kind;
        if (kind != "ascii") throw Error(ErrorCode::ParseError, "only ASCII PCD data is supported", line_no);
        in_data = true;
      }
      continue;
    }
    cloud.points.push_back(parse_xyz(body, line_no, cx, cy, cz));
  }
  return cloud;
}

OccupancyGrid make_occupancy(const Bounds2& bounds, double resolution) {
  if (!(resolution > 0.0)) throw Error(ErrorCode::InvalidArgument, "resolution must be > 0");
  const Vec2 extent = bounds.max - bounds.min;
  if (!(extent.x() > 0.0 && extent.y() > 0.0)) throw Error(ErrorCode::InvalidArgument, "degenerate map bounds");
  OccupancyGrid occ;
  occ.origin = bounds.min;
  occ.resolution = resolution;
  // Tolerate extents that are a whole number of cells up to rounding.
  occ.nx = std::max(2, static_cast<int>(std::ceil(extent.x() / resolution - 1e-9)));
  occ.ny = std::max(2, static_cast<int>(std::ceil(extent.y() / resolution - 1e-9)));
  occ.cells.assign(static_cast<std::size_t>(occ.nx) * occ.ny, 0);
  return occ;
}

OccupancyGrid voxelize(const PointCloud& cloud, double resolution, const Bounds2& bounds, double z_lo, double z_hi) {
  OccupancyGrid occ = make_occupancy(bounds, resolution);
  for (const Vec3& p : cloud.points) {
    if (p.z() < z_lo || p.z() > z_hi) continue;
    const double fx = std::floor((p.x() - occ.origin.x()) / resolution);
    const double fy = std::floor((p.y() - occ.origin.y()) / resolution);
    if (fx < 0.0 || fy < 0.0 || fx >= occ.nx || fy >= occ.ny) continue;
    occ.set(static_cast<int>(fx), static_cast<int>(fy), true);
  }
  return occ;
}

std::vector<double> squared_edt(const std::vector<std::uint8_t>& site, int nx, int ny) {
  const std::size_t total = static_cast<std::size_t>(nx) * ny;
  std::vector<double> f(total);
  for (std::size_t k = 0; k < total; ++k) f[k] = site[k] ? 0.0 : kInf;
  std::vector<double> cols(total);
  const int longest = std::max(nx, ny);
  std::vector<int> v(longest);
  std::vector<double> z(longest + 1);
  for (int ix = 0; ix < nx; ++ix) edt_1d(f.data() + ix, nx, ny, cols.data() + ix, nx, v, z);
  std::vector<double> out(total);
  for (int iy = 0; iy < ny; ++iy) {
    const std::size_t row = static_cast<std::size_t>(iy) * nx;
    edt_1d(cols.data() + row, 1, nx, out.data() + row, 1, v, z);
  }
  return out;
}

EsdfGrid build_esdf(const OccupancyGrid& occ) {
  if (occ.nx < 2 || occ.ny < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 cells per axis");
  const std::size_t total = occ.cells.size();
  std::vector<std::uint8_t> free_sites(total);
  for (std::size_t k = 0; k < total; ++k) free_sites[k] = occ.cells[k] ? 0 : 1;
  const std::vector<double> to_occupied = squared_edt(occ.cells, occ.nx, occ.ny);
  const std::vector<double> to_free = squared_edt(free_sites, occ.nx, occ.ny);
  const double diagonal = std::hypot(occ.nx * occ.resolution, occ.ny * occ.resolution);

  std::vector<double> dist(total);
  for (std::size_t k = 0; k < total; ++k) {
    if (occ.cells[k]) {
      dist[k] = std::isfinite(to_free[k]) ? -std::sqrt(to_free[k]) * occ.resolution : -diagonal;
    } else {
      dist[k] = std::isfinite(to_occupied[k]) ? std::sqrt(to_occupied[k]) * occ.resolution : diagonal;
    }
  }
  return EsdfGrid(occ.origin, occ.resolution, occ.nx, occ.ny, std::move(dist));
}

void DistanceField::query_batch(const double* xs, const double* ys, std::size_t n, double* distance,
                                double* grad_x, double* grad_y, std::uint8_t* oob) const {
  for (std::size_t k = 0; k < n; ++k) {
    const DistanceQuery q = query(Vec2(xs[k], ys[k]));
    distance[k] = q.distance;
    grad_x[k] = q.gradient.x();
    grad_y[k] = q.gradient.y();
    oob[k] = q.out_of_bounds ? 1 : 0;
  }
}

EsdfGrid::EsdfGrid(Vec2 origin, double resolution, int nx, int ny, std::vector<double> distance)
    : origin_(origin), resolution_(resolution), nx_(nx), ny_(ny), distance_(std::move(distance)) {
  if (!(resolution > 0.0)) throw Error(ErrorCode::InvalidArgument, "resolution must be > 0");
  if (nx < 2 || ny < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 cells per axis");
  if (distance_.size() != static_cast<std::size_t>(nx) * ny) {
    throw Error(ErrorCode::InvalidArgument, "distance array does not match grid dimensions");
  }
  grad_x_.resize(distance_.size());
  grad_y_.resize(distance_.size());
  const double inv2 = 1.0 / (2.0 * resolution);
  const double inv = 1.0 / resolution;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const std::size_t k = index(ix, iy);
      if (ix == 0) {
        grad_x_[k] = (distance_[index(1, iy)] - distance_[k]) * inv;
      } else if (ix == nx - 1) {
        grad_x_[k] = (distance_[k] - distance_[index(ix - 1, iy)]) * inv;
      } else {
        grad_x_[k] = (distance_[index(ix + 1, iy)] - distance_[index(ix - 1, iy)]) * inv2;
      }
      if (iy == 0) {
        grad_y_[k] = (distance_[index(ix, 1)] - distance_[k]) * inv;
      } else if (iy == ny - 1) {
        grad_y_[k] = (distance_[k] - distance_[index(ix, iy - 1)]) * inv;
      } else {
        grad_y_[k] = (distance_[index(ix, iy + 1)] - distance_[index(ix, iy - 1)]) * inv2;
      }
    }
  }
}

DistanceQuery EsdfGrid::query(const Vec2& p) const {
  DistanceQuery q;
  std::uint8_t oob = 0;
  query_batch(&p.x(), &p.y(), 1, &q.distance, &q.gradient.x(), &q.gradient.y(), &oob);
  q.out_of_bounds = oob != 0;
  return q;
}

void EsdfGrid::query_batch(const double* xs, const double* ys, std::size_t n, double* distance, double* grad_x,
                           double* grad_y, std::uint8_t* oob) const {
  kernels::GridFields g;
  g.distance = distance_.data();
  g.grad_x = grad_x_.data();
  g.grad_y = grad_y_.data();
  g.nx = nx_;
  g.ny = ny_;
  g.origin_x = origin_.x();
  g.origin_y = origin_.y();
  g.resolution = resolution_;
  kernels::sample_bilinear(g, xs, ys, n, distance, grad_x, grad_y, oob);
}

bool EsdfGrid::cell_of(const Vec2& p, int& ix, int& iy) const {
  const double fx = std::floor((p.x() - origin_.x()) / resolution_);
  const double fy = std::floor((p.y() - origin_.y()) / resolution_);
  if (!(fx >= 0.0 && fy >= 0.0 && fx < nx_ && fy < ny_)) return false;
  ix = static_cast<int>(fx);
  iy = static_cast<int>(fy);
  return true;
}

void EsdfGrid::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.precision(17);
  for (int iy = 0; iy < ny_; ++iy) {
    for (int ix = 0; ix < nx_; ++ix) {
      if (ix) out << ',';
      out << at(ix, iy);
    }
    out << '\n';
  }
}

}  // namespace fbplan
