#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/dijkstra_shortest_paths.hpp>
#include <boost/math/quadrature/gauss.hpp>

namespace fbplan::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  Vec g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    g[k] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

Mat central_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h) {
  const Vec f0 = f(x);
  Mat jac(f0.size(), x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    jac.col(k) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

double relative_error(const Vec& a, const Vec& b, double floor) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), floor);
}

double relative_error(const Mat& a, const Mat& b, double floor) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), floor);
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 32>::integrate(f, a, b);
}

double bspline_basis(const Vec& knots, int i, int p, double t) {
  const double last = knots[knots.size() - 1];
  if (p == 0) {
    if (t == last) {
      // Left limit: the last non-empty span owns the end point.
      return knots[i] < knots[i + 1] && knots[i + 1] == last ? 1.0 : 0.0;
    }
    return knots[i] <= t && t < knots[i + 1] ? 1.0 : 0.0;
  }
  double value = 0.0;
  const double left = knots[i + p] - knots[i];
  const double right = knots[i + p + 1] - knots[i + 1];
  if (left > 0.0) value += (t - knots[i]) / left * bspline_basis(knots, i, p - 1, t);
  if (right > 0.0) value += (knots[i + p + 1] - t) / right * bspline_basis(knots, i + 1, p - 1, t);
  return value;
}

double bspline_basis_derivative(const Vec& knots, int i, int p, double t) {
  double value = 0.0;
  const double left = knots[i + p] - knots[i];
  const double right = knots[i + p + 1] - knots[i + 1];
  if (left > 0.0) value += p / left * bspline_basis(knots, i, p - 1, t);
  if (right > 0.0) value -= p / right * bspline_basis(knots, i + 1, p - 1, t);
  return value;
}

std::vector<double> brute_force_squared_distance(const std::vector<std::uint8_t>& site, int nx, int ny) {
  std::vector<double> out(site.size(), kInf);
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      long best = -1;
      for (int sy = 0; sy < ny; ++sy) {
        for (int sx = 0; sx < nx; ++sx) {
          if (!site[static_cast<std::size_t>(sy) * nx + sx]) continue;
          const long d = static_cast<long>(x - sx) * (x - sx) + static_cast<long>(y - sy) * (y - sy);
          if (best < 0 || d < best) best = d;
        }
      }
      if (best >= 0) out[static_cast<std::size_t>(y) * nx + x] = static_cast<double>(best);
    }
  }
  return out;
}

std::vector<double> brute_force_signed_distance(const OccupancyGrid& occ) {
  std::vector<std::uint8_t> free_cells(occ.cells.size());
  for (std::size_t k = 0; k < occ.cells.size(); ++k) free_cells[k] = occ.cells[k] ? 0 : 1;
  const std::vector<double> to_occupied = brute_force_squared_distance(occ.cells, occ.nx, occ.ny);
  const std::vector<double> to_free = brute_force_squared_distance(free_cells, occ.nx, occ.ny);
  const double diagonal = std::hypot(occ.nx * occ.resolution, occ.ny * occ.resolution);
  std::vector<double> out(occ.cells.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (occ.cells[k]) {
      out[k] = std::isfinite(to_free[k]) ? -std::sqrt(to_free[k]) * occ.resolution : -diagonal;
    } else {
      out[k] = std::isfinite(to_occupied[k]) ? std::sqrt(to_occupied[k]) * occ.resolution : diagonal;
    }
  }
  return out;
}

double dijkstra_cost(const EsdfGrid& esdf, int sx, int sy, int gx, int gy, double clearance) {
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS, boost::no_property,
                                      boost::property<boost::edge_weight_t, double>>;
  const int nx = esdf.nx(), ny = esdf.ny();
  const auto id = [nx](int x, int y) { return static_cast<std::size_t>(y) * nx + x; };
  const auto free = [&](int x, int y) { return esdf.at(x, y) > clearance; };
  if (!free(sx, sy) || !free(gx, gy)) return kInf;

  Graph g(static_cast<std::size_t>(nx) * ny);
  const double res = esdf.resolution();
  // Each undirected edge once: right, up, and both upward diagonals.
  const int steps[4][2] = {{1, 0}, {0, 1}, {1, 1}, {-1, 1}};
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      if (!free(x, y)) continue;
      for (const auto& s : steps) {
        const int x2 = x + s[0], y2 = y + s[1];
        if (x2 < 0 || x2 >= nx || y2 >= ny || !free(x2, y2)) continue;
        const double w = (s[0] != 0 && s[1] != 0) ? res * std::sqrt(2.0) : res;
        boost::add_edge(id(x, y), id(x2, y2), w, g);
      }
    }
  }
  std::vector<double> dist(boost::num_vertices(g));
  boost::dijkstra_shortest_paths(g, id(sx, sy), boost::distance_map(dist.data()));
  const double d = dist[id(gx, gy)];
  return d >= std::numeric_limits<double>::max() ? kInf : d;
}

double support(const std::vector<Vec3>& taus, const Vec3& n) {
  double h = 0.0;
  for (const Vec3& t : taus) h += std::max(0.0, n.dot(t));
  return h;
}

std::vector<Vec3> random_directions(std::mt19937_64& rng, int count) {
  std::normal_distribution<double> n01;
  std::vector<Vec3> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    const Vec3 v(n01(rng), n01(rng), n01(rng));
    if (v.norm() > 1e-12) out.push_back(v.normalized());
  }
  return out;
}

namespace {

std::vector<Vec3> corners(const std::vector<Vec3>& taus) {
  const std::size_t n = taus.size();
  std::vector<Vec3> pts;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Vec3 p = Vec3::Zero();
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (std::size_t{1} << k)) p += taus[k];
    }
    pts.push_back(p);
  }
  return pts;
}

double scale_of(const std::vector<Vec3>& pts) {
  double s = 0.0;
  for (const Vec3& p : pts) s = std::max(s, p.norm());
  return std::max(s, 1.0);
}

}  // namespace

std::vector<Vec3> zonotope_facet_normals(const std::vector<Vec3>& taus) {
  const std::vector<Vec3> pts = corners(taus);
  const double tol = 1e-12 * scale_of(pts);
  std::vector<Vec3> normals;
  const auto add = [&](const Vec3& n) {
    for (const Vec3& m : normals) {
      if ((m - n).norm() < 1e-9) return;
    }
    normals.push_back(n);
  };
  const std::size_t m = pts.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      for (std::size_t c = b + 1; c < m; ++c) {
        const Vec3 cross = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
        if (cross.norm() < 1e-9 * scale_of(pts) * scale_of(pts)) continue;
        const Vec3 n = cross.normalized();
        bool below = true, above = true;
        for (const Vec3& p : pts) {
          const double s = n.dot(p - pts[a]);
          below = below && s <= tol;
          above = above && s >= -tol;
        }
        if (below) add(n);
        if (above) add(-n);
      }
    }
  }
  return normals;
}

double zonotope_inscribed_distance(const std::vector<Vec3>& taus) {
  const std::vector<Vec3> normals = zonotope_facet_normals(taus);
  double d = kInf;
  for (const Vec3& n : normals) d = std::min(d, support(taus, n));
  return normals.empty() ? 0.0 : std::max(d, 0.0);
}

}  // namespace fbplan::oracle
