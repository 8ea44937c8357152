#include "fbplan/spline.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>
#include <vector>

namespace fbplan {

namespace {

// Polynomial in the span-local variable x, coefficients in ascending order.
using Poly = std::vector<double>;

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Poly poly_derivative(const Poly& a) {
  if (a.size() <= 1) return {};
  Poly out(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = a[i] * static_cast<double>(i);
  return out;
}

double poly_integral(const Poly& a, double length) {
  double total = 0.0;
  double power = length;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total += a[i] * power / static_cast<double>(i + 1);
    power *= length;
  }
  return total;
}

// Polynomial pieces of every B_{i,degree} on span [u_s, u_{s+1}], in x = t - u_s.
std::vector<Poly> span_basis_polys(const Vec& u, int degree, int span) {
  const int n_knots = static_cast<int>(u.size());
  std::vector<Poly> b(n_knots - 1);
  b[span] = {1.0};
  const double us = u[span];
  for (int k = 1; k <= degree; ++k) {
    std::vector<Poly> next(n_knots - 1 - k);
    for (int i = 0; i < n_knots - 1 - k; ++i) {
      Poly term;
      const double left = u[i + k] - u[i];
      if (left > 0.0 && !b[i].empty()) {
        // (t - u_i) / left = (x + u_s - u_i) / left
        term = poly_mul({(us - u[i]) / left, 1.0 / left}, b[i]);
      }
      const double right = u[i + k + 1] - u[i + 1];
      if (right > 0.0 && !b[i + 1].empty()) {
        // (u_{i+k+1} - t) / right
        term = poly_add(term, poly_mul({(u[i + k + 1] - us) / right, -1.0 / right}, b[i + 1]));
      }
      next[i] = term;
    }
    b = std::move(next);
  }
  return b;
}

int find_span(const Vec& u, int degree, int n_control, double t) {
  if (t >= u[n_control]) return n_control - 1;
  int lo = degree;
  int hi = n_control;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (t < u[mid]) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

// Nonzero B_{span-deg..span, deg}(t).
std::vector<double> basis_funs(const Vec& u, int span, int deg, double t) {
  std::vector<double> n(deg + 1, 0.0), left(deg + 1), right(deg + 1);
  n[0] = 1.0;
  for (int j = 1; j <= deg; ++j) {
    left[j] = t - u[span + 1 - j];
    right[j] = u[span + j] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = n[r] / (right[r + 1] + left[j - r]);
      n[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    n[j] = saved;
  }
  return n;
}

void check_domain(const Vec& knots, double t) {
  const double end = knots[knots.size() - 1];
  if (!(t >= 0.0 && t <= end)) {
    throw Error(ErrorCode::OutOfDomain, "t = " + std::to_string(t) + " outside [0, " + std::to_string(end) + "]");
  }
}

}  // namespace

Vec knot_vector(int n_free, int degree, double duration) {
  if (n_free < 1 || degree < 1) throw Error(ErrorCode::InvalidArgument, "need N >= 1 and p >= 1");
  if (!(duration > 0.0)) throw Error(ErrorCode::InvalidArgument, "segment duration must be > 0");
  const int interior = n_free + 3 - degree;
  if (interior < 0) throw Error(ErrorCode::InvalidArgument, "degree too high for control count");
  const double h = duration / (n_free + 4 - degree);
  Vec u(n_free + degree + 5);
  int k = 0;
  for (int i = 0; i <= degree; ++i) u[k++] = 0.0;
  for (int i = 1; i <= interior; ++i) u[k++] = i * h;
  for (int i = 0; i <= degree; ++i) u[k++] = duration;
  return u;
}

int control_count(const Vec& knots, int degree) { return static_cast<int>(knots.size()) - degree - 1; }

Vec basis_row(const Vec& knots, int degree, double t) {
  check_domain(knots, t);
  const int n = control_count(knots, degree);
  const int span = find_span(knots, degree, n, t);
  const std::vector<double> nz = basis_funs(knots, span, degree, t);
  Vec row = Vec::Zero(n);
  for (int j = 0; j <= degree; ++j) row[span - degree + j] = nz[j];
  return row;
}

Vec basis_derivative_row(const Vec& knots, int degree, double t) {
  check_domain(knots, t);
  const int n = control_count(knots, degree);
  Vec row = Vec::Zero(n);
  if (degree == 0) return row;
  const int span = find_span(knots, degree, n, t);
  // Degree p-1 functions B_{span-p+1..span}.
  const std::vector<double> lower = basis_funs(knots, span, degree - 1, t);
  auto b_lower = [&](int i) {
    const int j = i - (span - degree + 1);
    return (j >= 0 && j < degree) ? lower[j] : 0.0;
  };
  for (int i = span - degree; i <= span; ++i) {
    double v = 0.0;
    const double a = knots[i + degree] - knots[i];
    if (a > 0.0) v += b_lower(i) / a;
    const double b = knots[i + degree + 1] - knots[i + 1];
    if (b > 0.0) v -= b_lower(i + 1) / b;
    row[i] = degree * v;
  }
  return row;
}

Mat energy_matrix(int n_free, int degree, double duration) {
  const Vec u = knot_vector(n_free, degree, duration);
  const int n = control_count(u, degree);
  Mat m = Mat::Zero(n, n);
  for (int s = degree; s < n; ++s) {
    const double len = u[s + 1] - u[s];
    if (!(len > 0.0)) continue;
    const std::vector<Poly> polys = span_basis_polys(u, degree, s);
    std::vector<Poly> deriv(n);
    for (int i = s - degree; i <= s; ++i) deriv[i] = poly_derivative(polys[i]);
    for (int i = s - degree; i <= s; ++i) {
      for (int j = i; j <= s; ++j) {
        const double v = poly_integral(poly_mul(deriv[i], deriv[j]), len);
        m(i, j) += v;
        if (j != i) m(j, i) += v;
      }
    }
  }
  return m;
}

Mat derivative_matrix(int n_control, double h) {
  Mat a = Mat::Zero(n_control - 1, n_control);
  for (int i = 0; i + 1 < n_control; ++i) {
    a(i, i) = -1.0 / h;
    a(i, i + 1) = 1.0 / h;
  }
  return a;
}

Mat derivative_control_points(const Mat& c_full, double h) {
  return derivative_matrix(static_cast<int>(c_full.rows()), h) * c_full;
}

MinEnergyResult min_energy_init(const Mat& c_full, const Mat& energy) {
  const int n_ctrl = static_cast<int>(c_full.rows());
  if (energy.rows() != n_ctrl || energy.cols() != n_ctrl) {
    throw Error(ErrorCode::InvalidArgument, "energy matrix does not match control count");
  }
  const int n_free = n_ctrl - 4;
  const int last_free = kFirstFreeRow + n_free - 1;
  const std::vector<int> boundary{0, 1, n_ctrl - 2, n_ctrl - 1};
  Mat m_ff = energy.block(kFirstFreeRow, kFirstFreeRow, n_free, n_free);
  Mat m_fb(n_free, 4);
  Mat c_b(4, c_full.cols());
  for (int k = 0; k < 4; ++k) {
    m_fb.col(k) = energy.block(kFirstFreeRow, boundary[k], n_free, 1);
    c_b.row(k) = c_full.row(boundary[k]);
  }
  MinEnergyResult out;
  Eigen::LLT<Mat> llt(m_ff);
  if (llt.info() == Eigen::Success) {
    out.free_rows = llt.solve(-m_fb * c_b);
    if (out.free_rows.allFinite()) return out;
  }
  out.fallback = true;
  out.free_rows.resize(n_free, c_full.cols());
  const Eigen::RowVectorXd a = c_full.row(1);
  const Eigen::RowVectorXd b = c_full.row(n_ctrl - 2);
  for (int r = kFirstFreeRow; r <= last_free; ++r) {
    const double s = static_cast<double>(r - 1) / static_cast<double>(n_ctrl - 3);
    out.free_rows.row(r - kFirstFreeRow) = a + s * (b - a);
  }
  return out;
}

SplineSegment::SplineSegment(int degree, double duration, Mat c_full)
    : degree_(degree), duration_(duration), c_full_(std::move(c_full)) {
  const int n_free = static_cast<int>(c_full_.rows()) - 4;
  knots_ = knot_vector(n_free, degree, duration);
  h_ = duration / (n_free + 4 - degree);
}

Vec SplineSegment::evaluate(double t) const {
  return c_full_.transpose() * basis_row(knots_, degree_, t);
}

Vec SplineSegment::evaluate_velocity(double t) const {
  return c_full_.transpose() * basis_derivative_row(knots_, degree_, t);
}

double SplineSegment::energy() const {
  const Mat m = energy_matrix(n_free(), degree_, duration_);
  return (c_full_.transpose() * m * c_full_).trace();
}

}  // namespace fbplan
