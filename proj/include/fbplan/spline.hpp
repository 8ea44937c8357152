#pragma once

#include "fbplan/common.hpp"

namespace fbplan {

/// Clamped uniform knots: p+1 zeros, interior multiples of h = T/(N+4-p),
/// p+1 copies of T. Length N+p+5.
Vec knot_vector(int n_free, int degree, double duration);

/// Number of control points (N+4) implied by a knot vector and degree.
int control_count(const Vec& knots, int degree);

/// All B_{i,p}(t), i = 0..N+3. At t = T the left limit is used so the last
/// function equals 1. Throws OutOfDomain outside [0, T].
Vec basis_row(const Vec& knots, int degree, double t);

/// All dB_{i,p}/dt at t (exact for the clamped knot vector).
Vec basis_derivative_row(const Vec& knots, int degree, double t);

/// Gram matrix of basis derivatives, M_ij = int_0^T B_i' B_j' dt, integrated
/// exactly span by span.
Mat energy_matrix(int n_free, int degree, double duration);

/// (N+3) x (N+4) first-difference matrix scaled by 1/h.
Mat derivative_matrix(int n_control, double h);

/// G = derivative_matrix * C_full.
Mat derivative_control_points(const Mat& c_full, double h);

/// Control rows 0, 1, N+2, N+3 are fixed by the boundary state; 2..N+1 are free.
constexpr int kFirstFreeRow = 2;

struct MinEnergyResult {
  Mat free_rows;        // N x D
  bool fallback = false; // linear interpolation used because M_ff was singular
};

/// Minimizes tr(C^T M C) over the free rows with the boundary rows of `c_full`
/// held fixed.
MinEnergyResult min_energy_init(const Mat& c_full, const Mat& energy);

/// One trajectory piece q(t) = sum_i B_{i,p}(t) c_i for t in [0, T].
class SplineSegment {
 public:
  SplineSegment() = default;
  SplineSegment(int degree, double duration, Mat c_full);

  int degree() const { return degree_; }
  int n_free() const { return static_cast<int>(c_full_.rows()) - 4; }
  int dim() const { return static_cast<int>(c_full_.cols()); }
  double duration() const { return duration_; }
  double h() const { return h_; }
  const Vec& knots() const { return knots_; }
  const Mat& control_points() const { return c_full_; }

  Vec evaluate(double t) const;
  Vec evaluate_velocity(double t) const;
  /// tr(C^T M C).
  double energy() const;

 private:
  int degree_ = 3;
  double duration_ = 1.0;
  double h_ = 1.0;
  Vec knots_;
  Mat c_full_;
};

}  // namespace fbplan
