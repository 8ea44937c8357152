#include <limits>
#include <random>

#include "doctest.h"
#include "fbplan/qp.hpp"

using namespace fbplan;

namespace {

double objective(const QpProblem& qp, const Vec& z) { return 0.5 * z.dot(qp.G * z) + qp.g.dot(z); }

/// Enumerates active sets; the best feasible KKT point is the optimum.
double brute_force_optimum(const QpProblem& qp) {
  const int n = static_cast<int>(qp.g.size());
  const int m = static_cast<int>(qp.b.size());
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<int> active;
    for (int k = 0; k < m; ++k) {
      if (mask & (1 << k)) active.push_back(k);
    }
    if (static_cast<int>(active.size()) > n) continue;
    const int a = static_cast<int>(active.size());
    Mat kkt = Mat::Zero(n + a, n + a);
    Vec rhs(n + a);
    kkt.topLeftCorner(n, n) = qp.G;
    rhs.head(n) = -qp.g;
    for (int r = 0; r < a; ++r) {
      kkt.block(0, n + r, n, 1) = qp.A.row(active[r]).transpose();
      kkt.block(n + r, 0, 1, n) = qp.A.row(active[r]);
      rhs[n + r] = qp.b[active[r]];
    }
    Eigen::FullPivLU<Mat> lu(kkt);
    if (!lu.isInvertible()) continue;
    const Vec sol = lu.solve(rhs);
    const Vec z = sol.head(n);
    if (((qp.A * z - qp.b).array() > 1e-9).any()) continue;
    if ((sol.tail(a).array() < -1e-9).any()) continue;
    best = std::min(best, objective(qp, z));
  }
  return best;
}

}  // namespace

TEST_SUITE("qp") {

TEST_CASE("unconstrained minimum") {
  QpProblem qp;
  qp.G = Mat::Identity(2, 2) * 2.0;
  qp.g = Vec2(-2.0, 4.0);
  qp.A = Mat::Zero(0, 2);
  qp.b = Vec::Zero(0);
  const QpResult r = solve_qp(qp, Vec::Zero(2));
  CHECK(r.status == QpStatus::Optimal);
  CHECK((r.z - Vec2(1.0, -2.0)).norm() < 1e-12);
}

TEST_CASE("active bound and its multiplier") {
  QpProblem qp;
  qp.G = Mat::Identity(1, 1);
  qp.g = Vec::Constant(1, -3.0);  // unconstrained optimum at 3
  qp.A = Mat::Ones(1, 1);
  qp.b = Vec::Ones(1);  // z <= 1
  const QpResult r = solve_qp(qp, Vec::Zero(1));
  CHECK(r.z[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.multipliers[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("random problems match active-set enumeration") {
  std::mt19937_64 rng(70);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> slack(0.1, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3, m = 7;
    const Mat r = Mat::NullaryExpr(n, n, [&] { return n01(rng); });
    QpProblem qp;
    qp.G = r * r.transpose() + 0.1 * Mat::Identity(n, n);
    qp.g = Vec::NullaryExpr(n, [&] { return 3.0 * n01(rng); });
    qp.A = Mat::NullaryExpr(m, n, [&] { return n01(rng); });
    qp.b = Vec::NullaryExpr(m, [&] { return slack(rng); });  // z = 0 is strictly feasible
    const QpResult res = solve_qp(qp, Vec::Zero(n));
    CHECK(res.status == QpStatus::Optimal);
    CHECK(((qp.A * res.z - qp.b).array() <= 1e-9).all());
    CHECK(objective(qp, res.z) == doctest::Approx(brute_force_optimum(qp)).epsilon(1e-9));
  }
}

TEST_CASE("indefinite Hessian is rejected") {
  QpProblem qp;
  qp.G = Vec2(1.0, -1.0).asDiagonal();
  qp.g = Vec::Zero(2);
  qp.A = Mat::Zero(0, 2);
  qp.b = Vec::Zero(0);
  try {
    solve_qp(qp, Vec::Zero(2));
    FAIL("accepted an indefinite G");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

}  // TEST_SUITE
