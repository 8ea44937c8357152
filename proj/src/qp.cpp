#include "fbplan/qp.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cstdint>
#include <vector>

namespace fbplan {

QpResult solve_qp(const QpProblem& qp, const Vec& z0, int max_iterations) {
  const Eigen::Index n = qp.G.rows();
  const Eigen::Index m = qp.A.rows();
  if (qp.G.cols() != n || qp.g.size() != n || z0.size() != n || (m > 0 && qp.A.cols() != n) || qp.b.size() != m) {
    throw Error(ErrorCode::InvalidArgument, "QP dimensions disagree");
  }
  Eigen::LLT<Mat> llt(qp.G);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "QP Hessian is not positive definite");
  if (max_iterations <= 0) max_iterations = static_cast<int>(5 * (n + m) + 20);

  const Mat y = m > 0 ? Mat(llt.solve(qp.A.transpose())) : Mat(n, 0);  // G^-1 A'
  QpResult res;
  res.z = z0;
  res.multipliers = Vec::Zero(m);
  std::vector<int> working;
  std::vector<std::uint8_t> in_working(m, 0);

  for (int it = 0; it < max_iterations; ++it) {
    res.iterations = it + 1;
    const Vec q = qp.G * res.z + qp.g;
    const Vec gq = llt.solve(q);
    const Eigen::Index w = static_cast<Eigen::Index>(working.size());
    Vec lambda(w);
    Vec p = -gq;
    if (w > 0) {
      Mat s(w, w);
      Vec rhs(w);
      for (Eigen::Index a = 0; a < w; ++a) {
        rhs[a] = -qp.A.row(working[a]).dot(gq);
        for (Eigen::Index c = 0; c < w; ++c) s(a, c) = qp.A.row(working[a]).dot(y.col(working[c]));
      }
      lambda = s.ldlt().solve(rhs);
      for (Eigen::Index a = 0; a < w; ++a) p -= y.col(working[a]) * lambda[a];
    }

    const double scale = 1.0 + res.z.lpNorm<Eigen::Infinity>();
    if (p.lpNorm<Eigen::Infinity>() <= 1e-12 * scale) {
      Eigen::Index worst = -1;
      double most_negative = -1e-12;
      for (Eigen::Index a = 0; a < w; ++a) {
        if (lambda[a] < most_negative) {
          most_negative = lambda[a];
          worst = a;
        }
      }
      if (worst < 0) {
        res.multipliers.setZero();
        for (Eigen::Index a = 0; a < w; ++a) res.multipliers[working[a]] = lambda[a];
        res.status = QpStatus::Optimal;
        return res;
      }
      in_working[working[worst]] = 0;
      working.erase(working.begin() + worst);
      continue;
    }

    double alpha = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (in_working[i]) continue;
      const double ap = qp.A.row(i).dot(p);
      if (ap <= 1e-14 * scale) continue;
      const double slack = std::max(0.0, qp.b[i] - qp.A.row(i).dot(res.z));
      const double step = slack / ap;
      if (step < alpha) {
        alpha = step;
        blocking = i;
      }
    }
    res.z += alpha * p;
    if (blocking >= 0) {
      working.push_back(static_cast<int>(blocking));
      in_working[blocking] = 1;
    }
  }
  res.status = QpStatus::IterationLimit;
  return res;
}

}  // namespace fbplan
