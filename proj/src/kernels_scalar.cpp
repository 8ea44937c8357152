#include <algorithm>
#include <cmath>

#include "fbplan/kernels.hpp"

namespace fbplan::kernels::scalar {

void sample_bilinear(const GridFields& g, const double* xs, const double* ys, std::size_t n,
                     double* distance, double* grad_x, double* grad_y, std::uint8_t* oob) {
  const double max_fx = static_cast<double>(g.nx - 1);
  const double max_fy = static_cast<double>(g.ny - 1);
  for (std::size_t k = 0; k < n; ++k) {
    double fx = (xs[k] - g.origin_x) / g.resolution - 0.5;
    double fy = (ys[k] - g.origin_y) / g.resolution - 0.5;
    const bool outside = !(fx >= 0.0 && fx <= max_fx && fy >= 0.0 && fy <= max_fy);
    fx = std::min(std::max(fx, 0.0), max_fx);
    fy = std::min(std::max(fy, 0.0), max_fy);
    const double flx = std::min(std::floor(fx), max_fx - 1.0);
    const double fly = std::min(std::floor(fy), max_fy - 1.0);
    const double tx = fx - flx;
    const double ty = fy - fly;
    const int i00 = static_cast<int>(fly) * g.nx + static_cast<int>(flx);
    const int i10 = i00 + 1;
    const int i01 = i00 + g.nx;
    const int i11 = i01 + 1;
    const double w00 = (1.0 - tx) * (1.0 - ty);
    const double w10 = tx * (1.0 - ty);
    const double w01 = (1.0 - tx) * ty;
    const double w11 = tx * ty;
    distance[k] = w00 * g.distance[i00] + w10 * g.distance[i10] + w01 * g.distance[i01] + w11 * g.distance[i11];
    grad_x[k] = w00 * g.grad_x[i00] + w10 * g.grad_x[i10] + w01 * g.grad_x[i01] + w11 * g.grad_x[i11];
    grad_y[k] = w00 * g.grad_y[i00] + w10 * g.grad_y[i10] + w01 * g.grad_y[i01] + w11 * g.grad_y[i11];
    oob[k] = outside ? 1 : 0;
  }
}

void hinge_penalty(const double* d, std::size_t n, double delta, double* phi, double* dphi) {
  const double half_inv = 0.5 / delta;
  const double inv = 1.0 / delta;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = d[k] - delta;
    if (d[k] < delta) {
      phi[k] = r * r * half_inv;
      dphi[k] = r * inv;
    } else {
      phi[k] = 0.0;
      dphi[k] = 0.0;
    }
  }
}

}  // namespace fbplan::kernels::scalar
