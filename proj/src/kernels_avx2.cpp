// Compiled with -mavx2 (no FMA) and -ffp-contract=off so every lane performs
// exactly the scalar sequence of roundings.

#include <immintrin.h>

#include "fbplan/kernels.hpp"

namespace fbplan::kernels::avx2 {

bool compiled() { return true; }

void sample_bilinear(const GridFields& g, const double* xs, const double* ys, std::size_t n,
                     double* distance, double* grad_x, double* grad_y, std::uint8_t* oob) {
  const double max_fx_s = static_cast<double>(g.nx - 1);
  const double max_fy_s = static_cast<double>(g.ny - 1);
  const __m256d ox = _mm256_set1_pd(g.origin_x);
  const __m256d oy = _mm256_set1_pd(g.origin_y);
  const __m256d res = _mm256_set1_pd(g.resolution);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d max_fx = _mm256_set1_pd(max_fx_s);
  const __m256d max_fy = _mm256_set1_pd(max_fy_s);
  const __m256d max_flx = _mm256_set1_pd(max_fx_s - 1.0);
  const __m256d max_fly = _mm256_set1_pd(max_fy_s - 1.0);
  const __m128i nx = _mm_set1_epi32(g.nx);
  const __m128i one_i = _mm_set1_epi32(1);

  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d fx = _mm256_sub_pd(_mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(xs + k), ox), res), half);
    __m256d fy = _mm256_sub_pd(_mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(ys + k), oy), res), half);
    const __m256d inside = _mm256_and_pd(
        _mm256_and_pd(_mm256_cmp_pd(fx, zero, _CMP_GE_OQ), _mm256_cmp_pd(fx, max_fx, _CMP_LE_OQ)),
        _mm256_and_pd(_mm256_cmp_pd(fy, zero, _CMP_GE_OQ), _mm256_cmp_pd(fy, max_fy, _CMP_LE_OQ)));
    const int inside_mask = _mm256_movemask_pd(inside);
    fx = _mm256_min_pd(_mm256_max_pd(fx, zero), max_fx);
    fy = _mm256_min_pd(_mm256_max_pd(fy, zero), max_fy);
    const __m256d flx = _mm256_min_pd(_mm256_floor_pd(fx), max_flx);
    const __m256d fly = _mm256_min_pd(_mm256_floor_pd(fy), max_fly);
    const __m256d tx = _mm256_sub_pd(fx, flx);
    const __m256d ty = _mm256_sub_pd(fy, fly);

    const __m128i ix = _mm256_cvttpd_epi32(flx);
    const __m128i iy = _mm256_cvttpd_epi32(fly);
    const __m128i i00 = _mm_add_epi32(_mm_mullo_epi32(iy, nx), ix);
    const __m128i i10 = _mm_add_epi32(i00, one_i);
    const __m128i i01 = _mm_add_epi32(i00, nx);
    const __m128i i11 = _mm_add_epi32(i01, one_i);

    const __m256d ux = _mm256_sub_pd(one, tx);
    const __m256d uy = _mm256_sub_pd(one, ty);
    const __m256d w00 = _mm256_mul_pd(ux, uy);
    const __m256d w10 = _mm256_mul_pd(tx, uy);
    const __m256d w01 = _mm256_mul_pd(ux, ty);
    const __m256d w11 = _mm256_mul_pd(tx, ty);

    auto blend = [&](const double* field) {
      __m256d acc = _mm256_mul_pd(w00, _mm256_i32gather_pd(field, i00, 8));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(w10, _mm256_i32gather_pd(field, i10, 8)));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(w01, _mm256_i32gather_pd(field, i01, 8)));
      return _mm256_add_pd(acc, _mm256_mul_pd(w11, _mm256_i32gather_pd(field, i11, 8)));
    };
    _mm256_storeu_pd(distance + k, blend(g.distance));
    _mm256_storeu_pd(grad_x + k, blend(g.grad_x));
    _mm256_storeu_pd(grad_y + k, blend(g.grad_y));
    for (int lane = 0; lane < 4; ++lane) oob[k + lane] = ((inside_mask >> lane) & 1) ? 0 : 1;
  }
  if (k < n) scalar::sample_bilinear(g, xs + k, ys + k, n - k, distance + k, grad_x + k, grad_y + k, oob + k);
}

void hinge_penalty(const double* d, std::size_t n, double delta, double* phi, double* dphi) {
  const __m256d dv = _mm256_set1_pd(delta);
  const __m256d half_inv = _mm256_set1_pd(0.5 / delta);
  const __m256d inv = _mm256_set1_pd(1.0 / delta);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d x = _mm256_loadu_pd(d + k);
    const __m256d r = _mm256_sub_pd(x, dv);
    const __m256d active = _mm256_cmp_pd(x, dv, _CMP_LT_OQ);
    _mm256_storeu_pd(phi + k, _mm256_and_pd(active, _mm256_mul_pd(_mm256_mul_pd(r, r), half_inv)));
    _mm256_storeu_pd(dphi + k, _mm256_and_pd(active, _mm256_mul_pd(r, inv)));
  }
  if (k < n) scalar::hinge_penalty(d + k, n - k, delta, phi + k, dphi + k);
}

}  // namespace fbplan::kernels::avx2
