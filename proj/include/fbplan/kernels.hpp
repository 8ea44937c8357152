#pragma once

// Data-parallel inner loops with a scalar reference and an AVX2 variant.
// The variant is picked once at runtime from CPUID; FBPLAN_SIMD=scalar|avx2
// overrides the choice. Both variants perform the same floating-point
// operations in the same order, so their outputs are bit-identical.

#include <cstddef>
#include <cstdint>

namespace fbplan::kernels {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);

/// Best variant the running CPU supports (ignores the override).
Isa detect_isa();
/// Variant currently used by the dispatching entry points.
Isa active_isa();
/// Forces a variant. Requesting Avx2 on a CPU without it falls back to Scalar.
void set_isa(Isa isa);

/// Cell-centred 2-D grid of three fields, row-major with x fastest
/// (index = iy * nx + ix). Cell (ix, iy) centre is
/// origin + (ix + 0.5, iy + 0.5) * resolution.
struct GridFields {
  const double* distance = nullptr;
  const double* grad_x = nullptr;
  const double* grad_y = nullptr;
  int nx = 0;
  int ny = 0;
  double origin_x = 0.0;
  double origin_y = 0.0;
  double resolution = 1.0;
};

/// Bilinear interpolation of all three fields at n points. Points outside the
/// span of cell centres are clamped onto it and flagged with oob[k] = 1.
void sample_bilinear(const GridFields& grid, const double* xs, const double* ys, std::size_t n,
                     double* distance, double* grad_x, double* grad_y, std::uint8_t* oob);

/// Quadratic hinge penalty: for d < delta, phi = (d - delta)^2 / (2 delta) and
/// dphi = (d - delta) / delta; zero otherwise.
void hinge_penalty(const double* d, std::size_t n, double delta, double* phi, double* dphi);

namespace scalar {
void sample_bilinear(const GridFields& grid, const double* xs, const double* ys, std::size_t n,
                     double* distance, double* grad_x, double* grad_y, std::uint8_t* oob);
void hinge_penalty(const double* d, std::size_t n, double delta, double* phi, double* dphi);
}  // namespace scalar

namespace avx2 {
/// True when this build contains the AVX2 translation unit.
bool compiled();
void sample_bilinear(const GridFields& grid, const double* xs, const double* ys, std::size_t n,
                     double* distance, double* grad_x, double* grad_y, std::uint8_t* oob);
void hinge_penalty(const double* d, std::size_t n, double delta, double* phi, double* dphi);
}  // namespace avx2

}  // namespace fbplan::kernels
