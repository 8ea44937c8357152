#include <atomic>
#include <cstdlib>
#include <cstring>

#include "fbplan/kernels.hpp"

namespace fbplan::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return avx2::compiled() && __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() {
  const char* env = std::getenv("FBPLAN_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
  return detect_isa();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

const char* to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa detect_isa() { return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::Avx2 && !cpu_has_avx2()) isa = Isa::Scalar;
  current().store(isa, std::memory_order_relaxed);
}

void sample_bilinear(const GridFields& grid, const double* xs, const double* ys, std::size_t n,
                     double* distance, double* grad_x, double* grad_y, std::uint8_t* oob) {
  if (active_isa() == Isa::Avx2) {
    avx2::sample_bilinear(grid, xs, ys, n, distance, grad_x, grad_y, oob);
  } else {
    scalar::sample_bilinear(grid, xs, ys, n, distance, grad_x, grad_y, oob);
  }
}

void hinge_penalty(const double* d, std::size_t n, double delta, double* phi, double* dphi) {
  if (active_isa() == Isa::Avx2) {
    avx2::hinge_penalty(d, n, delta, phi, dphi);
  } else {
    scalar::hinge_penalty(d, n, delta, phi, dphi);
  }
}

}  // namespace fbplan::kernels
