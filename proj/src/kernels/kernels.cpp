#include <atomic>
#include <stdexcept>

#include "arbandit/kernels.hpp"

namespace arb::simd {
namespace {

bool cpu_has_avx2() {
#if defined(ARB_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detected_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

Isa detected_isa() {
  static const Isa isa = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
  return isa;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) throw std::invalid_argument("ISA not supported on this CPU");
  active().store(isa, std::memory_order_relaxed);
}

#if !defined(ARB_HAVE_AVX2_TU)
namespace avx2 {
double gauss_weighted_sum(std::span<const double> u, std::span<const double> w, double shift,
                          double width, double rate) {
  return scalar::gauss_weighted_sum(u, w, shift, width, rate);
}
void gauss_eval(std::span<const double> x, double rate, double scale, std::span<double> out) {
  scalar::gauss_eval(x, rate, scale, out);
}
}  // namespace avx2
#endif

double gauss_weighted_sum(std::span<const double> u, std::span<const double> w, double shift,
                          double width, double rate) {
  if (active_isa() == Isa::avx2) return avx2::gauss_weighted_sum(u, w, shift, width, rate);
  return scalar::gauss_weighted_sum(u, w, shift, width, rate);
}

void gauss_eval(std::span<const double> x, double rate, double scale, std::span<double> out) {
  if (active_isa() == Isa::avx2) return avx2::gauss_eval(x, rate, scale, out);
  scalar::gauss_eval(x, rate, scale, out);
}

}  // namespace arb::simd
