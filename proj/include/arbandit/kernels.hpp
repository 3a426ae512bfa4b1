#pragma once

// Data-parallel Gaussian kernels with a scalar reference and an AVX2 variant
// chosen at runtime. Both variants are compiled on x86-64; the AVX2 one is
// only dispatched to when the CPU reports avx2 and fma.

#include <span>
#include <string_view>

namespace arb::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);

// Best ISA this CPU supports.
Isa detected_isa();
// ISA used by the dispatching entry points. Defaults to detected_isa().
Isa active_isa();
// Throws std::invalid_argument if the ISA is not supported here.
void set_active_isa(Isa isa);

// sum_j w[j] * exp(-rate * (shift + width * u[j])^2)
double gauss_weighted_sum(std::span<const double> u, std::span<const double> w, double shift,
                          double width, double rate);

// out[j] = scale * exp(-rate * x[j]^2)
void gauss_eval(std::span<const double> x, double rate, double scale, std::span<double> out);

namespace scalar {
double gauss_weighted_sum(std::span<const double> u, std::span<const double> w, double shift,
                          double width, double rate);
void gauss_eval(std::span<const double> x, double rate, double scale, std::span<double> out);
}  // namespace scalar

namespace avx2 {
double gauss_weighted_sum(std::span<const double> u, std::span<const double> w, double shift,
                          double width, double rate);
void gauss_eval(std::span<const double> x, double rate, double scale, std::span<double> out);
}  // namespace avx2

}  // namespace arb::simd
