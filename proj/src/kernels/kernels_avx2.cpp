// Compiled with -mavx2 -mfma. Only reached through dispatch after a CPU check.

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "arbandit/kernels.hpp"

namespace arb::simd::avx2 {
namespace {

// exp(x) for x <= 0. Cody-Waite reduction x = n ln2 + r, |r| <= ln2/2, then a
// degree-13 Taylor polynomial (truncation < 2e-17 relative). Inputs below
// -708 flush to 0; scalar std::exp returns subnormals there, a difference far
// below any tolerance we use.
inline __m256d exp_nonpositive(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d lower = _mm256_set1_pd(-708.0);

  const __m256d underflow = _mm256_cmp_pd(x, lower, _CMP_LT_OQ);
  x = _mm256_max_pd(x, lower);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  static constexpr double kInvFact[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
      1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
      1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
      1.0,                1.0};
  __m256d p = _mm256_set1_pd(kInvFact[0]);
  for (std::size_t i = 1; i < sizeof(kInvFact) / sizeof(double); ++i)
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFact[i]));

  // 2^n via the exponent field; n is in [-1022, 0] after the clamp.
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i bits = _mm256_cvtepi32_epi64(n32);
  bits = _mm256_slli_epi64(_mm256_add_epi64(bits, _mm256_set1_epi64x(1023)), 52);
  const __m256d result = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
  return _mm256_andnot_pd(underflow, result);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double exp_tail(double x) { return x < -708.0 ? 0.0 : std::exp(x); }

}  // namespace

double gauss_weighted_sum(std::span<const double> u, std::span<const double> w, double shift,
                          double width, double rate) {
  const __m256d vshift = _mm256_set1_pd(shift);
  const __m256d vwidth = _mm256_set1_pd(width);
  const __m256d vneg_rate = _mm256_set1_pd(-rate);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= u.size(); j += 4) {
    // Same rounding sequence as the scalar reference: (-rate * y) * y.
    const __m256d y = _mm256_add_pd(vshift, _mm256_mul_pd(vwidth, _mm256_loadu_pd(u.data() + j)));
    const __m256d e = exp_nonpositive(_mm256_mul_pd(_mm256_mul_pd(vneg_rate, y), y));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w.data() + j), e, acc);
  }
  double sum = hsum(acc);
  for (; j < u.size(); ++j) {
    const double y = shift + width * u[j];
    sum += w[j] * exp_tail(-rate * y * y);
  }
  return sum;
}

void gauss_eval(std::span<const double> x, double rate, double scale, std::span<double> out) {
  const __m256d vneg_rate = _mm256_set1_pd(-rate);
  const __m256d vscale = _mm256_set1_pd(scale);
  std::size_t j = 0;
  for (; j + 4 <= x.size(); j += 4) {
    const __m256d v = _mm256_loadu_pd(x.data() + j);
    const __m256d e = exp_nonpositive(_mm256_mul_pd(_mm256_mul_pd(vneg_rate, v), v));
    _mm256_storeu_pd(out.data() + j, _mm256_mul_pd(vscale, e));
  }
  for (; j < x.size(); ++j) out[j] = scale * exp_tail(-rate * x[j] * x[j]);
}

}  // namespace arb::simd::avx2
