#include "avx2.hpp"

#include <immintrin.h>

namespace armimo::kernels::avx2 {
namespace {

// Horizontal sums of a [r0, i0, r1, i1] register.
inline double sum_all(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);  // [r0 + r1, i0 + i1]
  return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

// Returns [sum of even lanes, sum of odd lanes].
inline void sum_pairs(__m256d v, double& even, double& odd) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  even = _mm_cvtsd_f64(s);
  odd = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

}  // namespace

void dotc(const double* x, const double* y, std::size_t n, double* out) {
  __m256d prod = _mm256_setzero_pd();   // [xr*yr, xi*yi]
  __m256d cross = _mm256_setzero_pd();  // [xr*yi, xi*yr]
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(x + 2 * i);
    const __m256d yv = _mm256_loadu_pd(y + 2 * i);
    prod = _mm256_fmadd_pd(xv, yv, prod);
    cross = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), cross);
  }
  double re = sum_all(prod);
  double c_even = 0.0, c_odd = 0.0;
  sum_pairs(cross, c_even, c_odd);
  double im = c_even - c_odd;
  for (; i < n; ++i) {
    const double xr = x[2 * i], xi = x[2 * i + 1];
    const double yr = y[2 * i], yi = y[2 * i + 1];
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  out[0] = re;
  out[1] = im;
}

void dotu(const double* x, const double* y, std::size_t n, double* out) {
  __m256d prod = _mm256_setzero_pd();
  __m256d cross = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(x + 2 * i);
    const __m256d yv = _mm256_loadu_pd(y + 2 * i);
    prod = _mm256_fmadd_pd(xv, yv, prod);
    cross = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), cross);
  }
  double p_even = 0.0, p_odd = 0.0, c_even = 0.0, c_odd = 0.0;
  sum_pairs(prod, p_even, p_odd);
  sum_pairs(cross, c_even, c_odd);
  double re = p_even - p_odd;
  double im = c_even + c_odd;
  for (; i < n; ++i) {
    const double xr = x[2 * i], xi = x[2 * i + 1];
    const double yr = y[2 * i], yi = y[2 * i + 1];
    re += xr * yr - xi * yi;
    im += xr * yi + xi * yr;
  }
  out[0] = re;
  out[1] = im;
}

double squared_norm(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(x + 2 * i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  double total = sum_all(acc);
  for (; i < n; ++i) total += x[2 * i] * x[2 * i] + x[2 * i + 1] * x[2 * i + 1];
  return total;
}

void her_rank1(double* a, std::size_t n, double w, const double* v) {
  for (std::size_t j = 0; j < n; ++j) {
    const double sr = w * v[2 * j];
    const double si = -w * v[2 * j + 1];
    const __m256d sre = _mm256_set1_pd(sr);
    const __m256d sim = _mm256_set1_pd(si);
    double* col = a + 2 * j * n;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
      const __m256d vv = _mm256_loadu_pd(v + 2 * i);
      const __m256d swapped = _mm256_permute_pd(vv, 0b0101);
      const __m256d prod = _mm256_fmaddsub_pd(vv, sre, _mm256_mul_pd(swapped, sim));
      _mm256_storeu_pd(col + 2 * i, _mm256_add_pd(_mm256_loadu_pd(col + 2 * i), prod));
    }
    for (; i < n; ++i) {
      const double vr = v[2 * i], vi = v[2 * i + 1];
      col[2 * i] += vr * sr - vi * si;
      col[2 * i + 1] += vr * si + vi * sr;
    }
  }
}

void scale_add(double* out, double scale_prev, const double* prev, double scale_noise,
               const double* noise, std::size_t n) {
  const __m256d p = _mm256_set1_pd(scale_prev);
  const __m256d q = _mm256_set1_pd(scale_noise);
  const std::size_t len = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d r = _mm256_fmadd_pd(p, _mm256_loadu_pd(prev + i),
                                      _mm256_mul_pd(q, _mm256_loadu_pd(noise + i)));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < len; ++i) out[i] = scale_prev * prev[i] + scale_noise * noise[i];
}

}  // namespace armimo::kernels::avx2
