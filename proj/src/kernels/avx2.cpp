// Compiled with -mavx2 -mfma. Nothing in here may run before dispatch has
// confirmed CPU support.

#include "msent/kernels/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace msent::kernels {
namespace {

inline const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// a * x for two packed complex numbers, a broadcast as (ar, ai).
inline __m256d cmul(__m256d ar, __m256d ai, __m256d x) {
  const __m256d xs = _mm256_permute_pd(x, 0b0101);
  return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, xs));
}

cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
  __m256d rr = _mm256_setzero_pd();  // (xr*yr, xi*yi)
  __m256d ri = _mm256_setzero_pd();  // (xr*yi, xi*yr)
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(raw(x + i));
    const __m256d vy = _mm256_loadu_pd(raw(y + i));
    rr = _mm256_fmadd_pd(vx, vy, rr);
    ri = _mm256_fmadd_pd(vx, _mm256_permute_pd(vy, 0b0101), ri);
  }
  alignas(32) double t[4];
  _mm256_store_pd(t, ri);
  double re = hsum(rr);
  double im = (t[0] - t[1]) + (t[2] - t[3]);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(raw(x + i));
    const __m256d vy = _mm256_loadu_pd(raw(y + i));
    _mm256_storeu_pd(raw(y + i), _mm256_add_pd(vy, cmul(ar, ai, vx)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale_avx2(cplx a, cplx* x, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(raw(x + i));
    _mm256_storeu_pd(raw(x + i), cmul(ar, ai, vx));
  }
  for (; i < n; ++i) x[i] *= a;
}

double norm_sq_avx2(const cplx* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(raw(x + i));
    acc = _mm256_fmadd_pd(vx, vx, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

double abs_diff_sum_avx2(const double* p, const double* q, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + i), _mm256_loadu_pd(q + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(p[i] - q[i]);
  return s;
}

void gemm_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
               std::size_t n) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    cplx* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const cplx aip = a[i * k + p];
      if (aip == cplx{}) continue;
      axpy_avx2(aip, b + p * n, crow, n);
    }
  }
}

}  // namespace

const KernelTable& avx2_table_unchecked() {
  static const KernelTable table{"avx2",       dotc_avx2,         axpy_avx2, scale_avx2,
                                 norm_sq_avx2, abs_diff_sum_avx2, gemm_avx2};
  return table;
}

}  // namespace msent::kernels
