#include "kernels_impl.hpp"

#include <immintrin.h>

// Two complex doubles per __m256d, stored interleaved [re0 im0 re1 im1].

namespace cpt::kernels::detail {

namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

// Complex product a * v with a broadcast as (ar, ai).
inline __m256d cmul_broadcast(__m256d ar, __m256d ai, __m256d v) {
  const __m256d swapped = _mm256_permute_pd(v, 0b0101);
  return _mm256_fmaddsub_pd(ar, v, _mm256_mul_pd(ai, swapped));
}

inline cplx horizontal_sum(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  alignas(16) double out[2];
  _mm_store_pd(out, _mm_add_pd(lo, hi));
  return {out[0], out[1]};
}

}  // namespace

void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(as_doubles(x + i));
    const __m256d x1 = _mm256_loadu_pd(as_doubles(x + i + 2));
    const __m256d y0 = _mm256_loadu_pd(as_doubles(y + i));
    const __m256d y1 = _mm256_loadu_pd(as_doubles(y + i + 2));
    _mm256_storeu_pd(as_doubles(y + i), _mm256_add_pd(y0, cmul_broadcast(ar, ai, x0)));
    _mm256_storeu_pd(as_doubles(y + i + 2), _mm256_add_pd(y1, cmul_broadcast(ar, ai, x1)));
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = _mm256_loadu_pd(as_doubles(x + i));
    const __m256d y0 = _mm256_loadu_pd(as_doubles(y + i));
    _mm256_storeu_pd(as_doubles(y + i), _mm256_add_pd(y0, cmul_broadcast(ar, ai, x0)));
  }
  if (i < n) axpy_scalar(a, x + i, y + i, n - i);
}

cplx dotu_avx2(const cplx* x, const cplx* y, std::size_t n) {
  // Accumulate re(x)*y and im(x)*swap(y) separately; one addsub at the end
  // forms the complex products.
  __m256d acc_r0 = _mm256_setzero_pd(), acc_i0 = _mm256_setzero_pd();
  __m256d acc_r1 = _mm256_setzero_pd(), acc_i1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(as_doubles(x + i));
    const __m256d x1 = _mm256_loadu_pd(as_doubles(x + i + 2));
    const __m256d y0 = _mm256_loadu_pd(as_doubles(y + i));
    const __m256d y1 = _mm256_loadu_pd(as_doubles(y + i + 2));
    acc_r0 = _mm256_fmadd_pd(_mm256_movedup_pd(x0), y0, acc_r0);
    acc_i0 = _mm256_fmadd_pd(_mm256_permute_pd(x0, 0b1111), _mm256_permute_pd(y0, 0b0101), acc_i0);
    acc_r1 = _mm256_fmadd_pd(_mm256_movedup_pd(x1), y1, acc_r1);
    acc_i1 = _mm256_fmadd_pd(_mm256_permute_pd(x1, 0b1111), _mm256_permute_pd(y1, 0b0101), acc_i1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = _mm256_loadu_pd(as_doubles(x + i));
    const __m256d y0 = _mm256_loadu_pd(as_doubles(y + i));
    acc_r0 = _mm256_fmadd_pd(_mm256_movedup_pd(x0), y0, acc_r0);
    acc_i0 = _mm256_fmadd_pd(_mm256_permute_pd(x0, 0b1111), _mm256_permute_pd(y0, 0b0101), acc_i0);
  }
  const __m256d acc = _mm256_addsub_pd(_mm256_add_pd(acc_r0, acc_r1), _mm256_add_pd(acc_i0, acc_i1));
  cplx sum = horizontal_sum(acc);
  if (i < n) sum += dotu_scalar(x + i, y + i, n - i);
  return sum;
}

void gemv_avx2(const cplx* A, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dotu_avx2(A + r * cols, x, cols);
}

}  // namespace cpt::kernels::detail
