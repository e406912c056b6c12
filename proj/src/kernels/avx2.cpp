#include <immintrin.h>

#include <cmath>

#include "leapgen/kernels.hpp"

namespace leapgen::kernels::avx2 {

namespace {
// lane-wise Neumaier step
inline void neumaier(__m256d& s, __m256d& c, __m256d x, __m256d absmask) {
  __m256d t = _mm256_add_pd(s, x);
  __m256d as = _mm256_and_pd(s, absmask);
  __m256d ax = _mm256_and_pd(x, absmask);
  __m256d big = _mm256_cmp_pd(as, ax, _CMP_GE_OQ);
  __m256d r1 = _mm256_add_pd(_mm256_sub_pd(s, t), x);
  __m256d r2 = _mm256_add_pd(_mm256_sub_pd(x, t), s);
  c = _mm256_add_pd(c, _mm256_blendv_pd(r2, r1, big));
  s = t;
}

inline double reduce(__m256d s, __m256d c, double tail_s, double tail_c) {
  alignas(32) double vs[4], vc[4];
  _mm256_store_pd(vs, s);
  _mm256_store_pd(vc, c);
  double acc = 0.0, comp = 0.0;
  auto add = [&](double x) {
    double t = acc + x;
    if (std::fabs(acc) >= std::fabs(x))
      comp += (acc - t) + x;
    else
      comp += (x - t) + acc;
    acc = t;
  };
  for (int i = 0; i < 4; ++i) add(vs[i]);
  add(tail_s);
  return acc + (comp + vc[0] + vc[1] + vc[2] + vc[3] + tail_c);
}
}  // namespace

void convolve_acc(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double aj = a[j];
    if (aj == 0.0) continue;
    double* o = out + j;
    const std::size_t m = n - j;
    const __m256d va = _mm256_set1_pd(aj);
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
      __m256d vo = _mm256_loadu_pd(o + i);
      vo = _mm256_fmadd_pd(va, _mm256_loadu_pd(b + i), vo);
      _mm256_storeu_pd(o + i, vo);
    }
    for (; i < m; ++i) o[i] = std::fma(aj, b[i], o[i]);
  }
}

double weighted_abs_sum(const double* p, const double* e, std::size_t n) {
  const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_mul_pd(_mm256_loadu_pd(p + i),
                              _mm256_and_pd(_mm256_loadu_pd(e + i), absmask));
    neumaier(s, c, x, absmask);
  }
  double ts = 0.0, tc = 0.0;
  for (; i < n; ++i) {
    double x = p[i] * std::fabs(e[i]);
    double t = ts + x;
    if (std::fabs(ts) >= std::fabs(x))
      tc += (ts - t) + x;
    else
      tc += (x - t) + ts;
    ts = t;
  }
  return reduce(s, c, ts, tc);
}

double dot(const double* a, const double* b, std::size_t n) {
  const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    neumaier(s, c, x, absmask);
  }
  double ts = 0.0, tc = 0.0;
  for (; i < n; ++i) {
    double x = a[i] * b[i];
    double t = ts + x;
    if (std::fabs(ts) >= std::fabs(x))
      tc += (ts - t) + x;
    else
      tc += (x - t) + ts;
    ts = t;
  }
  return reduce(s, c, ts, tc);
}

}  // namespace leapgen::kernels::avx2
