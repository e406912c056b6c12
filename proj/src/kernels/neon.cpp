#include <arm_neon.h>

#include <cmath>

#include "leapgen/kernels.hpp"

namespace leapgen::kernels::neon {

void convolve_acc(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double aj = a[j];
    if (aj == 0.0) continue;
    double* o = out + j;
    const std::size_t m = n - j;
    const float64x2_t va = vdupq_n_f64(aj);
    std::size_t i = 0;
    for (; i + 2 <= m; i += 2) vst1q_f64(o + i, vfmaq_f64(vld1q_f64(o + i), va, vld1q_f64(b + i)));
    for (; i < m; ++i) o[i] = std::fma(aj, b[i], o[i]);
  }
}

namespace {
inline double finish(float64x2_t s, float64x2_t c, double ts, double tc) {
  double acc = 0.0, comp = 0.0;
  double xs[3] = {vgetq_lane_f64(s, 0), vgetq_lane_f64(s, 1), ts};
  for (double x : xs) {
    double t = acc + x;
    if (std::fabs(acc) >= std::fabs(x))
      comp += (acc - t) + x;
    else
      comp += (x - t) + acc;
    acc = t;
  }
  return acc + (comp + vgetq_lane_f64(c, 0) + vgetq_lane_f64(c, 1) + tc);
}

inline void step(float64x2_t& s, float64x2_t& c, float64x2_t x) {
  float64x2_t t = vaddq_f64(s, x);
  uint64x2_t big = vcgeq_f64(vabsq_f64(s), vabsq_f64(x));
  float64x2_t r1 = vaddq_f64(vsubq_f64(s, t), x);
  float64x2_t r2 = vaddq_f64(vsubq_f64(x, t), s);
  c = vaddq_f64(c, vbslq_f64(big, r1, r2));
  s = t;
}

template <class F, class G>
double run(const double* a, const double* b, std::size_t n, F load, G one) {
  float64x2_t s = vdupq_n_f64(0.0), c = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) step(s, c, load(a + i, b + i));
  double ts = 0.0, tc = 0.0;
  for (; i < n; ++i) {
    double x = one(a[i], b[i]);
    double t = ts + x;
    if (std::fabs(ts) >= std::fabs(x))
      tc += (ts - t) + x;
    else
      tc += (x - t) + ts;
    ts = t;
  }
  return finish(s, c, ts, tc);
}
}  // namespace

double weighted_abs_sum(const double* p, const double* e, std::size_t n) {
  return run(p, e, n, [](const double* x, const double* y) {
    return vmulq_f64(vld1q_f64(x), vabsq_f64(vld1q_f64(y)));
  }, [](double x, double y) { return x * std::fabs(y); });
}

double dot(const double* a, const double* b, std::size_t n) {
  return run(a, b, n, [](const double* x, const double* y) {
    return vmulq_f64(vld1q_f64(x), vld1q_f64(y));
  }, [](double x, double y) { return x * y; });
}

}  // namespace leapgen::kernels::neon
