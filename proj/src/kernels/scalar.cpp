#include <cmath>

#include "leapgen/kernels.hpp"

namespace leapgen::kernels::scalar {

void convolve_acc(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double aj = a[j];
    if (aj == 0.0) continue;
    double* o = out + j;
    const std::size_t m = n - j;
    for (std::size_t i = 0; i < m; ++i) o[i] += aj * b[i];
  }
}

// Neumaier summation
double weighted_abs_sum(const double* p, const double* e, std::size_t n) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = p[i] * std::fabs(e[i]);
    double t = s + x;
    if (std::fabs(s) >= std::fabs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  return s + c;
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = a[i] * b[i];
    double t = s + x;
    if (std::fabs(s) >= std::fabs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  return s + c;
}

}  // namespace leapgen::kernels::scalar
