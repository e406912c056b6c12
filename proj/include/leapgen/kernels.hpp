#pragma once

#include <cstddef>
#include <string_view>

// Dense double kernels used by the float analytics path.
// Each kernel has a scalar reference and optional SIMD variants; the active
// variant is picked once at startup from the CPU feature flags.
namespace leapgen::kernels {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  // out[i] += sum_{j<=i} a[j] * b[i-j] for i < n
  void (*convolve_acc)(const double* a, const double* b, double* out, std::size_t n);
  // sum_i p[i] * |e[i]|, compensated
  double (*weighted_abs_sum)(const double* p, const double* e, std::size_t n);
  // sum_i a[i] * b[i], compensated
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const KernelTable& table_for(Isa isa);  // throws if isa unavailable here
bool isa_available(Isa isa);
Isa active_isa();
void set_active_isa(Isa isa);  // tests / benchmarking
std::string_view isa_name(Isa isa);

inline void convolve_acc(const double* a, const double* b, double* out, std::size_t n) {
  table_for(active_isa()).convolve_acc(a, b, out, n);
}
inline double weighted_abs_sum(const double* p, const double* e, std::size_t n) {
  return table_for(active_isa()).weighted_abs_sum(p, e, n);
}
inline double dot(const double* a, const double* b, std::size_t n) {
  return table_for(active_isa()).dot(a, b, n);
}

namespace scalar {
void convolve_acc(const double* a, const double* b, double* out, std::size_t n);
double weighted_abs_sum(const double* p, const double* e, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void convolve_acc(const double* a, const double* b, double* out, std::size_t n);
double weighted_abs_sum(const double* p, const double* e, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
void convolve_acc(const double* a, const double* b, double* out, std::size_t n);
double weighted_abs_sum(const double* p, const double* e, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
}  // namespace neon
#endif

}  // namespace leapgen::kernels
