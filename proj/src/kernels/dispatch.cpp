#include <atomic>
#include <stdexcept>
#include <string>

#include "leapgen/kernels.hpp"

namespace leapgen::kernels {

namespace {

constexpr KernelTable kScalar{scalar::convolve_acc, scalar::weighted_abs_sum, scalar::dot};
#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2{avx2::convolve_acc, avx2::weighted_abs_sum, avx2::dot};
#endif
#if defined(__aarch64__)
constexpr KernelTable kNeon{neon::convolve_acc, neon::weighted_abs_sum, neon::dot};
#endif

Isa detect() {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#endif
#if defined(__aarch64__)
  return Isa::neon;
#endif
  return Isa::scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return kScalar;
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2:
      if (isa_available(Isa::avx2)) return kAvx2;
      break;
#endif
#if defined(__aarch64__)
    case Isa::neon:
      return kNeon;
#endif
    default:
      break;
  }
  throw std::runtime_error("kernel variant not available: " + std::string(isa_name(isa)));
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa))
    throw std::runtime_error("kernel variant not available: " + std::string(isa_name(isa)));
  active().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

}  // namespace leapgen::kernels
