#include "its/simd/dispatch.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "its/errors.hpp"
#include "its/simd/kernels.hpp"
#include "simd/tables.hpp"

namespace its::simd {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  const bool avx2 = avx2_supported();
  if (const char* env = std::getenv("ITS_SIMD")) {
    const std::string value(env);
    if (value == "scalar") return Backend::scalar;
    if (value == "avx2" && avx2) return Backend::avx2;
  }
  return avx2 ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

} // namespace

bool avx2_supported() {
  static const bool supported = detail::avx2_table() != nullptr && cpu_has_avx2();
  return supported;
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (backend == Backend::avx2 && !avx2_supported()) {
    throw ConfigError("AVX2 backend is not available on this machine");
  }
  current().store(backend, std::memory_order_relaxed);
}

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable& kernels(Backend backend) {
  if (backend == Backend::avx2) {
    if (!avx2_supported()) throw ConfigError("AVX2 backend is not available on this machine");
    return *detail::avx2_table();
  }
  return detail::scalar_table();
}

const KernelTable& kernels() { return kernels(active_backend()); }

} // namespace its::simd

#if !defined(ITS_HAVE_AVX2)
namespace its::simd::detail {
const KernelTable* avx2_table() { return nullptr; }
} // namespace its::simd::detail
#endif
