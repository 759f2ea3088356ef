#pragma once

#include <string_view>

namespace its::simd {

enum class Backend { scalar, avx2 };

/// True when the library was built with the AVX2 kernels and the CPU reports
/// both AVX2 and FMA.
bool avx2_supported();

/// Backend used by its::simd::kernels(). Initialised from the ITS_SIMD
/// environment variable ("scalar" or "avx2") when set, otherwise the widest
/// supported backend.
Backend active_backend();

/// Throws ConfigError when the requested backend is not available.
void set_backend(Backend backend);

std::string_view backend_name(Backend backend);

} // namespace its::simd
