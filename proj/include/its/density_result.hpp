#pragma once

#include <cstddef>
#include <string_view>

namespace its {

enum class Method { integral, series, closed_form };

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::integral: return "integral";
    case Method::series: return "series";
    case Method::closed_form: return "closed_form";
  }
  return "unknown";
}

struct DensityResult {
  double value = 0.0;
  double error_estimate = 0.0;
  Method method = Method::integral;
  /// Series terms summed, or quadrature panels used.
  std::size_t terms_or_panels = 0;
  bool converged = false;
};

} // namespace its
