#pragma once

#include <complex>
#include <limits>
#include <string_view>

namespace qalab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Radius value encoding the degenerate cross domain (zw = 0).
inline constexpr double kInfiniteRadius = std::numeric_limits<double>::infinity();

/// Desk-scale cap on operator dimensions accepted by samplers and the CLI.
inline constexpr int kMaxDim = 64;

/// Cap on Laurent degrees accepted by the random samplers.
inline constexpr int kMaxLaurentDegree = 32;

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace qalab
