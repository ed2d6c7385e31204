#pragma once

#include <cstddef>

namespace msent {

// Numerical tolerances shared by every module. Tests and validation code
// read these values rather than hard-coding their own.
struct Tolerances {
  static constexpr double kNorm = 1e-10;
  static constexpr double kTrace = 1e-10;
  static constexpr double kHermitian = 1e-8;
  static constexpr double kPositivitySlack = -1e-9;
  static constexpr double kUnitary = 1e-8;
  static constexpr double kPovm = 1e-10;
  // Outcomes below this probability carry no post-measurement state.
  static constexpr double kNullProbability = 1e-14;
};

// Largest total Hilbert-space dimension the dense backend accepts.
inline constexpr std::size_t kDenseDimensionCap = std::size_t{1} << 22;
// Density operators store dim^2 entries; cap them separately.
inline constexpr std::size_t kDenseDensityDimensionCap = std::size_t{1} << 12;

}  // namespace msent
