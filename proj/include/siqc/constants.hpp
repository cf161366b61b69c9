#pragma once

#include <numbers>

namespace siqc {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PhysicalConstants {
  /// 29Si gyromagnetic ratio magnitude, rad s^-1 T^-1.
  double gyromagnetic_ratio = kTwoPi * 8.465e6;
  double mu0 = 1.25663706212e-6;   // T m / A
  double hbar = 1.054571817e-34;   // J s
  double kB = 1.380649e-23;        // J / K

  double mu0_over_4pi() const { return mu0 / (4.0 * std::numbers::pi); }
};

}  // namespace siqc
