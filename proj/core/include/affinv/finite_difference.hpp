#pragma once

#include <functional>

namespace affinv {

inline constexpr double kFdStepCoarse = 1e-4;
inline constexpr double kFdStepFine = 1e-5;

/// Central difference at step h.
inline double central_difference(const std::function<double(double)>& f, double h) {
  return (f(h) - f(-h)) / (2.0 * h);
}

/// Two-step Richardson extrapolation of the central difference; kills the
/// leading h^2 error term.
inline double richardson_derivative(const std::function<double(double)>& f,
                                    double h1 = kFdStepCoarse,
                                    double h2 = kFdStepFine) {
  const double d1 = central_difference(f, h1);
  const double d2 = central_difference(f, h2);
  return (h1 * h1 * d2 - h2 * h2 * d1) / (h1 * h1 - h2 * h2);
}

}  // namespace affinv
