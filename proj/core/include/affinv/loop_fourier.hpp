#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "affinv/orthogonal_algebra.hpp"

namespace affinv {

/// Smooth loop with values in an OrthogonalAlgebra, stored as a banded
/// Fourier series X(x) = sum_{|n| <= band} X_n e^{inx} where each X_n is a
/// coordinate vector in the algebra basis. Modes outside the band are
/// implicitly zero. Values are immutable.
class LoopElement {
 public:
  /// modes holds 2*band+1 coefficient vectors for n = -band..band.
  LoopElement(AlgebraPtr algebra, std::vector<Eigen::VectorXcd> modes);

  static LoopElement zero(const AlgebraPtr& algebra);
  static LoopElement constant(const AlgebraElement& value);
  static LoopElement single_mode(const AlgebraElement& coeff, int n);

  const AlgebraPtr& algebra() const { return algebra_; }
  int band() const { return band_; }

  /// Coefficient of e^{inx}; zero vector outside the band.
  Eigen::VectorXcd mode(int n) const;

 private:
  AlgebraPtr algebra_;
  int band_;
  std::vector<Eigen::VectorXcd> modes_;
};

/// Pointwise bracket [X(x), Y(x)] as an exact Fourier convolution; the band
/// grows to band(X) + band(Y), nothing is truncated.
LoopElement loop_bracket(const LoopElement& x, const LoopElement& y);

/// d/dx in Fourier coordinates: mode n picks up a factor i n.
LoopElement loop_derivative(const LoopElement& x);

/// Integral of the pointwise form over the circle,
/// 2 pi sum_n (xi_{-n}, X_n). Complex bilinear and symmetric.
Complex loop_pair(const LoopElement& xi, const LoopElement& x);

/// The central 2-cocycle: integral of (X, Y') over the circle.
Complex central_cocycle(const LoopElement& x, const LoopElement& y);

/// Copy with all modes above the requested band dropped. Lossy by intent;
/// the arithmetic operations above never truncate on their own.
LoopElement truncate(const LoopElement& x, int band);

/// Samples X(x_j) at x_j = 2 pi j / grid_size as coordinate vectors.
/// Requires grid_size > 2 band (throws AliasError otherwise).
std::vector<Eigen::VectorXcd> to_grid(const LoopElement& x, int grid_size);

/// Inverse of to_grid: DFT of the samples, band floor((M-1)/2), modes of
/// magnitude below 1e-13 discarded and the band trimmed accordingly.
LoopElement from_grid(const std::vector<Eigen::VectorXcd>& samples,
                      const AlgebraPtr& algebra);

/// Samples X(x_j) in the matrix realization.
std::vector<Eigen::MatrixXcd> matrix_grid(const LoopElement& x, int grid_size);

/// Projects matrix samples onto the algebra basis per sample, then from_grid.
LoopElement loop_from_matrix_grid(const std::vector<Eigen::MatrixXcd>& samples,
                                  const AlgebraPtr& algebra);

/// Random loop: per-mode coefficients uniform on the unit disc scaled by
/// 1/(1+n^2). Consumes draws in a fixed documented order (modes -band..band,
/// basis coordinates in order, two uniforms per coefficient).
LoopElement random_loop(const AlgebraPtr& algebra, int band, std::mt19937_64& rng);

/// Max norm over all stored mode coefficients.
double max_norm(const LoopElement& x);

LoopElement operator+(const LoopElement& x, const LoopElement& y);
LoopElement operator-(const LoopElement& x, const LoopElement& y);
LoopElement operator-(const LoopElement& x);
LoopElement operator*(Complex c, const LoopElement& x);
inline LoopElement operator*(const LoopElement& x, Complex c) { return c * x; }

}  // namespace affinv
