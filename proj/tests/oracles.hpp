#pragma once

// Independent reference computations for the tests. Everything here
// deliberately avoids the library's Fourier, structure-constant and
// Eigen-exponential code paths: loops are evaluated by direct mode
// summation, pairings by the rectangle rule on matrix traces, exponentials
// by a scaled power series.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "affinv/loop_fourier.hpp"
#include "affinv/orthogonal_algebra.hpp"

namespace oracles {

using affinv::Complex;

inline Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return a * b - b * a;
}

/// X(x) by direct summation of modes.
inline Eigen::VectorXcd eval_coords(const affinv::LoopElement& x, double t) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(x.algebra()->dim());
  for (int n = -x.band(); n <= x.band(); ++n)
    out += std::exp(Complex(0, n * t)) * x.mode(n);
  return out;
}

/// Matrix realization of X(x), assembled from the basis directly.
inline Eigen::MatrixXcd eval_matrix(const affinv::LoopElement& x, double t) {
  const auto& alg = *x.algebra();
  const Eigen::VectorXcd coords = eval_coords(x, t);
  Eigen::MatrixXcd out =
      Eigen::MatrixXcd::Zero(alg.matrix_dim(), alg.matrix_dim());
  for (int i = 0; i < alg.dim(); ++i) out += coords(i) * alg.basis_matrix(i);
  return out;
}

/// Rectangle-rule quadrature of tr(X(x) Y(x)) over the circle.
inline Complex quadrature_pair(const affinv::LoopElement& x,
                               const affinv::LoopElement& y, int grid) {
  Complex sum = 0;
  for (int j = 0; j < grid; ++j) {
    const double t = 2.0 * std::numbers::pi * j / grid;
    sum += (eval_matrix(x, t) * eval_matrix(y, t)).trace();
  }
  return 2.0 * std::numbers::pi / static_cast<double>(grid) * sum;
}

/// Central finite difference of X at t.
inline Eigen::VectorXcd fd_derivative(const affinv::LoopElement& x, double t,
                                      double h = 1e-6) {
  return (eval_coords(x, t + h) - eval_coords(x, t - h)) / (2.0 * h);
}

/// Matrix exponential by plain scaling, series, squaring.
inline Eigen::MatrixXcd exp_series(Eigen::MatrixXcd a) {
  int squarings = 0;
  while (a.cwiseAbs().maxCoeff() > 0.5) {
    a *= 0.5;
    ++squarings;
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  Eigen::MatrixXcd term = out;
  for (int n = 1; n <= 24; ++n) {
    term = Eigen::MatrixXcd(term * a) / static_cast<double>(n);
    out += term;
  }
  for (int s = 0; s < squarings; ++s) out = out * out;
  return out;
}

/// A cos(n x) with coefficient element a.
inline affinv::LoopElement cos_loop(const affinv::AlgebraElement& a, int n) {
  using affinv::LoopElement;
  return Complex(0.5, 0) * (LoopElement::single_mode(a, n) + LoopElement::single_mode(a, -n));
}

/// A sin(n x).
inline affinv::LoopElement sin_loop(const affinv::AlgebraElement& a, int n) {
  using affinv::LoopElement;
  return Complex(0, -0.5) * (LoopElement::single_mode(a, n) - LoopElement::single_mode(a, -n));
}

}  // namespace oracles
