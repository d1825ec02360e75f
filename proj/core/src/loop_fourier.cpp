#include "affinv/loop_fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include <unsupported/Eigen/FFT>

#include "affinv/rng.hpp"

namespace affinv {

namespace {

constexpr double kModeDropTol = 1e-13;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<Complex> fft_forward(const std::vector<Complex>& in) {
  Eigen::FFT<double> fft;
  std::vector<Complex> out;
  fft.fwd(out, in);
  return out;
}

std::vector<Complex> fft_inverse(const std::vector<Complex>& in) {
  Eigen::FFT<double> fft;
  std::vector<Complex> out;
  fft.inv(out, in);
  return out;
}

}  // namespace

LoopElement::LoopElement(AlgebraPtr algebra, std::vector<Eigen::VectorXcd> modes)
    : algebra_(std::move(algebra)), modes_(std::move(modes)) {
  if (modes_.empty() || modes_.size() % 2 == 0)
    throw std::invalid_argument("loop needs 2*band+1 mode vectors");
  band_ = static_cast<int>(modes_.size() / 2);
  for (const auto& m : modes_) {
    if (m.size() != algebra_->dim())
      throw MismatchError("loop mode has wrong coordinate dimension");
  }
}

LoopElement LoopElement::zero(const AlgebraPtr& algebra) {
  return LoopElement(algebra, {Eigen::VectorXcd::Zero(algebra->dim())});
}

LoopElement LoopElement::constant(const AlgebraElement& value) {
  return LoopElement(value.algebra, {value.coeffs});
}

LoopElement LoopElement::single_mode(const AlgebraElement& coeff, int n) {
  const int band = std::abs(n);
  std::vector<Eigen::VectorXcd> modes(static_cast<std::size_t>(2 * band + 1),
                                      Eigen::VectorXcd::Zero(coeff.algebra->dim()));
  modes[static_cast<std::size_t>(n + band)] = coeff.coeffs;
  return LoopElement(coeff.algebra, std::move(modes));
}

Eigen::VectorXcd LoopElement::mode(int n) const {
  if (std::abs(n) > band_) return Eigen::VectorXcd::Zero(algebra_->dim());
  return modes_[static_cast<std::size_t>(n + band_)];
}

LoopElement loop_bracket(const LoopElement& x, const LoopElement& y) {
  require_same_algebra(x.algebra(), y.algebra(), "loop_bracket");
  const auto& alg = x.algebra();
  const int bx = x.band(), by = y.band(), band = bx + by;
  std::vector<Eigen::VectorXcd> modes(static_cast<std::size_t>(2 * band + 1),
                                      Eigen::VectorXcd::Zero(alg->dim()));
  for (int m = -band; m <= band; ++m) {
    auto& out = modes[static_cast<std::size_t>(m + band)];
    const int lo = std::max(-bx, m - by), hi = std::min(bx, m + by);
    for (int p = lo; p <= hi; ++p)
      out += alg->bracket_coords(x.mode(p), y.mode(m - p));
  }
  return LoopElement(alg, std::move(modes));
}

LoopElement loop_derivative(const LoopElement& x) {
  const int band = x.band();
  std::vector<Eigen::VectorXcd> modes;
  modes.reserve(static_cast<std::size_t>(2 * band + 1));
  for (int n = -band; n <= band; ++n)
    modes.push_back(Complex(0, n) * x.mode(n));
  return LoopElement(x.algebra(), std::move(modes));
}

Complex loop_pair(const LoopElement& xi, const LoopElement& x) {
  require_same_algebra(xi.algebra(), x.algebra(), "loop_pair");
  const int overlap = std::min(xi.band(), x.band());
  Complex sum = 0;
  for (int n = -overlap; n <= overlap; ++n)
    sum += xi.algebra()->inner_coords(xi.mode(-n), x.mode(n));
  return kTwoPi * sum;
}

Complex central_cocycle(const LoopElement& x, const LoopElement& y) {
  return loop_pair(x, loop_derivative(y));
}

LoopElement truncate(const LoopElement& x, int band) {
  if (band < 0) throw std::invalid_argument("truncate: negative band");
  const int b = std::min(band, x.band());
  std::vector<Eigen::VectorXcd> modes;
  modes.reserve(static_cast<std::size_t>(2 * b + 1));
  for (int n = -b; n <= b; ++n) modes.push_back(x.mode(n));
  return LoopElement(x.algebra(), std::move(modes));
}

std::vector<Eigen::VectorXcd> to_grid(const LoopElement& x, int grid_size) {
  if (grid_size <= 2 * x.band())
    throw AliasError("to_grid: grid of size " + std::to_string(grid_size) +
                     " cannot resolve band " + std::to_string(x.band()));
  const int d = x.algebra()->dim();
  std::vector<Eigen::VectorXcd> samples(static_cast<std::size_t>(grid_size),
                                        Eigen::VectorXcd(d));
  std::vector<Complex> bins(static_cast<std::size_t>(grid_size));
  for (int c = 0; c < d; ++c) {
    std::fill(bins.begin(), bins.end(), Complex(0, 0));
    for (int n = -x.band(); n <= x.band(); ++n)
      bins[static_cast<std::size_t>(((n % grid_size) + grid_size) % grid_size)] += x.mode(n)(c);
    // The inverse transform carries 1/M; the evaluation sum does not.
    const auto vals = fft_inverse(bins);
    for (int j = 0; j < grid_size; ++j)
      samples[static_cast<std::size_t>(j)](c) =
          vals[static_cast<std::size_t>(j)] * static_cast<double>(grid_size);
  }
  return samples;
}

LoopElement from_grid(const std::vector<Eigen::VectorXcd>& samples,
                      const AlgebraPtr& algebra) {
  const int grid = static_cast<int>(samples.size());
  if (grid == 0) throw std::invalid_argument("from_grid: no samples");
  const int d = algebra->dim();
  for (const auto& s : samples)
    if (s.size() != d) throw MismatchError("from_grid: sample dimension mismatch");
  const int band = (grid - 1) / 2;

  std::vector<Eigen::VectorXcd> modes(static_cast<std::size_t>(2 * band + 1),
                                      Eigen::VectorXcd::Zero(d));
  std::vector<Complex> seq(static_cast<std::size_t>(grid));
  for (int c = 0; c < d; ++c) {
    for (int j = 0; j < grid; ++j) seq[static_cast<std::size_t>(j)] = samples[static_cast<std::size_t>(j)](c);
    const auto bins = fft_forward(seq);
    for (int n = -band; n <= band; ++n)
      modes[static_cast<std::size_t>(n + band)](c) =
          bins[static_cast<std::size_t>(((n % grid) + grid) % grid)] / static_cast<double>(grid);
  }

  // Discard negligible modes and trim the band to the largest survivor.
  int top = 0;
  for (int n = -band; n <= band; ++n) {
    auto& m = modes[static_cast<std::size_t>(n + band)];
    if (m.cwiseAbs().maxCoeff() < kModeDropTol)
      m.setZero();
    else
      top = std::max(top, std::abs(n));
  }
  std::vector<Eigen::VectorXcd> trimmed;
  trimmed.reserve(static_cast<std::size_t>(2 * top + 1));
  for (int n = -top; n <= top; ++n) trimmed.push_back(std::move(modes[static_cast<std::size_t>(n + band)]));
  return LoopElement(algebra, std::move(trimmed));
}

std::vector<Eigen::MatrixXcd> matrix_grid(const LoopElement& x, int grid_size) {
  const auto coords = to_grid(x, grid_size);
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(coords.size());
  for (const auto& c : coords) out.push_back(x.algebra()->to_matrix(c));
  return out;
}

LoopElement loop_from_matrix_grid(const std::vector<Eigen::MatrixXcd>& samples,
                                  const AlgebraPtr& algebra) {
  std::vector<Eigen::VectorXcd> coords;
  coords.reserve(samples.size());
  for (const auto& m : samples) coords.push_back(algebra->to_coords(m));
  return from_grid(coords, algebra);
}

LoopElement random_loop(const AlgebraPtr& algebra, int band, std::mt19937_64& rng) {
  std::vector<Eigen::VectorXcd> modes;
  modes.reserve(static_cast<std::size_t>(2 * band + 1));
  for (int n = -band; n <= band; ++n) {
    Eigen::VectorXcd m(algebra->dim());
    const double scale = 1.0 / (1.0 + static_cast<double>(n) * static_cast<double>(n));
    for (int c = 0; c < algebra->dim(); ++c) m(c) = scale * unit_disc(rng);
    modes.push_back(std::move(m));
  }
  return LoopElement(algebra, std::move(modes));
}

double max_norm(const LoopElement& x) {
  double out = 0.0;
  for (int n = -x.band(); n <= x.band(); ++n)
    out = std::max(out, x.mode(n).cwiseAbs().maxCoeff());
  return out;
}

LoopElement operator+(const LoopElement& x, const LoopElement& y) {
  require_same_algebra(x.algebra(), y.algebra(), "operator+");
  const int band = std::max(x.band(), y.band());
  std::vector<Eigen::VectorXcd> modes;
  modes.reserve(static_cast<std::size_t>(2 * band + 1));
  for (int n = -band; n <= band; ++n) modes.push_back(x.mode(n) + y.mode(n));
  return LoopElement(x.algebra(), std::move(modes));
}

LoopElement operator-(const LoopElement& x, const LoopElement& y) {
  return x + Complex(-1, 0) * y;
}

LoopElement operator-(const LoopElement& x) { return Complex(-1, 0) * x; }

LoopElement operator*(Complex c, const LoopElement& x) {
  std::vector<Eigen::VectorXcd> modes;
  modes.reserve(static_cast<std::size_t>(2 * x.band() + 1));
  for (int n = -x.band(); n <= x.band(); ++n) modes.push_back(c * x.mode(n));
  return LoopElement(x.algebra(), std::move(modes));
}

}  // namespace affinv
