#include "affinv/affine.hpp"

#include <cmath>

#include "affinv/rng.hpp"

namespace affinv {

AffineVector AffineVector::zero(const AlgebraPtr& algebra) {
  return {Complex(0, 0), LoopElement::zero(algebra), Complex(0, 0)};
}

AffineCovector AffineCovector::zero(const AlgebraPtr& algebra) {
  return {Complex(0, 0), LoopElement::zero(algebra), Complex(0, 0)};
}

AffineVector affine_bracket(const AffineVector& u, const AffineVector& v) {
  require_same_algebra(u.x.algebra(), v.x.algebra(), "affine_bracket");
  LoopElement loop_part = loop_bracket(u.x, v.x) + u.z * loop_derivative(v.x) -
                          v.z * loop_derivative(u.x);
  return {Complex(0, 0), std::move(loop_part), central_cocycle(u.x, v.x)};
}

Complex dual_pair_complex(const AffineCovector& mu, const AffineVector& u) {
  require_same_algebra(mu.xi.algebra(), u.x.algebra(), "dual_pair");
  return mu.alpha * u.z + loop_pair(mu.xi, u.x) + mu.e * u.a;
}

double dual_pair(const AffineCovector& mu, const AffineVector& u) {
  return std::real(dual_pair_complex(mu, u));
}

AffineCovector ad_star(const AffineVector& u, const AffineCovector& mu) {
  require_same_algebra(u.x.algebra(), mu.xi.algebra(), "ad_star");
  const Complex alpha = loop_pair(mu.xi, loop_derivative(u.x));
  LoopElement xi = loop_bracket(u.x, mu.xi) + u.z * loop_derivative(mu.xi) +
                   mu.e * loop_derivative(u.x);
  // The level slot of the output is always zero: the center never moves.
  return {alpha, std::move(xi), Complex(0, 0)};
}

Complex kappa(const AffineCovector& mu) {
  return mu.e * mu.alpha - 0.5 * loop_pair(mu.xi, mu.xi);
}

Complex center_projection(const AffineCovector& mu) { return mu.e; }

AffineVector kappa_gradient(const AffineCovector& mu) {
  return {mu.e, -mu.xi, mu.alpha};
}

double invariance_residual(const GradientMap& grad, const AffineVector& u,
                           const AffineCovector& mu) {
  return std::abs(dual_pair_complex(mu, affine_bracket(u, grad(mu))));
}

double affine_max_norm(const AffineVector& u) {
  return std::max({std::abs(u.z), max_norm(u.x), std::abs(u.a)});
}

AffineVector operator+(const AffineVector& u, const AffineVector& v) {
  return {u.z + v.z, u.x + v.x, u.a + v.a};
}

AffineVector operator-(const AffineVector& u, const AffineVector& v) {
  return {u.z - v.z, u.x - v.x, u.a - v.a};
}

AffineVector operator*(Complex c, const AffineVector& u) {
  return {c * u.z, c * u.x, c * u.a};
}

AffineCovector operator+(const AffineCovector& m, const AffineCovector& n) {
  return {m.alpha + n.alpha, m.xi + n.xi, m.e + n.e};
}

AffineCovector operator-(const AffineCovector& m, const AffineCovector& n) {
  return {m.alpha - n.alpha, m.xi - n.xi, m.e - n.e};
}

AffineCovector operator*(Complex c, const AffineCovector& m) {
  return {c * m.alpha, c * m.xi, c * m.e};
}

AffineVector random_affine_vector(const AlgebraPtr& algebra, int band,
                                  std::mt19937_64& rng) {
  const Complex z = unit_disc(rng);
  LoopElement x = random_loop(algebra, band, rng);
  const Complex a = unit_disc(rng);
  return {z, std::move(x), a};
}

AffineCovector random_affine_covector(const AlgebraPtr& algebra, int band,
                                      std::mt19937_64& rng) {
  const Complex alpha = unit_disc(rng);
  LoopElement xi = random_loop(algebra, band, rng);
  const Complex e = unit_disc(rng);
  return {alpha, std::move(xi), e};
}

}  // namespace affinv
