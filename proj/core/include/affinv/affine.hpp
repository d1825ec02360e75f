#pragma once

#include <functional>
#include <random>

#include "affinv/loop_fourier.hpp"

namespace affinv {

/// Element (z, X, a) of the full affine algebra: z scales the loop
/// derivative, X is the loop part, a sits in the center.
struct AffineVector {
  Complex z;
  LoopElement x;
  Complex a;

  static AffineVector zero(const AlgebraPtr& algebra);
};

/// Element (alpha, xi, e) of the dual; e is the level paired with the
/// central slot.
struct AffineCovector {
  Complex alpha;
  LoopElement xi;
  Complex e;

  static AffineCovector zero(const AlgebraPtr& algebra);
};

/// Bracket of the full affine algebra:
/// [(z1,X,a), (z2,Y,b)] = (0, [X,Y] + z1 Y' - z2 X', integral (X, Y')).
AffineVector affine_bracket(const AffineVector& u, const AffineVector& v);

/// Complex bilinear pairing alpha z + integral (xi, X) + e a.
Complex dual_pair_complex(const AffineCovector& mu, const AffineVector& u);

/// The real duality pairing: Re of dual_pair_complex.
double dual_pair(const AffineCovector& mu, const AffineVector& u);

/// Coadjoint action (minus the dual of ad):
/// ad*_(z,X,a)(alpha,xi,e) = (integral (xi, X'), [X,xi] + z xi' + e X', 0).
AffineCovector ad_star(const AffineVector& u, const AffineCovector& mu);

/// The quadratic invariant e alpha - 1/2 integral (xi, xi).
Complex kappa(const AffineCovector& mu);

/// Projection onto the center coefficient e.
Complex center_projection(const AffineCovector& mu);

/// Gradient of kappa relative to the duality pairing: (e, -xi, alpha).
AffineVector kappa_gradient(const AffineCovector& mu);

using GradientMap = std::function<AffineVector(const AffineCovector&)>;

/// |<mu, [u, grad F(mu)]>| with the complex bilinear pairing; vanishes for
/// coadjoint-invariant F.
double invariance_residual(const GradientMap& grad, const AffineVector& u,
                           const AffineCovector& mu);

/// max(|z|, loop max norm, |a|).
double affine_max_norm(const AffineVector& u);

AffineVector operator+(const AffineVector& u, const AffineVector& v);
AffineVector operator-(const AffineVector& u, const AffineVector& v);
AffineVector operator*(Complex c, const AffineVector& u);
AffineCovector operator+(const AffineCovector& m, const AffineCovector& n);
AffineCovector operator-(const AffineCovector& m, const AffineCovector& n);
AffineCovector operator*(Complex c, const AffineCovector& m);

AffineVector random_affine_vector(const AlgebraPtr& algebra, int band,
                                  std::mt19937_64& rng);
AffineCovector random_affine_covector(const AlgebraPtr& algebra, int band,
                                      std::mt19937_64& rng);

}  // namespace affinv
