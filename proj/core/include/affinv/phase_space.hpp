#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "affinv/affine.hpp"
#include "affinv/loop_fourier.hpp"

namespace affinv {

/// Loop in the matrix group of the algebra, sampled on the uniform grid
/// x_j = 2 pi j / M with M a power of two. Construction rejects samples
/// whose determinant falls below 1e-10 and, for the built-in groups,
/// samples violating the group constraint beyond 1e-10.
class GroupLoop {
 public:
  GroupLoop(AlgebraPtr algebra, std::vector<Eigen::MatrixXcd> samples);

  static GroupLoop identity(const AlgebraPtr& algebra, int grid_size);

  const AlgebraPtr& algebra() const { return algebra_; }
  int grid_size() const { return static_cast<int>(samples_.size()); }
  const std::vector<Eigen::MatrixXcd>& samples() const { return samples_; }
  const Eigen::MatrixXcd& sample(int j) const { return samples_[static_cast<std::size_t>(j)]; }

 private:
  AlgebraPtr algebra_;
  std::vector<Eigen::MatrixXcd> samples_;
};

/// Point (g, mu) of the twisted cotangent bundle at level k. The fiber mu
/// is identified with a loop in the algebra through the trace form and must
/// stay below the Nyquist band of the grid.
class PhasePoint {
 public:
  PhasePoint(GroupLoop g, LoopElement mu, Complex k);

  const GroupLoop& g() const { return g_; }
  const LoopElement& mu() const { return mu_; }
  Complex k() const { return k_; }
  int grid_size() const { return g_.grid_size(); }
  const AlgebraPtr& algebra() const { return g_.algebra(); }

 private:
  GroupLoop g_;
  LoopElement mu_;
  Complex k_;
};

/// Scalar observable packaged with the two partial derivatives the Poisson
/// bracket consumes: the fiber gradient (a loop) and the derivative along
/// base directions t -> (g e^{tY}, mu).
struct AdmissibleFunction {
  std::function<double(const PhasePoint&)> value;
  std::function<LoopElement(const PhasePoint&)> fiber_grad;
  std::function<double(const PhasePoint&, const LoopElement&)> base_deriv;
};

AdmissibleFunction operator+(const AdmissibleFunction& f, const AdmissibleFunction& g);
AdmissibleFunction operator*(double c, const AdmissibleFunction& f);

/// Both Maurer-Cartan fields of a group loop, computed by spectral
/// differentiation. tail_ratio is the relative energy of the entries in
/// the Nyquist bin; above 1e-10 the grid is considered alias-suspect
/// (a warning condition, not an error).
struct MaurerCartan {
  std::vector<Eigen::MatrixXcd> left;   // g' g^{-1}
  std::vector<Eigen::MatrixXcd> right;  // g^{-1} g'
  double tail_ratio = 0.0;

  bool aliased() const { return tail_ratio > 1e-10; }
};

/// Pointwise matrix exponential of X on the grid. Requires
/// grid_size > 2 band(X); throws ConstraintViolationError when the result
/// leaves the group tolerance.
GroupLoop exp_loop(const LoopElement& x, int grid_size);

MaurerCartan loop_log_derivatives(const GroupLoop& g);

/// g^{-1} g' as a loop element.
LoopElement right_log_derivative_loop(const GroupLoop& g);

/// g' g^{-1} as a loop element.
LoopElement left_log_derivative_loop(const GroupLoop& g);

/// Momentum of the lifted left action: g mu g^{-1} + k g' g^{-1}.
LoopElement momentum_left(const PhasePoint& p);

/// Momentum of the lifted right action: -mu.
LoopElement momentum_right(const PhasePoint& p);

/// Momentum of the reparametrization action, kept complex:
/// integral (g^{-1} g', mu) + 1/2 integral (k g^{-1} g', g^{-1} g').
Complex momentum_scalar_complex(const PhasePoint& p);

/// Real part of momentum_scalar_complex (the Hamiltonian of the unit
/// reparametrization direction).
double momentum_scalar(const PhasePoint& p);

/// (h g, mu, k).
PhasePoint act_left(const GroupLoop& h, const PhasePoint& p);

/// (g h^{-1}, h mu h^{-1} + k h' h^{-1}, k).
PhasePoint act_right(const GroupLoop& h, const PhasePoint& p);

/// The three generator curves evaluated at parameter t.
struct FlowCurves {
  PhasePoint left;     // (e^{tX} g, mu)
  PhasePoint right;    // (g e^{-tX}, e^{tX} mu e^{-tX} + t k X')
  PhasePoint central;  // (g e^{t z g^{-1} g'}, mu + t z mu')
};

PhasePoint left_flow(const PhasePoint& p, const LoopElement& x, double t);
PhasePoint right_flow(const PhasePoint& p, const LoopElement& x, double t);
PhasePoint central_flow(const PhasePoint& p, Complex z, double t);

/// Generic base/fiber variation t -> (g e^{tX}, mu + t nu); pass nullptr to
/// leave the fiber alone.
PhasePoint base_flow(const PhasePoint& p, const LoopElement& x,
                     const LoopElement* nu, double t);

FlowCurves flow_curves(const PhasePoint& p, const LoopElement& x, Complex z,
                       double t);

/// The twisted Poisson bracket:
/// {phi, psi} = Dphi(grad psi) - Dpsi(grad phi)
///              - Re<mu, [grad phi, grad psi]> - Re<k grad phi, (grad psi)'>.
double poisson(const AdmissibleFunction& phi, const AdmissibleFunction& psi,
               const PhasePoint& p);

enum class FunctionalKind { left, right, scalar };

/// Momentum component functionals with analytic gradients:
///  left:   value Re<J^L, X>, fiber gradient g^{-1} X g,
///          base derivative Re<[Y, mu] + k Y', g^{-1} X g>;
///  right:  value Re<J^R, X>, fiber gradient -X, base derivative 0.
AdmissibleFunction make_momentum_functional(FunctionalKind kind,
                                            const LoopElement& weight);

/// scalar: value Re(z J), fiber gradient z g^{-1} g',
///         base derivative Re<[g^{-1}g', Y] + Y', z (mu + k g^{-1} g')>.
AdmissibleFunction make_momentum_functional(FunctionalKind kind, Complex weight);

/// |d/dt phi(curve(t)) - {phi, <momentum, weight>}(p)| where the curve is
/// the generator matching the kind. Finite differences use central steps
/// 1e-4 and 1e-5 with Richardson extrapolation.
double momentum_equation_residual(FunctionalKind kind, const LoopElement& weight,
                                  const AdmissibleFunction& phi_test,
                                  const PhasePoint& p);
double momentum_equation_residual(FunctionalKind kind, Complex weight,
                                  const AdmissibleFunction& phi_test,
                                  const PhasePoint& p);

/// |J - Re (1/2k)(<J^L,J^L> - <J^R,J^R>)|; throws DivisionByCenterError at
/// k = 0.
double scalar_momentum_identity_residual(const PhasePoint& p);

/// |kappa(S(p)) + 1/2 <J^R, J^R>| for the combined momentum S.
double kappa_composite_residual(const PhasePoint& p);

/// The combined momentum map (J, J^L, k) as an affine covector.
AffineCovector combined_momentum(const PhasePoint& p);

/// Residual of the equivariance cocycle relation: Poisson bracket of the
/// two combined functionals <(J, J^L), (z, X)> against the pairing of the
/// combined momentum with the affine bracket. Independent of a and b.
double cocycle_relation_residual(Complex z, const LoopElement& x, Complex zeta,
                                 const LoopElement& y, const PhasePoint& p,
                                 Complex a = Complex(0, 0),
                                 Complex b = Complex(0, 0));

/// Residual of the closed-form derivative of Re(<xi, J^L> + <J^R, eta>)
/// along the curve t -> (g e^{tX}, mu + t nu) against finite differences.
double independence_residual(const LoopElement& xi, const LoopElement& eta,
                             const LoopElement& x, const LoopElement& nu,
                             const PhasePoint& p);

/// The twist 2-form on tangent vectors presented by right-translated
/// curves: Re integral (X, k Y').
double omega_twist(const GroupLoop& g, const LoopElement& x,
                   const LoopElement& y, Complex k);

}  // namespace affinv
