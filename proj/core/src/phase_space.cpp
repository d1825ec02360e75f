#include "affinv/phase_space.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>

#include "affinv/finite_difference.hpp"

namespace affinv {

namespace {

constexpr double kInvertibilityTol = 1e-10;
constexpr double kGroupTol = 1e-10;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

void require_compatible(const GroupLoop& h, const PhasePoint& p, const char* what) {
  require_same_algebra(h.algebra(), p.algebra(), what);
  if (h.grid_size() != p.grid_size())
    throw MismatchError(std::string(what) + ": grid size mismatch");
}

/// Pointwise exp(c * X(x_j)) on the grid of p.
std::vector<Eigen::MatrixXcd> exp_field(const LoopElement& x, Complex c, int grid) {
  auto mats = matrix_grid(x, grid);
  for (auto& m : mats) m = Eigen::MatrixXcd(c * m).exp();
  return mats;
}

/// g^{-1} xi g (or g xi g^{-1} when from_left) as a loop element.
LoopElement conjugated_loop(const GroupLoop& g, const LoopElement& xi, bool by_inverse) {
  require_same_algebra(g.algebra(), xi.algebra(), "conjugated_loop");
  const int grid = g.grid_size();
  const auto xi_mats = matrix_grid(xi, grid);
  std::vector<Eigen::MatrixXcd> out(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j) {
    const auto& gj = g.sample(j);
    const Eigen::MatrixXcd gj_inv = gj.inverse();
    out[static_cast<std::size_t>(j)] =
        by_inverse ? Eigen::MatrixXcd(gj_inv * xi_mats[static_cast<std::size_t>(j)] * gj)
                   : Eigen::MatrixXcd(gj * xi_mats[static_cast<std::size_t>(j)] * gj_inv);
  }
  return loop_from_matrix_grid(out, g.algebra());
}

}  // namespace

GroupLoop::GroupLoop(AlgebraPtr algebra, std::vector<Eigen::MatrixXcd> samples)
    : algebra_(std::move(algebra)), samples_(std::move(samples)) {
  const int grid = static_cast<int>(samples_.size());
  if (!is_power_of_two(grid))
    throw Error("group loop grid size must be a power of two");
  const int m = algebra_->matrix_dim();
  for (const auto& s : samples_) {
    if (s.rows() != m || s.cols() != m)
      throw MismatchError("group loop sample has wrong matrix dimension");
    if (std::abs(s.determinant()) < kInvertibilityTol)
      throw ConstraintViolationError("group loop sample is not invertible");
    if (algebra_->group_constraint_residual(s) > kGroupTol)
      throw ConstraintViolationError("group loop sample violates the " +
                                     algebra_->name() + " group constraint");
  }
}

GroupLoop GroupLoop::identity(const AlgebraPtr& algebra, int grid_size) {
  std::vector<Eigen::MatrixXcd> samples(
      static_cast<std::size_t>(grid_size),
      Eigen::MatrixXcd::Identity(algebra->matrix_dim(), algebra->matrix_dim()));
  return GroupLoop(algebra, std::move(samples));
}

PhasePoint::PhasePoint(GroupLoop g, LoopElement mu, Complex k)
    : g_(std::move(g)), mu_(std::move(mu)), k_(k) {
  require_same_algebra(g_.algebra(), mu_.algebra(), "PhasePoint");
  if (2 * mu_.band() >= g_.grid_size())
    throw AliasError("fiber band " + std::to_string(mu_.band()) +
                     " reaches the Nyquist limit of grid " +
                     std::to_string(g_.grid_size()));
}

AdmissibleFunction operator+(const AdmissibleFunction& f, const AdmissibleFunction& g) {
  AdmissibleFunction out;
  out.value = [fv = f.value, gv = g.value](const PhasePoint& p) { return fv(p) + gv(p); };
  out.fiber_grad = [ff = f.fiber_grad, gf = g.fiber_grad](const PhasePoint& p) {
    return ff(p) + gf(p);
  };
  out.base_deriv = [fb = f.base_deriv, gb = g.base_deriv](const PhasePoint& p,
                                                          const LoopElement& y) {
    return fb(p, y) + gb(p, y);
  };
  return out;
}

AdmissibleFunction operator*(double c, const AdmissibleFunction& f) {
  AdmissibleFunction out;
  out.value = [c, fv = f.value](const PhasePoint& p) { return c * fv(p); };
  out.fiber_grad = [c, ff = f.fiber_grad](const PhasePoint& p) {
    return Complex(c, 0) * ff(p);
  };
  out.base_deriv = [c, fb = f.base_deriv](const PhasePoint& p, const LoopElement& y) {
    return c * fb(p, y);
  };
  return out;
}

GroupLoop exp_loop(const LoopElement& x, int grid_size) {
  return GroupLoop(x.algebra(), exp_field(x, Complex(1, 0), grid_size));
}

MaurerCartan loop_log_derivatives(const GroupLoop& g) {
  const int grid = g.grid_size();
  const int m = g.algebra()->matrix_dim();

  // Spectral derivative of every matrix entry. The Nyquist bin has no
  // well-defined frequency for complex data; it is zeroed and its energy
  // reported through tail_ratio.
  std::vector<Eigen::MatrixXcd> derivative(
      static_cast<std::size_t>(grid), Eigen::MatrixXcd::Zero(m, m));
  double tail_energy = 0.0, total_energy = 0.0;
  Eigen::FFT<double> fft;
  std::vector<Complex> seq(static_cast<std::size_t>(grid)), bins, back;
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      for (int j = 0; j < grid; ++j) seq[static_cast<std::size_t>(j)] = g.sample(j)(r, c);
      fft.fwd(bins, seq);
      for (int b = 0; b < grid; ++b) {
        const double energy = std::norm(bins[static_cast<std::size_t>(b)]);
        total_energy += energy;
        int n;
        if (2 * b < grid)
          n = b;
        else if (2 * b == grid)
          n = 0;  // zeroed Nyquist bin
        else
          n = b - grid;
        if (2 * b == grid) tail_energy += energy;
        bins[static_cast<std::size_t>(b)] *= Complex(0, n);
      }
      fft.inv(back, bins);
      for (int j = 0; j < grid; ++j)
        derivative[static_cast<std::size_t>(j)](r, c) = back[static_cast<std::size_t>(j)];
    }
  }

  MaurerCartan out;
  out.tail_ratio = total_energy > 0.0 ? tail_energy / total_energy : 0.0;
  out.left.resize(static_cast<std::size_t>(grid));
  out.right.resize(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j) {
    const Eigen::MatrixXcd inv = g.sample(j).inverse();
    out.left[static_cast<std::size_t>(j)] = derivative[static_cast<std::size_t>(j)] * inv;
    out.right[static_cast<std::size_t>(j)] = inv * derivative[static_cast<std::size_t>(j)];
  }
  return out;
}

LoopElement right_log_derivative_loop(const GroupLoop& g) {
  return loop_from_matrix_grid(loop_log_derivatives(g).right, g.algebra());
}

LoopElement left_log_derivative_loop(const GroupLoop& g) {
  return loop_from_matrix_grid(loop_log_derivatives(g).left, g.algebra());
}

LoopElement momentum_left(const PhasePoint& p) {
  const int grid = p.grid_size();
  const auto mc = loop_log_derivatives(p.g());
  const auto mu_mats = matrix_grid(p.mu(), grid);
  std::vector<Eigen::MatrixXcd> field(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j) {
    const auto& gj = p.g().sample(j);
    field[static_cast<std::size_t>(j)] =
        gj * mu_mats[static_cast<std::size_t>(j)] * gj.inverse() +
        p.k() * mc.left[static_cast<std::size_t>(j)];
  }
  return loop_from_matrix_grid(field, p.algebra());
}

LoopElement momentum_right(const PhasePoint& p) { return -p.mu(); }

Complex momentum_scalar_complex(const PhasePoint& p) {
  const int grid = p.grid_size();
  const auto mc = loop_log_derivatives(p.g());
  const auto mu_mats = matrix_grid(p.mu(), grid);
  Complex sum = 0;
  for (int j = 0; j < grid; ++j) {
    const auto& r = mc.right[static_cast<std::size_t>(j)];
    sum += (r * mu_mats[static_cast<std::size_t>(j)]).trace() +
           0.5 * p.k() * (r * r).trace();
  }
  return kTwoPi / static_cast<double>(grid) * sum;
}

double momentum_scalar(const PhasePoint& p) {
  return std::real(momentum_scalar_complex(p));
}

PhasePoint act_left(const GroupLoop& h, const PhasePoint& p) {
  require_compatible(h, p, "act_left");
  std::vector<Eigen::MatrixXcd> samples(static_cast<std::size_t>(p.grid_size()));
  for (int j = 0; j < p.grid_size(); ++j)
    samples[static_cast<std::size_t>(j)] = h.sample(j) * p.g().sample(j);
  return PhasePoint(GroupLoop(p.algebra(), std::move(samples)), p.mu(), p.k());
}

PhasePoint act_right(const GroupLoop& h, const PhasePoint& p) {
  require_compatible(h, p, "act_right");
  const int grid = p.grid_size();
  const auto mc_h = loop_log_derivatives(h);
  const auto mu_mats = matrix_grid(p.mu(), grid);
  std::vector<Eigen::MatrixXcd> samples(static_cast<std::size_t>(grid));
  std::vector<Eigen::MatrixXcd> fiber(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j) {
    const auto& hj = h.sample(j);
    const Eigen::MatrixXcd hj_inv = hj.inverse();
    samples[static_cast<std::size_t>(j)] = p.g().sample(j) * hj_inv;
    fiber[static_cast<std::size_t>(j)] =
        hj * mu_mats[static_cast<std::size_t>(j)] * hj_inv +
        p.k() * mc_h.left[static_cast<std::size_t>(j)];
  }
  return PhasePoint(GroupLoop(p.algebra(), std::move(samples)),
                    loop_from_matrix_grid(fiber, p.algebra()), p.k());
}

PhasePoint left_flow(const PhasePoint& p, const LoopElement& x, double t) {
  require_same_algebra(x.algebra(), p.algebra(), "left_flow");
  const int grid = p.grid_size();
  auto factors = exp_field(x, Complex(t, 0), grid);
  std::vector<Eigen::MatrixXcd> samples(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j)
    samples[static_cast<std::size_t>(j)] =
        factors[static_cast<std::size_t>(j)] * p.g().sample(j);
  return PhasePoint(GroupLoop(p.algebra(), std::move(samples)), p.mu(), p.k());
}

PhasePoint right_flow(const PhasePoint& p, const LoopElement& x, double t) {
  require_same_algebra(x.algebra(), p.algebra(), "right_flow");
  const int grid = p.grid_size();
  const auto fwd = exp_field(x, Complex(t, 0), grid);
  const auto bwd = exp_field(x, Complex(-t, 0), grid);
  const auto mu_mats = matrix_grid(p.mu(), grid);
  const auto dx_mats = matrix_grid(loop_derivative(x), grid);
  std::vector<Eigen::MatrixXcd> samples(static_cast<std::size_t>(grid));
  std::vector<Eigen::MatrixXcd> fiber(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j) {
    samples[static_cast<std::size_t>(j)] =
        p.g().sample(j) * bwd[static_cast<std::size_t>(j)];
    fiber[static_cast<std::size_t>(j)] =
        fwd[static_cast<std::size_t>(j)] * mu_mats[static_cast<std::size_t>(j)] *
            bwd[static_cast<std::size_t>(j)] +
        t * p.k() * dx_mats[static_cast<std::size_t>(j)];
  }
  return PhasePoint(GroupLoop(p.algebra(), std::move(samples)),
                    loop_from_matrix_grid(fiber, p.algebra()), p.k());
}

PhasePoint central_flow(const PhasePoint& p, Complex z, double t) {
  const int grid = p.grid_size();
  const auto mc = loop_log_derivatives(p.g());
  std::vector<Eigen::MatrixXcd> samples(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j)
    samples[static_cast<std::size_t>(j)] =
        p.g().sample(j) *
        Eigen::MatrixXcd(t * z * mc.right[static_cast<std::size_t>(j)]).exp();
  LoopElement fiber = p.mu() + (t * z) * loop_derivative(p.mu());
  return PhasePoint(GroupLoop(p.algebra(), std::move(samples)), std::move(fiber), p.k());
}

PhasePoint base_flow(const PhasePoint& p, const LoopElement& x,
                     const LoopElement* nu, double t) {
  require_same_algebra(x.algebra(), p.algebra(), "base_flow");
  const int grid = p.grid_size();
  const auto factors = exp_field(x, Complex(t, 0), grid);
  std::vector<Eigen::MatrixXcd> samples(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j)
    samples[static_cast<std::size_t>(j)] =
        p.g().sample(j) * factors[static_cast<std::size_t>(j)];
  LoopElement fiber = nu ? p.mu() + Complex(t, 0) * (*nu) : p.mu();
  return PhasePoint(GroupLoop(p.algebra(), std::move(samples)), std::move(fiber), p.k());
}

FlowCurves flow_curves(const PhasePoint& p, const LoopElement& x, Complex z, double t) {
  return {left_flow(p, x, t), right_flow(p, x, t), central_flow(p, z, t)};
}

double poisson(const AdmissibleFunction& phi, const AdmissibleFunction& psi,
               const PhasePoint& p) {
  const LoopElement grad_phi = phi.fiber_grad(p);
  const LoopElement grad_psi = psi.fiber_grad(p);
  const double base_part = phi.base_deriv(p, grad_psi) - psi.base_deriv(p, grad_phi);
  const double fiber_part = std::real(loop_pair(p.mu(), loop_bracket(grad_phi, grad_psi)));
  const double twist_part =
      std::real(p.k() * loop_pair(grad_phi, loop_derivative(grad_psi)));
  return base_part - fiber_part - twist_part;
}

AdmissibleFunction make_momentum_functional(FunctionalKind kind,
                                            const LoopElement& weight) {
  AdmissibleFunction out;
  switch (kind) {
    case FunctionalKind::left:
      out.value = [weight](const PhasePoint& p) {
        return std::real(loop_pair(momentum_left(p), weight));
      };
      out.fiber_grad = [weight](const PhasePoint& p) {
        return conjugated_loop(p.g(), weight, /*by_inverse=*/true);
      };
      out.base_deriv = [weight](const PhasePoint& p, const LoopElement& y) {
        const LoopElement dir =
            loop_bracket(y, p.mu()) + p.k() * loop_derivative(y);
        return std::real(
            loop_pair(dir, conjugated_loop(p.g(), weight, /*by_inverse=*/true)));
      };
      return out;
    case FunctionalKind::right:
      out.value = [weight](const PhasePoint& p) {
        return std::real(loop_pair(momentum_right(p), weight));
      };
      out.fiber_grad = [weight](const PhasePoint&) { return -weight; };
      out.base_deriv = [](const PhasePoint&, const LoopElement&) { return 0.0; };
      return out;
    case FunctionalKind::scalar:
      throw MismatchError("scalar momentum functional takes a complex weight");
  }
  throw MismatchError("unknown functional kind");
}

AdmissibleFunction make_momentum_functional(FunctionalKind kind, Complex weight) {
  if (kind != FunctionalKind::scalar)
    throw MismatchError("loop-weighted momentum functional takes a loop weight");
  AdmissibleFunction out;
  out.value = [weight](const PhasePoint& p) {
    return std::real(weight * momentum_scalar_complex(p));
  };
  out.fiber_grad = [weight](const PhasePoint& p) {
    return weight * right_log_derivative_loop(p.g());
  };
  out.base_deriv = [weight](const PhasePoint& p, const LoopElement& y) {
    const LoopElement r = right_log_derivative_loop(p.g());
    const LoopElement dir = loop_bracket(r, y) + loop_derivative(y);
    return std::real(loop_pair(dir, weight * (p.mu() + p.k() * r)));
  };
  return out;
}

namespace {

double flow_equation_residual(const AdmissibleFunction& phi_test,
                              const AdmissibleFunction& generator,
                              const std::function<PhasePoint(double)>& curve,
                              const PhasePoint& p) {
  const double fd = richardson_derivative(
      [&](double t) { return phi_test.value(curve(t)); });
  return std::abs(fd - poisson(phi_test, generator, p));
}

}  // namespace

double momentum_equation_residual(FunctionalKind kind, const LoopElement& weight,
                                  const AdmissibleFunction& phi_test,
                                  const PhasePoint& p) {
  const AdmissibleFunction generator = make_momentum_functional(kind, weight);
  switch (kind) {
    case FunctionalKind::left:
      return flow_equation_residual(
          phi_test, generator, [&](double t) { return left_flow(p, weight, t); }, p);
    case FunctionalKind::right:
      return flow_equation_residual(
          phi_test, generator, [&](double t) { return right_flow(p, weight, t); }, p);
    case FunctionalKind::scalar:
      throw MismatchError("scalar momentum equation takes a complex weight");
  }
  throw MismatchError("unknown functional kind");
}

double momentum_equation_residual(FunctionalKind kind, Complex weight,
                                  const AdmissibleFunction& phi_test,
                                  const PhasePoint& p) {
  if (kind != FunctionalKind::scalar)
    throw MismatchError("loop-weighted momentum equation takes a loop weight");
  const AdmissibleFunction generator = make_momentum_functional(kind, weight);
  return flow_equation_residual(
      phi_test, generator, [&](double t) { return central_flow(p, weight, t); }, p);
}

double scalar_momentum_identity_residual(const PhasePoint& p) {
  if (p.k() == Complex(0, 0))
    throw DivisionByCenterError("scalar momentum identity needs k != 0");
  const LoopElement jl = momentum_left(p);
  const LoopElement jr = momentum_right(p);
  const Complex quad = (loop_pair(jl, jl) - loop_pair(jr, jr)) / (2.0 * p.k());
  return std::abs(momentum_scalar(p) - std::real(quad));
}

AffineCovector combined_momentum(const PhasePoint& p) {
  return {momentum_scalar_complex(p), momentum_left(p), p.k()};
}

double kappa_composite_residual(const PhasePoint& p) {
  const LoopElement jr = momentum_right(p);
  return std::abs(kappa(combined_momentum(p)) + 0.5 * loop_pair(jr, jr));
}

double cocycle_relation_residual(Complex z, const LoopElement& x, Complex zeta,
                                 const LoopElement& y, const PhasePoint& p,
                                 Complex a, Complex b) {
  const AdmissibleFunction phi =
      make_momentum_functional(FunctionalKind::scalar, z) +
      make_momentum_functional(FunctionalKind::left, x);
  const AdmissibleFunction psi =
      make_momentum_functional(FunctionalKind::scalar, zeta) +
      make_momentum_functional(FunctionalKind::left, y);
  const double lhs = poisson(phi, psi, p);
  const AffineVector u{z, x, a};
  const AffineVector v{zeta, y, b};
  const double rhs = dual_pair(combined_momentum(p), affine_bracket(u, v));
  return std::abs(lhs - rhs);
}

double independence_residual(const LoopElement& xi, const LoopElement& eta,
                             const LoopElement& x, const LoopElement& nu,
                             const PhasePoint& p) {
  const auto observable = [&](const PhasePoint& q) {
    return std::real(loop_pair(xi, momentum_left(q)) +
                     loop_pair(momentum_right(q), eta));
  };
  const double fd = richardson_derivative(
      [&](double t) { return observable(base_flow(p, x, &nu, t)); });
  const LoopElement transported = conjugated_loop(p.g(), xi, /*by_inverse=*/true);
  const LoopElement dir =
      nu + loop_bracket(x, p.mu()) + p.k() * loop_derivative(x);
  const double closed =
      std::real(loop_pair(transported, dir) - loop_pair(eta, nu));
  return std::abs(fd - closed);
}

double omega_twist(const GroupLoop& g, const LoopElement& x, const LoopElement& y,
                   Complex k) {
  require_same_algebra(g.algebra(), x.algebra(), "omega_twist");
  require_same_algebra(x.algebra(), y.algebra(), "omega_twist");
  return std::real(k * loop_pair(x, loop_derivative(y)));
}

}  // namespace affinv
