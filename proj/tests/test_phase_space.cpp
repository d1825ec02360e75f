#include <doctest.h>

#include <numbers>
#include <random>

#include "affinv/finite_difference.hpp"
#include "affinv/phase_space.hpp"
#include "affinv/rng.hpp"
#include "oracles.hpp"

using namespace affinv;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGrid = 128;

double grid_point(int j, int grid) { return 2.0 * kPi * j / grid; }

PhasePoint random_point(const AlgebraPtr& alg, Complex k, std::mt19937_64& rng,
                        int band = 4, int grid = kGrid) {
  GroupLoop g = exp_loop(random_loop(alg, band, rng), grid);
  LoopElement mu = random_loop(alg, band, rng);
  return PhasePoint(std::move(g), std::move(mu), k);
}

double matrix_field_distance(const std::vector<Eigen::MatrixXcd>& a,
                             const std::vector<Eigen::MatrixXcd>& b) {
  double out = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    out = std::max(out, Eigen::MatrixXcd(a[j] - b[j]).cwiseAbs().maxCoeff());
  return out;
}

}  // namespace

TEST_CASE("exp_loop basics") {
  const auto alg = OrthogonalAlgebra::sl2();

  const auto id = exp_loop(LoopElement::zero(alg), 16);
  for (const auto& s : id.samples())
    CHECK((s - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

  // Constant generator: every sample equals exp(A) and the spectral
  // derivative vanishes.
  std::mt19937_64 rng(67);
  const auto a = random_element(alg, rng);
  const auto g = exp_loop(LoopElement::constant(a), 16);
  const Eigen::MatrixXcd expect = oracles::exp_series(alg->to_matrix(a.coeffs));
  for (const auto& s : g.samples()) CHECK((s - expect).cwiseAbs().maxCoeff() < 1e-12);
  const auto mc = loop_log_derivatives(g);
  CHECK(matrix_field_distance(mc.left, std::vector<Eigen::MatrixXcd>(
                                           16, Eigen::MatrixXcd::Zero(2, 2))) < 1e-10);

  // h sin(x) exponentiates to diag(e^{sin x}, e^{-sin x}).
  const auto hs = oracles::sin_loop(basis_element(alg, 2), 1);
  const auto gh = exp_loop(hs, 32);
  for (int j = 0; j < 32; ++j) {
    const double s = std::sin(grid_point(j, 32));
    Eigen::MatrixXcd expect_j(2, 2);
    expect_j << std::exp(s), 0, 0, std::exp(-s);
    CHECK((gh.sample(j) - expect_j).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("exp_loop rejects Nyquist violations") {
  const auto alg = OrthogonalAlgebra::sl2();
  const auto x = LoopElement::single_mode(basis_element(alg, 2), 1);
  CHECK_THROWS_AS(exp_loop(x, 2), AliasError);
}

TEST_CASE("log derivatives of a commuting exponential") {
  const auto alg = OrthogonalAlgebra::sl2();
  const auto h = basis_element(alg, 2);
  const auto g = exp_loop(oracles::sin_loop(h, 1), kGrid);
  const auto mc = loop_log_derivatives(g);

  // Chain rule for the commuting family: g^{-1} g' = h cos x.
  const Eigen::MatrixXcd hm = alg->to_matrix(h.coeffs);
  for (int j = 0; j < kGrid; j += 7) {
    const Eigen::MatrixXcd expect = std::cos(grid_point(j, kGrid)) * hm;
    CHECK((mc.right[static_cast<std::size_t>(j)] - expect).cwiseAbs().maxCoeff() < 1e-8);
  }

  // Left and right fields conjugate into each other.
  for (int j = 0; j < kGrid; j += 11) {
    const Eigen::MatrixXcd conj = g.sample(j) * mc.right[static_cast<std::size_t>(j)] *
                                  g.sample(j).inverse();
    CHECK((mc.left[static_cast<std::size_t>(j)] - conj).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK_FALSE(mc.aliased());
}

TEST_CASE("alias monitor flags undersampled loops") {
  const auto alg = OrthogonalAlgebra::sl2();
  // exp of 1.5 h cos(4x) has strong harmonics at multiples of 4; on a
  // 16-point grid the second harmonic sits exactly on the Nyquist bin.
  const auto x = Complex(1.5, 0) * oracles::cos_loop(basis_element(alg, 2), 4);
  CHECK(loop_log_derivatives(exp_loop(x, 16)).aliased());
  CHECK_FALSE(loop_log_derivatives(exp_loop(x, 128)).aliased());
}

TEST_CASE("left momentum") {
  const auto alg = OrthogonalAlgebra::so3();
  std::mt19937_64 rng(71);
  const auto mu = random_loop(alg, 4, rng);

  // Identity base point: J^L = mu.
  const PhasePoint p0(GroupLoop::identity(alg, kGrid), mu, Complex(2, 0.5));
  CHECK(max_norm(momentum_left(p0) - mu) < 1e-10);

  // Constant base point: pure conjugation, the k-term drops.
  const auto a = random_element(alg, rng);
  const auto gc = exp_loop(LoopElement::constant(a), kGrid);
  const PhasePoint pc(gc, mu, Complex(3, 0));
  const auto jc = momentum_left(pc);
  const auto mu_mats = matrix_grid(mu, kGrid);
  std::vector<Eigen::MatrixXcd> expect(static_cast<std::size_t>(kGrid));
  for (int j = 0; j < kGrid; ++j)
    expect[static_cast<std::size_t>(j)] = gc.sample(j) *
                                          mu_mats[static_cast<std::size_t>(j)] *
                                          gc.sample(j).inverse();
  CHECK(matrix_field_distance(matrix_grid(jc, kGrid), expect) < 1e-9);

  // k = 0 on a generic loop: coadjoint transport only.
  const auto g = exp_loop(random_loop(alg, 4, rng), kGrid);
  const PhasePoint pz(g, mu, Complex(0, 0));
  const auto jz = momentum_left(pz);
  for (int j = 0; j < kGrid; ++j)
    expect[static_cast<std::size_t>(j)] = g.sample(j) *
                                          mu_mats[static_cast<std::size_t>(j)] *
                                          g.sample(j).inverse();
  CHECK(matrix_field_distance(matrix_grid(jz, kGrid), expect) < 1e-9);
}

TEST_CASE("right momentum") {
  const auto alg = OrthogonalAlgebra::sl2();
  std::mt19937_64 rng(73);
  const auto p = random_point(alg, Complex(1, 0), rng);
  CHECK(max_norm(momentum_right(p) + p.mu()) == 0.0);
  CHECK(max_norm(momentum_right(PhasePoint(p.g(), LoopElement::zero(alg), p.k()))) == 0.0);

  // The left action leaves the fiber alone.
  const auto h = exp_loop(random_loop(alg, 4, rng), kGrid);
  CHECK(max_norm(momentum_right(act_left(h, p)) - momentum_right(p)) == 0.0);
}

TEST_CASE("scalar momentum") {
  const auto alg = OrthogonalAlgebra::sl2();

  std::mt19937_64 rng(79);
  const auto gc = exp_loop(LoopElement::constant(random_element(alg, rng)), kGrid);
  CHECK(std::abs(momentum_scalar(PhasePoint(gc, random_loop(alg, 4, rng), Complex(1, 0)))) <
        1e-10);

  // mu = 0, g = exp(h sin x), real k: the quadratic term integrates to k pi.
  const auto g = exp_loop(oracles::sin_loop(basis_element(alg, 2), 1), kGrid);
  const double k = 2.0;
  const PhasePoint p(g, LoopElement::zero(alg), Complex(k, 0));
  CHECK(momentum_scalar(p) == doctest::Approx(k * kPi).epsilon(1e-9));
}

TEST_CASE("left action") {
  const auto alg = OrthogonalAlgebra::so3();
  std::mt19937_64 rng(83);
  const auto p = random_point(alg, Complex(1, 0.5), rng);
  const auto h1 = exp_loop(random_loop(alg, 3, rng), kGrid);
  const auto h2 = exp_loop(random_loop(alg, 3, rng), kGrid);

  CHECK(matrix_field_distance(act_left(GroupLoop::identity(alg, kGrid), p).g().samples(),
                              p.g().samples()) == 0.0);

  // Composition.
  std::vector<Eigen::MatrixXcd> prod(static_cast<std::size_t>(kGrid));
  for (int j = 0; j < kGrid; ++j)
    prod[static_cast<std::size_t>(j)] = h1.sample(j) * h2.sample(j);
  const auto lhs = act_left(h1, act_left(h2, p));
  const auto rhs = act_left(GroupLoop(alg, prod), p);
  CHECK(matrix_field_distance(lhs.g().samples(), rhs.g().samples()) < 1e-12);

  // Transformation of the left momentum, recomputed directly on the grid.
  const auto jl = momentum_left(p);
  const auto jl_mats = matrix_grid(jl, kGrid);
  const auto mc_h = loop_log_derivatives(h1);
  std::vector<Eigen::MatrixXcd> expect(static_cast<std::size_t>(kGrid));
  for (int j = 0; j < kGrid; ++j)
    expect[static_cast<std::size_t>(j)] =
        h1.sample(j) * jl_mats[static_cast<std::size_t>(j)] * h1.sample(j).inverse() +
        p.k() * mc_h.left[static_cast<std::size_t>(j)];
  CHECK(matrix_field_distance(matrix_grid(momentum_left(act_left(h1, p)), kGrid), expect) <
        1e-8);
}

TEST_CASE("right action") {
  const auto alg = OrthogonalAlgebra::sl2();
  std::mt19937_64 rng(89);
  const auto p = random_point(alg, Complex(1, 0.5), rng);
  const auto h = exp_loop(random_loop(alg, 3, rng), kGrid);

  const auto same = act_right(GroupLoop::identity(alg, kGrid), p);
  CHECK(matrix_field_distance(same.g().samples(), p.g().samples()) == 0.0);
  CHECK(max_norm(same.mu() - p.mu()) < 1e-12);

  // The left momentum is invariant under the right action.
  CHECK(max_norm(momentum_left(act_right(h, p)) - momentum_left(p)) < 1e-8);

  // Constant h: fiber conjugates with no k-term.
  const auto a = random_element(alg, rng);
  const auto hc = exp_loop(LoopElement::constant(a), kGrid);
  const auto moved = act_right(hc, p);
  const auto mu_mats = matrix_grid(p.mu(), kGrid);
  std::vector<Eigen::MatrixXcd> expect(static_cast<std::size_t>(kGrid));
  for (int j = 0; j < kGrid; ++j)
    expect[static_cast<std::size_t>(j)] = hc.sample(j) *
                                          mu_mats[static_cast<std::size_t>(j)] *
                                          hc.sample(j).inverse();
  CHECK(matrix_field_distance(matrix_grid(moved.mu(), kGrid), expect) < 1e-9);
}

TEST_CASE("flow curves") {
  const auto alg = OrthogonalAlgebra::sl2();
  std::mt19937_64 rng(97);
  const auto p = random_point(alg, Complex(1, 0), rng);
  const auto x = random_loop(alg, 4, rng);
  const Complex z(0.3, -0.2);

  const auto curves = flow_curves(p, x, z, 0.0);
  for (const PhasePoint* q : {&curves.left, &curves.right, &curves.central}) {
    CHECK(matrix_field_distance(q->g().samples(), p.g().samples()) < 1e-14);
    CHECK(max_norm(q->mu() - p.mu()) < 1e-14);
  }

  // Left curve leaves the right momentum alone.
  const auto moved = left_flow(p, x, 0.37);
  CHECK(max_norm(momentum_right(moved) - momentum_right(p)) == 0.0);

  // Central curve fiber is mu + t z mu', exactly.
  const double t = 0.21;
  const auto central = central_flow(p, z, t);
  CHECK(max_norm(central.mu() - (p.mu() + (t * z) * loop_derivative(p.mu()))) == 0.0);
}

TEST_CASE("poisson bracket of momentum functionals") {
  for (const auto& alg : {OrthogonalAlgebra::sl2(), OrthogonalAlgebra::so3()}) {
    std::mt19937_64 rng(0xA11FEE);
    for (const Complex k : {Complex(1, 0), Complex(1, 0.5)}) {
      const auto p = random_point(alg, k, rng);
      const auto x = random_loop(alg, 4, rng);
      const auto y = random_loop(alg, 4, rng);
      const auto lx = make_momentum_functional(FunctionalKind::left, x);
      const auto ly = make_momentum_functional(FunctionalKind::left, y);
      const auto rx = make_momentum_functional(FunctionalKind::right, x);
      const auto ry = make_momentum_functional(FunctionalKind::right, y);

      CHECK(std::abs(poisson(lx, lx, p)) < 1e-12);

      const double twist = std::real(k * loop_pair(x, loop_derivative(y)));
      const double ll = poisson(lx, ly, p);
      const double ll_expect =
          std::real(loop_pair(momentum_left(p), loop_bracket(x, y))) + twist;
      CHECK(std::abs(ll - ll_expect) < 1e-8);

      const double rr = poisson(rx, ry, p);
      const double rr_expect =
          std::real(loop_pair(momentum_right(p), loop_bracket(x, y))) - twist;
      CHECK(std::abs(rr - rr_expect) < 1e-8);

      CHECK(std::abs(poisson(lx, ry, p)) < 1e-8);
    }
  }
}

TEST_CASE("momentum functionals expose consistent values and derivatives") {
  const auto alg = OrthogonalAlgebra::sl2();
  std::mt19937_64 rng(101);
  const auto p = random_point(alg, Complex(1, 0.5), rng);
  const auto y = random_loop(alg, 4, rng);

  // The right functional is a plain pairing with -mu.
  const auto ry = make_momentum_functional(FunctionalKind::right, y);
  CHECK(ry.value(p) == doctest::Approx(std::real(loop_pair(-p.mu(), y))));

  // Fiber gradients match finite differences of the value in a random
  // fiber direction.
  const auto nu = random_loop(alg, 4, rng);
  for (const auto& f :
       {make_momentum_functional(FunctionalKind::left, y), ry,
        make_momentum_functional(FunctionalKind::scalar, Complex(0.7, -0.3))}) {
    const double fd = richardson_derivative([&](double t) {
      return f.value(PhasePoint(p.g(), p.mu() + Complex(t, 0) * nu, p.k()));
    });
    const double analytic = std::real(loop_pair(nu, f.fiber_grad(p)));
    CHECK(std::abs(fd - analytic) / std::max(1.0, std::abs(analytic)) < 1e-6);
  }

  // Base derivatives match finite differences along a left-translated curve.
  const auto x = random_loop(alg, 4, rng);
  const auto mats = matrix_grid(x, kGrid);
  std::vector<Eigen::MatrixXcd> conj(static_cast<std::size_t>(kGrid));
  for (int j = 0; j < kGrid; ++j)
    conj[static_cast<std::size_t>(j)] = p.g().sample(j).inverse() *
                                        mats[static_cast<std::size_t>(j)] *
                                        p.g().sample(j);
  const LoopElement dir = loop_from_matrix_grid(conj, alg);
  for (const auto& f :
       {make_momentum_functional(FunctionalKind::left, y), ry,
        make_momentum_functional(FunctionalKind::scalar, Complex(0.7, -0.3))}) {
    const double fd =
        richardson_derivative([&](double t) { return f.value(left_flow(p, x, t)); });
    const double analytic = f.base_deriv(p, dir);
    CHECK(std::abs(fd - analytic) / std::max(1.0, std::abs(analytic)) < 1e-6);
  }
}

TEST_CASE("base derivatives are linear in the direction") {
  const auto alg = OrthogonalAlgebra::so3();
  std::mt19937_64 rng(103);
  const auto p = random_point(alg, Complex(1, 0.5), rng);
  const auto y1 = random_loop(alg, 4, rng);
  const auto y2 = random_loop(alg, 4, rng);
  const double a = 1.7, b = -0.6;
  const LoopElement combo = Complex(a, 0) * y1 + Complex(b, 0) * y2;
  for (const auto& f :
       {make_momentum_functional(FunctionalKind::left, random_loop(alg, 4, rng)),
        make_momentum_functional(FunctionalKind::right, random_loop(alg, 4, rng)),
        make_momentum_functional(FunctionalKind::scalar, Complex(0.4, 0.9))}) {
    const double lhs = f.base_deriv(p, combo);
    const double rhs = a * f.base_deriv(p, y1) + b * f.base_deriv(p, y2);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("momentum functional kind and weight must match") {
  const auto alg = OrthogonalAlgebra::sl2();
  const auto x = LoopElement::zero(alg);
  CHECK_THROWS_AS(make_momentum_functional(FunctionalKind::scalar, x), MismatchError);
  CHECK_THROWS_AS(make_momentum_functional(FunctionalKind::left, Complex(1, 0)),
                  MismatchError);
}

TEST_CASE("momentum equations for the three actions") {
  const auto alg = OrthogonalAlgebra::sl2();
  std::mt19937_64 rng(0xFEED);
  for (const Complex k : {Complex(1, 0), Complex(1, 0.5)}) {
    const auto p = random_point(alg, k, rng);
    const auto phi = make_momentum_functional(FunctionalKind::left, random_loop(alg, 4, rng)) +
                     make_momentum_functional(FunctionalKind::right, random_loop(alg, 4, rng)) +
                     make_momentum_functional(FunctionalKind::scalar, unit_disc(rng));
    const auto x = random_loop(alg, 4, rng);
    CHECK(momentum_equation_residual(FunctionalKind::left, x, phi, p) < 1e-6);
    CHECK(momentum_equation_residual(FunctionalKind::right, x, phi, p) < 1e-6);
    CHECK(momentum_equation_residual(FunctionalKind::scalar, unit_disc(rng), phi, p) < 1e-6);

    // The commuting pairs stay flat along each other's flows.
    const auto jr = make_momentum_functional(FunctionalKind::right, random_loop(alg, 4, rng));
    const auto jl = make_momentum_functional(FunctionalKind::left, random_loop(alg, 4, rng));
    CHECK(momentum_equation_residual(FunctionalKind::left, x, jr, p) < 1e-6);
    CHECK(momentum_equation_residual(FunctionalKind::right, x, jl, p) < 1e-6);
  }
}

TEST_CASE("scalar momentum identity") {
  const auto alg = OrthogonalAlgebra::so3();
  std::mt19937_64 rng(0xC0FFEE);
  for (const Complex k : {Complex(1, 0), Complex(1, 0.5), Complex(-0.4, 0.9)}) {
    const auto p = random_point(alg, k, rng);
    CHECK(scalar_momentum_identity_residual(p) < 1e-8);
  }

  const auto p0 = random_point(alg, Complex(0, 0), rng);
  CHECK_THROWS_AS(scalar_momentum_identity_residual(p0), DivisionByCenterError);
}

TEST_CASE("combined momentum and the composite invariant") {
  const auto alg = OrthogonalAlgebra::sl2();
  std::mt19937_64 rng(0xDADA);
  const Complex k(1, 0.5);

  // Identity base point: S = (0, mu, k).
  const auto mu = random_loop(alg, 4, rng);
  const PhasePoint p0(GroupLoop::identity(alg, kGrid), mu, k);
  const auto s0 = combined_momentum(p0);
  CHECK(std::abs(s0.alpha) < 1e-12);
  CHECK(max_norm(s0.xi - mu) < 1e-10);
  CHECK(s0.e == k);

  for (int t = 0; t < 5; ++t) {
    const auto p = random_point(alg, k, rng);
    CHECK(kappa_composite_residual(p) < 1e-8);

    // Left invariance of the composite.
    const auto h = exp_loop(random_loop(alg, 4, rng), kGrid);
    CHECK(std::abs(kappa(combined_momentum(act_left(h, p))) -
                   kappa(combined_momentum(p))) < 1e-8);
  }

  // k = 0, constant base point: both sides are -1/2 integral (mu, mu).
  const PhasePoint pz(GroupLoop::identity(alg, kGrid), mu, Complex(0, 0));
  CHECK(kappa_composite_residual(pz) < 1e-10);
}

TEST_CASE("cocycle relation") {
  const auto alg = OrthogonalAlgebra::sl2();
  std::mt19937_64 rng(0xABCD);
  const Complex k(1, 0);
  const auto p = random_point(alg, k, rng);

  // Pure loop weights on constants: bracket with vanishing cocycle.
  const auto xc = LoopElement::constant(random_element(alg, rng));
  const auto yc = LoopElement::constant(random_element(alg, rng));
  CHECK(cocycle_relation_residual(Complex(0, 0), xc, Complex(0, 0), yc, p) < 1e-8);

  // z = 1 against a pure loop: the compatibility of the reparametrization
  // and left actions at the Poisson level.
  const auto y = random_loop(alg, 4, rng);
  CHECK(cocycle_relation_residual(Complex(1, 0), LoopElement::zero(alg), Complex(0, 0), y,
                                  p) < 1e-8);

  // The central coordinates a and b never enter.
  const auto x = random_loop(alg, 4, rng);
  const Complex z(0.4, 0.1), zeta(-0.3, 0.7);
  const double r1 = cocycle_relation_residual(z, x, zeta, y, p, Complex(5, -2), Complex(0, 3));
  const double r2 = cocycle_relation_residual(z, x, zeta, y, p, Complex(-1, 1), Complex(9, 9));
  CHECK(r1 == r2);
  CHECK(r1 < 1e-8);
}

TEST_CASE("independence of the two momentum maps") {
  const auto alg = OrthogonalAlgebra::so3();
  std::mt19937_64 rng(0x5EED);
  const auto p = random_point(alg, Complex(1, 0), rng);

  const auto zero = LoopElement::zero(alg);
  CHECK(independence_residual(zero, zero, random_loop(alg, 4, rng),
                              random_loop(alg, 4, rng), p) < 1e-10);
  CHECK(independence_residual(random_loop(alg, 4, rng), random_loop(alg, 4, rng), zero,
                              zero, p) < 1e-10);
  for (int t = 0; t < 3; ++t) {
    CHECK(independence_residual(random_loop(alg, 4, rng), random_loop(alg, 4, rng),
                                random_loop(alg, 4, rng), random_loop(alg, 4, rng), p) <
          1e-6);
  }
}

TEST_CASE("twist form") {
  const auto alg = OrthogonalAlgebra::sl2();
  std::mt19937_64 rng(0x7777);
  const auto g = exp_loop(random_loop(alg, 3, rng), kGrid);

  const auto x = random_loop(alg, 4, rng);
  const auto yc = LoopElement::constant(random_element(alg, rng));
  CHECK(std::abs(omega_twist(g, x, yc, Complex(1, 0))) == 0.0);

  const auto y = random_loop(alg, 4, rng);
  CHECK(std::abs(omega_twist(g, x, y, Complex(1, 0.5)) +
                 omega_twist(g, y, x, Complex(1, 0.5))) < 1e-12);

  // Same integral as the cocycle example: pi.
  const auto ec = oracles::cos_loop(basis_element(alg, 0), 1);
  const auto fs = oracles::sin_loop(basis_element(alg, 1), 1);
  CHECK(omega_twist(g, ec, fs, Complex(1, 0)) == doctest::Approx(kPi));
}

TEST_CASE("group loop construction guards") {
  const auto alg = OrthogonalAlgebra::sl2();
  // A singular sample is rejected.
  std::vector<Eigen::MatrixXcd> bad(4, Eigen::MatrixXcd::Identity(2, 2));
  bad[2] = Eigen::MatrixXcd::Zero(2, 2);
  CHECK_THROWS_AS(GroupLoop(alg, bad), ConstraintViolationError);

  // Grid size must be a power of two.
  std::vector<Eigen::MatrixXcd> odd(3, Eigen::MatrixXcd::Identity(2, 2));
  CHECK_THROWS_AS(GroupLoop(alg, odd), Error);

  // A determinant away from one violates the SL constraint.
  std::vector<Eigen::MatrixXcd> scaled(4, 2.0 * Eigen::MatrixXcd::Identity(2, 2));
  CHECK_THROWS_AS(GroupLoop(alg, scaled), ConstraintViolationError);

  // Fiber band must stay below Nyquist.
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(PhasePoint(GroupLoop::identity(alg, 8), random_loop(alg, 4, rng),
                             Complex(1, 0)),
                  AliasError);
}
