#include "affinv/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "affinv/affine.hpp"
#include "affinv/finite_difference.hpp"
#include "affinv/loop_fourier.hpp"
#include "affinv/phase_space.hpp"
#include "affinv/rng.hpp"
#include "affinv/serialization.hpp"
#include "affinv/version.hpp"

namespace affinv::verify {

namespace {

constexpr double kMutationEps = 1e-3;
constexpr double kFailureResidual = 1e300;
constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

std::string trial_id(const std::string& group, int trial) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", trial);
  return group + "/" + buf;
}

/// Per-case random source. Every drawn value is folded into an FNV-1a
/// digest so the report can fingerprint the exact inputs of a case.
struct CaseRng {
  std::mt19937_64 rng;
  std::uint64_t hash = kFnvOffset;

  explicit CaseRng(std::uint64_t seed) : rng(seed) {}

  void fold(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) {
      hash ^= (bits >> (8 * i)) & 0xFFu;
      hash *= kFnvPrime;
    }
  }

  double uniform() {
    const double v = uniform_unit(rng);
    fold(v);
    return v;
  }

  double symmetric(double half_width) { return half_width * (2.0 * uniform() - 1.0); }

  Complex disc() {
    const Complex c = unit_disc(rng);
    fold(c.real());
    fold(c.imag());
    return c;
  }

  AlgebraElement element(const AlgebraPtr& alg) {
    AlgebraElement e = random_element(alg, rng);
    for (Eigen::Index i = 0; i < e.coeffs.size(); ++i) {
      fold(e.coeffs(i).real());
      fold(e.coeffs(i).imag());
    }
    return e;
  }

  LoopElement loop(const AlgebraPtr& alg, int band) {
    LoopElement l = random_loop(alg, band, rng);
    for (int n = -l.band(); n <= l.band(); ++n) {
      const Eigen::VectorXcd m = l.mode(n);
      for (Eigen::Index i = 0; i < m.size(); ++i) {
        fold(m(i).real());
        fold(m(i).imag());
      }
    }
    return l;
  }

  AffineVector vector(const AlgebraPtr& alg, int band) {
    const Complex z = disc();
    LoopElement x = loop(alg, band);
    const Complex a = disc();
    return {z, std::move(x), a};
  }

  AffineCovector covector(const AlgebraPtr& alg, int band) {
    const Complex alpha = disc();
    LoopElement xi = loop(alg, band);
    const Complex e = disc();
    return {alpha, std::move(xi), e};
  }

  std::string digest() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
  }
};

struct Fixtures {
  AlgebraPtr alg;
  SuiteConfig cfg;

  double eps(Mutation m) const { return cfg.mutation == m ? kMutationEps : 0.0; }
};
using FxPtr = std::shared_ptr<const Fixtures>;

struct CaseDef {
  std::string suite;
  std::string id;
  double tol;
  std::function<double(CaseRng&, std::string& note)> eval;
};

LoopElement conjugate_by_inverse(const GroupLoop& h, const LoopElement& x) {
  const int grid = h.grid_size();
  const auto mats = matrix_grid(x, grid);
  std::vector<Eigen::MatrixXcd> out(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j) {
    const auto& hj = h.sample(j);
    out[static_cast<std::size_t>(j)] =
        hj.inverse() * mats[static_cast<std::size_t>(j)] * hj;
  }
  return loop_from_matrix_grid(out, h.algebra());
}

// ---------------------------------------------------------------------------
// algebra suite

void add_algebra_cases(std::vector<CaseDef>& out, const FxPtr& fx) {
  const auto& cfg = fx->cfg;
  for (int t = 0; t < 4 * cfg.trials; ++t) {
    out.push_back({"algebra", trial_id("ad_invariance", t), cfg.tol_exact,
                   [fx](CaseRng& ctx, std::string&) {
                     const auto x = ctx.element(fx->alg);
                     const auto y = ctx.element(fx->alg);
                     const auto z = ctx.element(fx->alg);
                     return std::abs(inner(x, bracket(y, z)) - inner(bracket(x, y), z));
                   }});
  }
  for (int t = 0; t < 4 * cfg.trials; ++t) {
    out.push_back({"algebra", trial_id("jacobi", t), cfg.tol_exact,
                   [fx](CaseRng& ctx, std::string&) {
                     const auto x = ctx.element(fx->alg);
                     const auto y = ctx.element(fx->alg);
                     const auto z = ctx.element(fx->alg);
                     const AlgebraElement sum = bracket(x, bracket(y, z)) +
                                                bracket(y, bracket(z, x)) +
                                                bracket(z, bracket(x, y));
                     return sum.coeffs.cwiseAbs().maxCoeff();
                   }});
  }
  for (int t = 0; t < cfg.trials; ++t) {
    out.push_back({"algebra", trial_id("matrix_consistency", t), cfg.tol_exact,
                   [fx](CaseRng& ctx, std::string&) {
                     const auto x = ctx.element(fx->alg);
                     const auto y = ctx.element(fx->alg);
                     const Eigen::MatrixXcd mx = fx->alg->to_matrix(x.coeffs);
                     const Eigen::MatrixXcd my = fx->alg->to_matrix(y.coeffs);
                     const Eigen::MatrixXcd lhs = fx->alg->to_matrix(bracket(x, y).coeffs);
                     return Eigen::MatrixXcd(lhs - (mx * my - my * mx))
                         .cwiseAbs()
                         .maxCoeff();
                   }});
  }
}

// ---------------------------------------------------------------------------
// loop suite

void add_loop_cases(std::vector<CaseDef>& out, const FxPtr& fx) {
  const auto& cfg = fx->cfg;
  for (int t = 0; t < cfg.trials; ++t) {
    out.push_back({"loop", trial_id("cocycle_antisymmetry", t), cfg.tol_exact,
                   [fx](CaseRng& ctx, std::string&) {
                     const auto x = ctx.loop(fx->alg, fx->cfg.band);
                     const auto y = ctx.loop(fx->alg, fx->cfg.band);
                     return std::abs(central_cocycle(x, y) + central_cocycle(y, x));
                   }});
  }
  for (int t = 0; t < cfg.trials; ++t) {
    out.push_back({"loop", trial_id("pair_symmetry", t), cfg.tol_exact,
                   [fx](CaseRng& ctx, std::string&) {
                     const auto xi = ctx.loop(fx->alg, fx->cfg.band);
                     const auto x = ctx.loop(fx->alg, fx->cfg.band);
                     return std::abs(loop_pair(xi, x) - loop_pair(x, xi));
                   }});
  }
  for (int t = 0; t < cfg.trials; ++t) {
    out.push_back({"loop", trial_id("invariance_lift", t), cfg.tol_exact,
                   [fx](CaseRng& ctx, std::string&) {
                     const auto x = ctx.loop(fx->alg, fx->cfg.band);
                     const auto y = ctx.loop(fx->alg, fx->cfg.band);
                     const auto z = ctx.loop(fx->alg, fx->cfg.band);
                     return std::abs(loop_pair(x, loop_bracket(y, z)) -
                                     loop_pair(loop_bracket(x, y), z));
                   }});
  }
  for (int t = 0; t < cfg.trials; ++t) {
    out.push_back({"loop", trial_id("derivation_rule", t), cfg.tol_exact,
                   [fx](CaseRng& ctx, std::string&) {
                     const auto x = ctx.loop(fx->alg, fx->cfg.band);
                     const auto y = ctx.loop(fx->alg, fx->cfg.band);
                     const LoopElement defect =
                         loop_derivative(loop_bracket(x, y)) -
                         loop_bracket(loop_derivative(x), y) -
                         loop_bracket(x, loop_derivative(y));
                     return max_norm(defect);
                   }});
  }
  for (int t = 0; t < cfg.trials; ++t) {
    // Fourier-exact pairing against the rectangle rule; spectrally exact
    // below Nyquist, so this pins both transform conventions at once.
    out.push_back({"loop", trial_id("grid_agreement", t), 100.0 * cfg.tol_exact,
                   [fx](CaseRng& ctx, std::string&) {
                     const int band = 8;
                     const auto xi = ctx.loop(fx->alg, band);
                     const auto x = ctx.loop(fx->alg, band);
                     const Complex exact =
                         (1.0 + fx->eps(Mutation::loop_pair_scale)) * loop_pair(xi, x);
                     const int grid = fx->cfg.grid;
                     const auto sx = to_grid(xi, grid);
                     const auto sy = to_grid(x, grid);
                     Complex quad = 0;
                     for (int j = 0; j < grid; ++j)
                       quad += fx->alg->inner_coords(sx[static_cast<std::size_t>(j)],
                                                     sy[static_cast<std::size_t>(j)]);
                     quad *= 2.0 * std::numbers::pi / static_cast<double>(grid);
                     return std::abs(exact - quad);
                   }});
  }
}

// ---------------------------------------------------------------------------
// affine suite

void add_affine_cases(std::vector<CaseDef>& out, const FxPtr& fx) {
  const auto& cfg = fx->cfg;
  for (int t = 0; t < 2 * cfg.trials; ++t) {
    out.push_back({"affine", trial_id("jacobi", t), 100.0 * cfg.tol_exact,
                   [fx](CaseRng& ctx, std::string&) {
                     const auto u = ctx.vector(fx->alg, fx->cfg.band);
                     const auto v = ctx.vector(fx->alg, fx->cfg.band);
                     const auto w = ctx.vector(fx->alg, fx->cfg.band);
                     const AffineVector sum = affine_bracket(u, affine_bracket(v, w)) +
                                              affine_bracket(v, affine_bracket(w, u)) +
                                              affine_bracket(w, affine_bracket(u, v));
                     return affine_max_norm(sum);
                   }});
  }
  for (int t = 0; t < 2 * cfg.trials; ++t) {
    out.push_back({"affine", trial_id("coadjoint_duality", t), 100.0 * cfg.tol_exact,
                   [fx](CaseRng& ctx, std::string&) {
                     const auto u = ctx.vector(fx->alg, fx->cfg.band);
                     const auto v = ctx.vector(fx->alg, fx->cfg.band);
                     const auto mu = ctx.covector(fx->alg, fx->cfg.band);
                     AffineVector br = affine_bracket(u, v);
                     br.a *= 1.0 + fx->eps(Mutation::affine_cocycle_scale);
                     return std::abs(dual_pair(ad_star(u, mu), v) + dual_pair(mu, br));
                   }});
  }
  for (int t = 0; t < cfg.trials; ++t) {
    out.push_back(
        {"affine", trial_id("kappa_gradient", t), cfg.tol_fd,
         [fx](CaseRng& ctx, std::string&) {
           const auto mu = ctx.covector(fx->alg, fx->cfg.band);
           AffineVector grad = kappa_gradient(mu);
           grad.x = (1.0 + fx->eps(Mutation::kappa_gradient_scale)) * grad.x;

           // Central differences over a complete set of real coordinate
           // directions, compared through the duality pairing.
           const double h = 1e-5;
           double worst = 0.0, scale = 0.0;
           const auto probe = [&](const AffineCovector& nu) {
             const Complex fd =
                 (kappa(mu + Complex(h, 0) * nu) - kappa(mu - Complex(h, 0) * nu)) /
                 (2.0 * h);
             const double analytic = dual_pair(nu, grad);
             worst = std::max(worst, std::abs(fd.real() - analytic));
             scale = std::max(scale, std::abs(analytic));
           };
           const LoopElement zero = LoopElement::zero(fx->alg);
           for (const Complex unit : {Complex(1, 0), Complex(0, 1)}) {
             probe({unit, zero, Complex(0, 0)});
             probe({Complex(0, 0), zero, unit});
             for (int n = -fx->cfg.band; n <= fx->cfg.band; ++n)
               for (int c = 0; c < fx->alg->dim(); ++c)
                 probe({Complex(0, 0),
                        LoopElement::single_mode(unit * basis_element(fx->alg, c), n),
                        Complex(0, 0)});
           }
           return worst / std::max(scale, 1.0);
         }});
  }
  for (int t = 0; t < cfg.trials; ++t) {
    out.push_back({"affine", trial_id("kappa_quadratic", t), cfg.tol_exact,
                   [fx](CaseRng& ctx, std::string&) {
                     const auto mu = ctx.covector(fx->alg, fx->cfg.band);
                     const double s = ctx.symmetric(2.0);
                     return std::abs(kappa(Complex(s, 0) * mu) - s * s * kappa(mu));
                   }});
  }
  for (int t = 0; t < 2 * cfg.trials; ++t) {
    out.push_back({"affine", trial_id("kappa_invariance", t), 100.0 * cfg.tol_exact,
                   [fx](CaseRng& ctx, std::string&) {
                     const auto u = ctx.vector(fx->alg, fx->cfg.band);
                     const auto mu = ctx.covector(fx->alg, fx->cfg.band);
                     const double eps = fx->eps(Mutation::kappa_gradient_scale);
                     const GradientMap grad = [eps](const AffineCovector& m) {
                       AffineVector g = kappa_gradient(m);
                       g.x = (1.0 + eps) * g.x;
                       return g;
                     };
                     return invariance_residual(grad, u, mu);
                   }});
  }
  for (int t = 0; t < 2 * cfg.trials; ++t) {
    // The center projection must be conserved exactly, not just to
    // tolerance: its gradient points along the central ideal.
    out.push_back({"affine", trial_id("center_invariance", t),
                   std::numeric_limits<double>::denorm_min(),
                   [fx](CaseRng& ctx, std::string&) {
                     const auto u = ctx.vector(fx->alg, fx->cfg.band);
                     const auto mu = ctx.covector(fx->alg, fx->cfg.band);
                     const GradientMap grad = [fx](const AffineCovector&) {
                       return AffineVector{Complex(0, 0), LoopElement::zero(fx->alg),
                                           Complex(1, 0)};
                     };
                     return invariance_residual(grad, u, mu);
                   }});
  }
  out.push_back(
      {"affine", "noninvariant_witness", 0.5,
       [fx](CaseRng& ctx, std::string& note) {
         // A generic linear functional must fail invariance visibly on at
         // least one sample, otherwise the invariance checks prove nothing.
         const LoopElement x0 = ctx.loop(fx->alg, fx->cfg.band);
         const GradientMap grad = [x0, fx](const AffineCovector&) {
           return AffineVector{Complex(0, 0), x0, Complex(0, 0)};
         };
         double worst = 0.0;
         for (int s = 0; s < 2 * fx->cfg.trials; ++s) {
           const auto u = ctx.vector(fx->alg, fx->cfg.band);
           const auto mu = ctx.covector(fx->alg, fx->cfg.band);
           worst = std::max(worst, invariance_residual(grad, u, mu));
         }
         std::ostringstream oss;
         oss << "max residual " << worst << " (want > 1e-3)";
         note = oss.str();
         return worst > 1e-3 ? 0.0 : 1.0;
       }});
}

// ---------------------------------------------------------------------------
// phase suite

/// Functional in the momentum family, closed under the Poisson bracket up
/// to constants. Keeping the closure analytic lets the Jacobi check run
/// entirely on formula gradients.
struct FamilyFunctional {
  LoopElement left_w;
  LoopElement right_w;
  Complex scalar_w;

  AdmissibleFunction admissible() const {
    return make_momentum_functional(FunctionalKind::left, left_w) +
           make_momentum_functional(FunctionalKind::right, right_w) +
           make_momentum_functional(FunctionalKind::scalar, scalar_w);
  }
};

FamilyFunctional family_bracket(const FamilyFunctional& a, const FamilyFunctional& b) {
  LoopElement left = loop_bracket(a.left_w, b.left_w) +
                     a.scalar_w * loop_derivative(b.left_w) -
                     b.scalar_w * loop_derivative(a.left_w);
  LoopElement right = loop_bracket(a.right_w, b.right_w) +
                      a.scalar_w * loop_derivative(b.right_w) -
                      b.scalar_w * loop_derivative(a.right_w);
  return {std::move(left), std::move(right), Complex(0, 0)};
}

void add_phase_cases(std::vector<CaseDef>& out, const FxPtr& fx) {
  const auto& cfg = fx->cfg;

  const auto sample_point = [fx](CaseRng& ctx, Complex k) {
    GroupLoop g = exp_loop(ctx.loop(fx->alg, fx->cfg.band), fx->cfg.grid);
    LoopElement mu = ctx.loop(fx->alg, fx->cfg.band);
    return PhasePoint(std::move(g), std::move(mu), k);
  };
  const auto sample_family = [fx](CaseRng& ctx) {
    LoopElement l = ctx.loop(fx->alg, fx->cfg.band);
    LoopElement r = ctx.loop(fx->alg, fx->cfg.band);
    const Complex z = ctx.disc();
    return FamilyFunctional{std::move(l), std::move(r), z};
  };
  // Poisson bracket with the twist term optionally rescaled; this is where
  // the poisson_twist mutation lands.
  const auto poisson_checked = [fx](const AdmissibleFunction& phi,
                                    const AdmissibleFunction& psi, const PhasePoint& p) {
    double value = poisson(phi, psi, p);
    const double eps = fx->eps(Mutation::poisson_twist_scale);
    if (eps != 0.0)
      value -= eps * std::real(p.k() * loop_pair(phi.fiber_grad(p),
                                                 loop_derivative(psi.fiber_grad(p))));
    return value;
  };

  for (std::size_t ki = 0; ki < cfg.k_values.size(); ++ki) {
    const Complex k = cfg.k_values[ki];
    const std::string tag = "k" + std::to_string(ki) + "/";

    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back({"phase", trial_id(tag + "poisson_antisymmetry", t),
                     100.0 * cfg.tol_exact, [fx, k, sample_point, sample_family](
                                                CaseRng& ctx, std::string&) {
                       const PhasePoint p = sample_point(ctx, k);
                       const auto phi = sample_family(ctx).admissible();
                       const auto psi = sample_family(ctx).admissible();
                       return std::abs(poisson(phi, psi, p) + poisson(psi, phi, p));
                     }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back({"phase", trial_id(tag + "poisson_bilinearity", t),
                     100.0 * cfg.tol_exact, [fx, k, sample_point, sample_family](
                                                CaseRng& ctx, std::string&) {
                       const PhasePoint p = sample_point(ctx, k);
                       const auto phi1 = sample_family(ctx).admissible();
                       const auto phi2 = sample_family(ctx).admissible();
                       const auto psi = sample_family(ctx).admissible();
                       const double a = ctx.symmetric(2.0);
                       const double b = ctx.symmetric(2.0);
                       return std::abs(poisson(a * phi1 + b * phi2, psi, p) -
                                       a * poisson(phi1, psi, p) -
                                       b * poisson(phi2, psi, p));
                     }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back({"phase", trial_id(tag + "poisson_jacobi", t), 10.0 * cfg.tol_grid,
                     [fx, k, sample_point, sample_family](CaseRng& ctx, std::string&) {
                       const PhasePoint p = sample_point(ctx, k);
                       const auto f1 = sample_family(ctx);
                       const auto f2 = sample_family(ctx);
                       const auto f3 = sample_family(ctx);
                       const double sum =
                           poisson(f1.admissible(), family_bracket(f2, f3).admissible(), p) +
                           poisson(f2.admissible(), family_bracket(f3, f1).admissible(), p) +
                           poisson(f3.admissible(), family_bracket(f1, f2).admissible(), p);
                       return std::abs(sum);
                     }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back({"phase", trial_id(tag + "bracket_left_left", t), cfg.tol_grid,
                     [fx, k, sample_point, poisson_checked](CaseRng& ctx, std::string&) {
                       const PhasePoint p = sample_point(ctx, k);
                       const auto x = ctx.loop(fx->alg, fx->cfg.band);
                       const auto y = ctx.loop(fx->alg, fx->cfg.band);
                       const auto phi = make_momentum_functional(FunctionalKind::left, x);
                       const auto psi = make_momentum_functional(FunctionalKind::left, y);
                       const double lhs = poisson_checked(phi, psi, p);
                       const double rhs =
                           std::real(loop_pair(momentum_left(p), loop_bracket(x, y))) +
                           std::real(k * loop_pair(x, loop_derivative(y)));
                       return std::abs(lhs - rhs);
                     }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back({"phase", trial_id(tag + "bracket_right_right", t), cfg.tol_grid,
                     [fx, k, sample_point, poisson_checked](CaseRng& ctx, std::string&) {
                       const PhasePoint p = sample_point(ctx, k);
                       const auto x = ctx.loop(fx->alg, fx->cfg.band);
                       const auto y = ctx.loop(fx->alg, fx->cfg.band);
                       const auto phi = make_momentum_functional(FunctionalKind::right, x);
                       const auto psi = make_momentum_functional(FunctionalKind::right, y);
                       const double lhs = poisson_checked(phi, psi, p);
                       const double rhs =
                           std::real(loop_pair(momentum_right(p), loop_bracket(x, y))) -
                           std::real(k * loop_pair(x, loop_derivative(y)));
                       return std::abs(lhs - rhs);
                     }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back({"phase", trial_id(tag + "bracket_left_right", t), cfg.tol_grid,
                     [fx, k, sample_point, poisson_checked](CaseRng& ctx, std::string&) {
                       const PhasePoint p = sample_point(ctx, k);
                       const auto x = ctx.loop(fx->alg, fx->cfg.band);
                       const auto y = ctx.loop(fx->alg, fx->cfg.band);
                       const auto phi = make_momentum_functional(FunctionalKind::left, x);
                       const auto psi = make_momentum_functional(FunctionalKind::right, y);
                       return std::abs(poisson_checked(phi, psi, p));
                     }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back(
          {"phase", trial_id(tag + "symplectic_left_action", t), cfg.tol_grid,
           [fx, k, sample_point](CaseRng& ctx, std::string&) {
             const PhasePoint p = sample_point(ctx, k);
             const GroupLoop h = exp_loop(ctx.loop(fx->alg, fx->cfg.band), fx->cfg.grid);
             const auto xl = ctx.loop(fx->alg, fx->cfg.band);
             const auto xr = ctx.loop(fx->alg, fx->cfg.band);
             const auto yl = ctx.loop(fx->alg, fx->cfg.band);
             const auto yr = ctx.loop(fx->alg, fx->cfg.band);
             const auto phi = make_momentum_functional(FunctionalKind::left, xl) +
                              make_momentum_functional(FunctionalKind::right, xr);
             const auto psi = make_momentum_functional(FunctionalKind::left, yl) +
                              make_momentum_functional(FunctionalKind::right, yr);
             // Pullback along the left action: the left weight conjugates,
             // the right weight is untouched, constants drop out.
             const auto phi_h =
                 make_momentum_functional(FunctionalKind::left, conjugate_by_inverse(h, xl)) +
                 make_momentum_functional(FunctionalKind::right, xr);
             const auto psi_h =
                 make_momentum_functional(FunctionalKind::left, conjugate_by_inverse(h, yl)) +
                 make_momentum_functional(FunctionalKind::right, yr);
             return std::abs(poisson(phi_h, psi_h, p) - poisson(phi, psi, act_left(h, p)));
           }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back({"phase", trial_id(tag + "momentum_eq_left", t), cfg.tol_fd,
                     [fx, k, sample_point, sample_family](CaseRng& ctx, std::string&) {
                       const PhasePoint p = sample_point(ctx, k);
                       const auto phi = sample_family(ctx).admissible();
                       const auto x = ctx.loop(fx->alg, fx->cfg.band);
                       return momentum_equation_residual(FunctionalKind::left, x, phi, p);
                     }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back({"phase", trial_id(tag + "momentum_eq_right", t), cfg.tol_fd,
                     [fx, k, sample_point, sample_family](CaseRng& ctx, std::string&) {
                       const PhasePoint p = sample_point(ctx, k);
                       const auto phi = sample_family(ctx).admissible();
                       const auto x = ctx.loop(fx->alg, fx->cfg.band);
                       return momentum_equation_residual(FunctionalKind::right, x, phi, p);
                     }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back({"phase", trial_id(tag + "momentum_eq_central", t), cfg.tol_fd,
                     [fx, k, sample_point, sample_family](CaseRng& ctx, std::string&) {
                       const PhasePoint p = sample_point(ctx, k);
                       const auto phi = sample_family(ctx).admissible();
                       const Complex z = ctx.disc();
                       return momentum_equation_residual(FunctionalKind::scalar, z, phi, p);
                     }});
    }
    if (k != Complex(0, 0)) {
      for (int t = 0; t < cfg.trials; ++t) {
        out.push_back(
            {"phase", trial_id(tag + "scalar_identity", t), cfg.tol_grid,
             [fx, k, sample_point](CaseRng& ctx, std::string&) {
               const PhasePoint p = sample_point(ctx, k);
               LoopElement jl = momentum_left(p);
               const double eps_left = fx->eps(Mutation::momentum_left_scale);
               if (eps_left != 0.0)
                 jl = jl + (eps_left * k) * left_log_derivative_loop(p.g());
               Complex scalar = momentum_scalar_complex(p);
               const double eps_scalar = fx->eps(Mutation::scalar_momentum_scale);
               if (eps_scalar != 0.0) {
                 const LoopElement r = right_log_derivative_loop(p.g());
                 scalar += eps_scalar * 0.5 * k * loop_pair(r, r);
               }
               const LoopElement jr = momentum_right(p);
               const Complex quad = (loop_pair(jl, jl) - loop_pair(jr, jr)) / (2.0 * k);
               return std::abs(std::real(scalar) - std::real(quad));
             }});
      }
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back(
          {"phase", trial_id(tag + "kappa_composite", t), cfg.tol_grid,
           [fx, k, sample_point](CaseRng& ctx, std::string&) {
             const PhasePoint p = sample_point(ctx, k);
             AffineCovector s = combined_momentum(p);
             const double eps_left = fx->eps(Mutation::momentum_left_scale);
             if (eps_left != 0.0)
               s.xi = s.xi + (eps_left * k) * left_log_derivative_loop(p.g());
             const LoopElement jr = momentum_right(p);
             return std::abs(kappa(s) + 0.5 * loop_pair(jr, jr));
           }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back({"phase", trial_id(tag + "kappa_composite_invariance", t), cfg.tol_grid,
                     [fx, k, sample_point](CaseRng& ctx, std::string&) {
                       const PhasePoint p = sample_point(ctx, k);
                       const GroupLoop h =
                           exp_loop(ctx.loop(fx->alg, fx->cfg.band), fx->cfg.grid);
                       return std::abs(kappa(combined_momentum(act_left(h, p))) -
                                       kappa(combined_momentum(p)));
                     }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back({"phase", trial_id(tag + "cocycle_relation", t), cfg.tol_grid,
                     [fx, k, sample_point](CaseRng& ctx, std::string&) {
                       const PhasePoint p = sample_point(ctx, k);
                       const Complex z = ctx.disc();
                       const auto x = ctx.loop(fx->alg, fx->cfg.band);
                       const Complex zeta = ctx.disc();
                       const auto y = ctx.loop(fx->alg, fx->cfg.band);
                       const Complex a = ctx.disc();
                       const Complex b = ctx.disc();
                       return cocycle_relation_residual(z, x, zeta, y, p, a, b);
                     }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      // z = 1 against a pure loop weight: the specialization that pins the
      // compatibility of the reparametrization and left actions.
      out.push_back({"phase", trial_id(tag + "cocycle_central", t), cfg.tol_grid,
                     [fx, k, sample_point](CaseRng& ctx, std::string&) {
                       const PhasePoint p = sample_point(ctx, k);
                       const auto y = ctx.loop(fx->alg, fx->cfg.band);
                       return cocycle_relation_residual(Complex(1, 0),
                                                        LoopElement::zero(fx->alg),
                                                        Complex(0, 0), y, p);
                     }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back({"phase", trial_id(tag + "cocycle_level_independence", t),
                     cfg.tol_exact,
                     [fx, k, sample_point](CaseRng& ctx, std::string&) {
                       const PhasePoint p = sample_point(ctx, k);
                       const Complex z = ctx.disc();
                       const auto x = ctx.loop(fx->alg, fx->cfg.band);
                       const Complex zeta = ctx.disc();
                       const auto y = ctx.loop(fx->alg, fx->cfg.band);
                       const double r1 = cocycle_relation_residual(
                           z, x, zeta, y, p, ctx.disc(), ctx.disc());
                       const double r2 = cocycle_relation_residual(
                           z, x, zeta, y, p, ctx.disc(), ctx.disc());
                       return std::abs(r1 - r2);
                     }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back({"phase", trial_id(tag + "independence", t), cfg.tol_fd,
                     [fx, k, sample_point](CaseRng& ctx, std::string&) {
                       const PhasePoint p = sample_point(ctx, k);
                       const auto xi = ctx.loop(fx->alg, fx->cfg.band);
                       const auto eta = ctx.loop(fx->alg, fx->cfg.band);
                       const auto x = ctx.loop(fx->alg, fx->cfg.band);
                       const auto nu = ctx.loop(fx->alg, fx->cfg.band);
                       return independence_residual(xi, eta, x, nu, p);
                     }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back(
          {"phase", trial_id(tag + "fiber_gradient", t), cfg.tol_fd,
           [fx, k, sample_point](CaseRng& ctx, std::string&) {
             const PhasePoint p = sample_point(ctx, k);
             const auto nu = ctx.loop(fx->alg, fx->cfg.band);
             double worst = 0.0;
             const auto probe = [&](const AdmissibleFunction& f) {
               const double fd = richardson_derivative([&](double t) {
                 return f.value(PhasePoint(p.g(), p.mu() + Complex(t, 0) * nu, p.k()));
               });
               const double analytic = std::real(loop_pair(nu, f.fiber_grad(p)));
               worst = std::max(worst,
                                std::abs(fd - analytic) / std::max(1.0, std::abs(analytic)));
             };
             probe(make_momentum_functional(FunctionalKind::left,
                                            ctx.loop(fx->alg, fx->cfg.band)));
             probe(make_momentum_functional(FunctionalKind::right,
                                            ctx.loop(fx->alg, fx->cfg.band)));
             probe(make_momentum_functional(FunctionalKind::scalar, ctx.disc()));
             return worst;
           }});
    }
    for (int t = 0; t < cfg.trials; ++t) {
      out.push_back(
          {"phase", trial_id(tag + "base_derivative", t), cfg.tol_fd,
           [fx, k, sample_point](CaseRng& ctx, std::string&) {
             const PhasePoint p = sample_point(ctx, k);
             const auto x = ctx.loop(fx->alg, fx->cfg.band);
             // d/dt phi(e^{tX} g, mu) equals the base derivative in the
             // direction g^{-1} X g.
             const LoopElement dir = conjugate_by_inverse(p.g(), x);
             double worst = 0.0;
             const auto probe = [&](const AdmissibleFunction& f) {
               const double fd = richardson_derivative(
                   [&](double t) { return f.value(left_flow(p, x, t)); });
               const double analytic = f.base_deriv(p, dir);
               worst = std::max(worst,
                                std::abs(fd - analytic) / std::max(1.0, std::abs(analytic)));
             };
             probe(make_momentum_functional(FunctionalKind::left,
                                            ctx.loop(fx->alg, fx->cfg.band)));
             probe(make_momentum_functional(FunctionalKind::right,
                                            ctx.loop(fx->alg, fx->cfg.band)));
             probe(make_momentum_functional(FunctionalKind::scalar, ctx.disc()));
             return worst;
           }});
    }
  }

  // Level-zero guard, once.
  out.push_back({"phase", "scalar_identity_guard", 0.5,
                 [fx, sample_point](CaseRng& ctx, std::string& note) {
                   const PhasePoint p = sample_point(ctx, Complex(0, 0));
                   try {
                     scalar_momentum_identity_residual(p);
                   } catch (const DivisionByCenterError&) {
                     return 0.0;
                   }
                   note = "expected DivisionByCenterError at k = 0";
                   return 1.0;
                 }});
}

// ---------------------------------------------------------------------------
// report plumbing

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

int suite_rank(const std::string& suite) {
  if (suite == "algebra") return 0;
  if (suite == "loop") return 1;
  if (suite == "affine") return 2;
  if (suite == "phase") return 3;
  return 4;
}

}  // namespace

std::string to_string(Mutation m) {
  switch (m) {
    case Mutation::none: return "none";
    case Mutation::structure_constant: return "structure_constant";
    case Mutation::loop_pair_scale: return "loop_pair_scale";
    case Mutation::affine_cocycle_scale: return "affine_cocycle_scale";
    case Mutation::kappa_gradient_scale: return "kappa_gradient_scale";
    case Mutation::poisson_twist_scale: return "poisson_twist_scale";
    case Mutation::momentum_left_scale: return "momentum_left_scale";
    case Mutation::scalar_momentum_scale: return "scalar_momentum_scale";
  }
  return "none";
}

Mutation mutation_from_string(const std::string& text) {
  for (Mutation m : {Mutation::none, Mutation::structure_constant,
                     Mutation::loop_pair_scale, Mutation::affine_cocycle_scale,
                     Mutation::kappa_gradient_scale, Mutation::poisson_twist_scale,
                     Mutation::momentum_left_scale, Mutation::scalar_momentum_scale}) {
    if (to_string(m) == text) return m;
  }
  throw ConfigError("unknown mutation: " + text);
}

void SuiteConfig::validate() const {
  if (algebra.empty()) throw ConfigError("algebra must be set");
  if (band < 0) throw ConfigError("band must be nonnegative");
  if (!is_power_of_two(grid)) throw ConfigError("grid must be a power of two");
  if (grid <= 4 * band)
    throw ConfigError("grid must exceed four times the band to keep bracket "
                      "results below Nyquist");
  if (trials <= 0) throw ConfigError("trials must be positive");
  if (k_values.empty()) throw ConfigError("at least one k value is required");
  if (tol_exact <= 0 || tol_grid <= 0 || tol_fd <= 0)
    throw ConfigError("tolerances must be positive");
}

int SuiteReport::passed() const {
  int n = 0;
  for (const auto& c : cases) n += c.pass ? 1 : 0;
  return n;
}

SuiteReport run_suites(const SuiteConfig& cfg) {
  cfg.validate();

  SuiteReport report;
  report.version = kVersion;
  report.config = cfg;

  const auto admitted = [&cfg](const std::string& suite, const std::string& id) {
    if (!cfg.suite_filter.empty() && suite.find(cfg.suite_filter) == std::string::npos)
      return false;
    if (!cfg.case_filter.empty() && id != cfg.case_filter) return false;
    return true;
  };

  // Algebra construction is itself the first case: a mathematically invalid
  // input algebra must show up as a failure, not a crash. Config-level
  // problems (missing file, bad JSON) still throw.
  CaseRecord construction;
  construction.suite = "algebra";
  construction.id = "construction";
  construction.seed_offset = 0;
  construction.digest = "0000000000000000";
  construction.tol = cfg.tol_exact;
  AlgebraPtr alg;
  try {
    alg = OrthogonalAlgebra::named(cfg.algebra);
    construction.residual = 0.0;
    construction.pass = true;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    construction.residual = kFailureResidual;
    construction.pass = false;
    construction.note = e.what();
  }

  if (!alg) {
    report.cases.push_back(std::move(construction));
    return report;
  }

  if (cfg.mutation == Mutation::structure_constant && alg->dim() >= 2) {
    std::vector<Eigen::MatrixXcd> structure;
    structure.reserve(static_cast<std::size_t>(alg->dim()));
    for (int kk = 0; kk < alg->dim(); ++kk) structure.push_back(alg->structure_matrix(kk));
    structure[0](0, 1) += kMutationEps;
    structure[0](1, 0) -= kMutationEps;
    alg = OrthogonalAlgebra::from_components(alg->basis(), std::move(structure),
                                             alg->form(), alg->name() + "+fault",
                                             alg->group(), /*validate=*/false);
  }

  if (admitted(construction.suite, construction.id) || !construction.pass)
    report.cases.push_back(construction);

  auto fx = std::make_shared<const Fixtures>(Fixtures{alg, cfg});
  std::vector<CaseDef> defs;
  add_algebra_cases(defs, fx);
  add_loop_cases(defs, fx);
  add_affine_cases(defs, fx);
  add_phase_cases(defs, fx);

  for (std::size_t i = 0; i < defs.size(); ++i) {
    const auto& def = defs[i];
    if (!admitted(def.suite, def.id)) continue;
    CaseRecord rec;
    rec.suite = def.suite;
    rec.id = def.id;
    rec.seed_offset = i + 1;  // ordinal 0 belongs to construction
    rec.tol = def.tol;
    CaseRng ctx(derive_seed(cfg.seed, rec.seed_offset));
    try {
      rec.residual = def.eval(ctx, rec.note);
      rec.pass = rec.residual < rec.tol;
    } catch (const std::exception& e) {
      rec.residual = kFailureResidual;
      rec.pass = false;
      rec.note = e.what();
    }
    rec.digest = ctx.digest();
    report.cases.push_back(std::move(rec));
  }

  std::stable_sort(report.cases.begin(), report.cases.end(),
                   [](const CaseRecord& a, const CaseRecord& b) {
                     return suite_rank(a.suite) < suite_rank(b.suite);
                   });
  return report;
}

std::string report_to_json(const SuiteReport& report) {
  std::string out;
  out += "{\n";
  out += "  \"version\": \"" + json_escape(report.version) + "\",\n";

  const auto& cfg = report.config;
  out += "  \"config\": {\n";
  out += "    \"algebra\": \"" + json_escape(cfg.algebra) + "\",\n";
  out += "    \"band\": " + std::to_string(cfg.band) + ",\n";
  out += "    \"grid\": " + std::to_string(cfg.grid) + ",\n";
  out += "    \"trials\": " + std::to_string(cfg.trials) + ",\n";
  out += "    \"seed\": " + std::to_string(cfg.seed) + ",\n";
  out += "    \"k_values\": [";
  for (std::size_t i = 0; i < cfg.k_values.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + format_complex(cfg.k_values[i]) + "\"";
  }
  out += "],\n";
  out += "    \"tol_exact\": " + fmt_double(cfg.tol_exact) + ",\n";
  out += "    \"tol_grid\": " + fmt_double(cfg.tol_grid) + ",\n";
  out += "    \"tol_fd\": " + fmt_double(cfg.tol_fd) + ",\n";
  out += "    \"suite_filter\": \"" + json_escape(cfg.suite_filter) + "\",\n";
  out += "    \"case_filter\": \"" + json_escape(cfg.case_filter) + "\",\n";
  out += "    \"mutation\": \"" + to_string(cfg.mutation) + "\"\n";
  out += "  },\n";

  out += "  \"cases\": [";
  for (std::size_t i = 0; i < report.cases.size(); ++i) {
    const auto& c = report.cases[i];
    out += i ? ",\n    " : "\n    ";
    out += "{\"suite\": \"" + json_escape(c.suite) + "\", \"case\": \"" +
           json_escape(c.id) + "\", \"seed_offset\": " + std::to_string(c.seed_offset) +
           ", \"digest\": \"" + c.digest + "\", \"residual\": " + fmt_double(c.residual) +
           ", \"tol\": " + fmt_double(c.tol) +
           ", \"pass\": " + (c.pass ? "true" : "false") + ", \"note\": \"" +
           json_escape(c.note) + "\"}";
  }
  out += report.cases.empty() ? "],\n" : "\n  ],\n";

  out += "  \"summary\": {\"total\": " + std::to_string(report.total()) +
         ", \"passed\": " + std::to_string(report.passed()) +
         ", \"failed\": " + std::to_string(report.failed()) + "}\n";
  out += "}\n";
  return out;
}

void emit_report(const SuiteReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open report path: " + path);
  out << report_to_json(report);
  if (!out) throw Error("failed writing report: " + path);
}

SuiteReport parse_report_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("cannot parse report: ") + e.what());
  }
  SuiteReport report;
  report.version = doc.at("version").get<std::string>();
  const auto& jc = doc.at("config");
  report.config.algebra = jc.at("algebra").get<std::string>();
  report.config.band = jc.at("band").get<int>();
  report.config.grid = jc.at("grid").get<int>();
  report.config.trials = jc.at("trials").get<int>();
  report.config.seed = jc.at("seed").get<std::uint64_t>();
  report.config.k_values.clear();
  for (const auto& kv : jc.at("k_values"))
    report.config.k_values.push_back(parse_complex(kv.get<std::string>()));
  report.config.tol_exact = jc.at("tol_exact").get<double>();
  report.config.tol_grid = jc.at("tol_grid").get<double>();
  report.config.tol_fd = jc.at("tol_fd").get<double>();
  report.config.suite_filter = jc.at("suite_filter").get<std::string>();
  report.config.case_filter = jc.at("case_filter").get<std::string>();
  report.config.mutation = mutation_from_string(jc.at("mutation").get<std::string>());
  for (const auto& jcase : doc.at("cases")) {
    CaseRecord rec;
    rec.suite = jcase.at("suite").get<std::string>();
    rec.id = jcase.at("case").get<std::string>();
    rec.seed_offset = jcase.at("seed_offset").get<std::uint64_t>();
    rec.digest = jcase.at("digest").get<std::string>();
    rec.residual = jcase.at("residual").get<double>();
    rec.tol = jcase.at("tol").get<double>();
    rec.pass = jcase.at("pass").get<bool>();
    rec.note = jcase.at("note").get<std::string>();
    report.cases.push_back(std::move(rec));
  }
  const auto& js = doc.at("summary");
  if (js.at("total").get<int>() != report.total() ||
      js.at("passed").get<int>() != report.passed() ||
      js.at("failed").get<int>() != report.failed())
    throw Error("report summary does not match its case records");
  return report;
}

SuiteReport load_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open report path: " + path);
  std::ostringstream oss;
  oss << in.rdbuf();
  return parse_report_text(oss.str());
}

void print_table(const SuiteReport& report, std::ostream& os) {
  struct GroupStat {
    int count = 0;
    int passed = 0;
    double worst = 0.0;
    double tol = 0.0;
    int rank = 0;
  };
  std::map<std::pair<std::string, std::string>, GroupStat> groups;
  for (const auto& c : report.cases) {
    std::string group = c.id;
    if (const auto slash = group.rfind('/'); slash != std::string::npos)
      group = group.substr(0, slash);
    auto& stat = groups[{c.suite, group}];
    ++stat.count;
    stat.passed += c.pass ? 1 : 0;
    stat.worst = std::max(stat.worst, c.residual);
    stat.tol = std::max(stat.tol, c.tol);
    stat.rank = suite_rank(c.suite);
  }

  std::vector<std::pair<std::pair<std::string, std::string>, GroupStat>> rows(
      groups.begin(), groups.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second.rank != b.second.rank) return a.second.rank < b.second.rank;
    return a.first < b.first;
  });

  os << std::left << std::setw(9) << "suite" << std::setw(34) << "identity"
     << std::right << std::setw(6) << "cases" << std::setw(14) << "worst"
     << std::setw(12) << "tol" << "  result\n";
  os << std::string(80, '-') << "\n";
  for (const auto& [key, stat] : rows) {
    os << std::left << std::setw(9) << key.first << std::setw(34) << key.second
       << std::right << std::setw(6) << stat.count << std::setw(14)
       << std::scientific << std::setprecision(2) << stat.worst << std::setw(12)
       << stat.tol << "  " << (stat.passed == stat.count ? "ok" : "FAIL") << "\n";
  }
  os << std::string(80, '-') << "\n";
  os << report.total() << " cases: " << report.passed() << " passed, "
     << report.failed() << " failed\n";

  if (report.failed() > 0) {
    os << "\nfailing cases:\n";
    for (const auto& c : report.cases) {
      if (c.pass) continue;
      os << "  " << c.suite << "/" << c.id << "  residual " << std::scientific
         << std::setprecision(6) << c.residual << "  tol " << c.tol
         << "  seed_offset " << c.seed_offset;
      if (!c.note.empty()) os << "  (" << c.note << ")";
      os << "\n";
    }
  }
  os.unsetf(std::ios::floatfield);
}

}  // namespace affinv::verify
