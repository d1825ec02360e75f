// Acceptance suite: drives the verification engine at desk scale over both
// built-in algebras and prints one pass/fail line per criterion. Exits
// nonzero if any criterion fails.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "affinv/verify.hpp"

using affinv::Complex;
using namespace affinv::verify;

namespace {

int g_failures = 0;

struct GroupStat {
  int count = 0;
  int failed = 0;
  double worst = 0.0;
};

GroupStat stat_for(const SuiteReport& report, const std::string& suite,
                   const std::string& group) {
  GroupStat out;
  for (const auto& c : report.cases) {
    if (c.suite != suite) continue;
    if (c.id.find(group) == std::string::npos) continue;
    ++out.count;
    if (!c.pass) ++out.failed;
    out.worst = std::max(out.worst, c.residual);
  }
  return out;
}

void criterion(int number, bool ok, const std::string& description,
               const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", number,
              description.c_str(), detail.c_str());
  if (!ok) ++g_failures;
}

std::string worst_of(const std::vector<GroupStat>& stats) {
  double w = 0.0;
  int n = 0;
  for (const auto& s : stats) {
    w = std::max(w, s.worst);
    n += s.count;
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%d cases, worst residual %.3e", n, w);
  return buf;
}

bool all_pass(const std::vector<GroupStat>& stats) {
  for (const auto& s : stats)
    if (s.count == 0 || s.failed > 0) return false;
  return true;
}

}  // namespace

int main() {
  SuiteConfig base;  // band 4, grid 128, trials 50, seed 0xA11FEE, k in {1, 1+0.5i}

  std::map<std::string, SuiteReport> reports;
  for (const std::string algebra : {"sl2", "so3"}) {
    SuiteConfig cfg = base;
    cfg.algebra = algebra;
    reports.emplace(algebra, run_suites(cfg));
  }
  const SuiteReport& sl2 = reports.at("sl2");
  const SuiteReport& so3 = reports.at("so3");

  // 1. Form invariance on 200 random triples per built-in algebra, 1e-12.
  {
    const auto a = stat_for(sl2, "algebra", "ad_invariance");
    const auto b = stat_for(so3, "algebra", "ad_invariance");
    criterion(1, all_pass({a, b}) && a.count == 200 && b.count == 200,
              "form invariance residual < 1e-12 on 200 triples (sl2, so3)",
              worst_of({a, b}));
  }

  // 2. Jacobi identity of the affine bracket on 100 triples, 1e-10.
  {
    const auto a = stat_for(sl2, "affine", "jacobi");
    const auto b = stat_for(so3, "affine", "jacobi");
    criterion(2, all_pass({a, b}) && a.count == 100 && b.count == 100,
              "affine bracket Jacobi residual < 1e-10 on 100 triples", worst_of({a, b}));
  }

  // 3. Coadjoint duality, 1e-10.
  {
    const auto a = stat_for(sl2, "affine", "coadjoint_duality");
    const auto b = stat_for(so3, "affine", "coadjoint_duality");
    criterion(3, all_pass({a, b}), "coadjoint action is minus the dual of the bracket",
              worst_of({a, b}));
  }

  // 4. Invariance witnesses for kappa (1e-10) and the center projection
  //    (exact), plus a non-invariant control functional.
  {
    const auto ka = stat_for(sl2, "affine", "kappa_invariance");
    const auto kb = stat_for(so3, "affine", "kappa_invariance");
    const auto ca = stat_for(sl2, "affine", "center_invariance");
    const auto cb = stat_for(so3, "affine", "center_invariance");
    const auto wa = stat_for(sl2, "affine", "noninvariant_witness");
    const auto wb = stat_for(so3, "affine", "noninvariant_witness");
    const bool exact_center = ca.worst == 0.0 && cb.worst == 0.0;
    criterion(4,
              all_pass({ka, kb, ca, cb, wa, wb}) && ka.count == 100 && kb.count == 100 &&
                  exact_center,
              "kappa and center invariant on 100 samples, linear functional is not",
              worst_of({ka, kb}));
  }

  // 5. Gradient of kappa against finite differences, relative error 1e-6.
  {
    const auto a = stat_for(sl2, "affine", "kappa_gradient");
    const auto b = stat_for(so3, "affine", "kappa_gradient");
    criterion(5, all_pass({a, b}), "kappa gradient matches finite differences",
              worst_of({a, b}));
  }

  // 6. Momentum bracket relations for both k values, 1e-8.
  {
    std::vector<GroupStat> stats;
    for (const auto* rep : {&sl2, &so3})
      for (const std::string group :
           {"bracket_left_left", "bracket_right_right", "bracket_left_right"})
        stats.push_back(stat_for(*rep, "phase", group));
    criterion(6, all_pass(stats),
              "momentum Poisson relations < 1e-8 for k in {1, 1+0.5i}", worst_of(stats));
  }

  // 7. Momentum equations for the three actions, 1e-6.
  {
    std::vector<GroupStat> stats;
    for (const auto* rep : {&sl2, &so3})
      for (const std::string group :
           {"momentum_eq_left", "momentum_eq_right", "momentum_eq_central"})
        stats.push_back(stat_for(*rep, "phase", group));
    criterion(7, all_pass(stats),
              "momentum equations: flow derivative vs Poisson bracket < 1e-6",
              worst_of(stats));
  }

  // 8. Scalar momentum identity for k != 0 plus the k = 0 guard.
  {
    std::vector<GroupStat> stats;
    for (const auto* rep : {&sl2, &so3}) {
      stats.push_back(stat_for(*rep, "phase", "scalar_identity/"));
      stats.push_back(stat_for(*rep, "phase", "scalar_identity_guard"));
    }
    criterion(8, all_pass(stats),
              "scalar momentum identity < 1e-8; k = 0 raises DivisionByCenter",
              worst_of(stats));
  }

  // 9. Composite invariant: kappa after the combined momentum map equals
  //    the right-momentum quadratic and is left invariant, 1e-8.
  {
    std::vector<GroupStat> stats;
    for (const auto* rep : {&sl2, &so3}) {
      stats.push_back(stat_for(*rep, "phase", "kappa_composite/"));
      stats.push_back(stat_for(*rep, "phase", "kappa_composite_invariance"));
    }
    criterion(9, all_pass(stats),
              "kappa of the combined momentum: quadratic identity and left invariance",
              worst_of(stats));
  }

  // 10. Equivariance cocycle relation incl. the z != 0 specialization and
  //     independence of the central coordinates.
  {
    std::vector<GroupStat> stats;
    for (const auto* rep : {&sl2, &so3}) {
      stats.push_back(stat_for(*rep, "phase", "cocycle_relation"));
      stats.push_back(stat_for(*rep, "phase", "cocycle_central"));
      stats.push_back(stat_for(*rep, "phase", "cocycle_level_independence"));
    }
    criterion(10, all_pass(stats),
              "cocycle relation < 1e-8, central slots immaterial to 1e-12",
              worst_of(stats));
  }

  // 11. Independence formula against finite differences, 1e-6.
  {
    const auto a = stat_for(sl2, "phase", "/independence/");
    const auto b = stat_for(so3, "phase", "/independence/");
    criterion(11, all_pass({a, b}),
              "momentum independence formula matches finite differences",
              worst_of({a, b}));
  }

  // 12. Mutation check: each suite must fail when its defining formula is
  //     perturbed by 1e-3.
  {
    const struct {
      Mutation mutation;
      const char* suite;
    } plan[] = {
        {Mutation::structure_constant, "algebra"},
        {Mutation::loop_pair_scale, "loop"},
        {Mutation::affine_cocycle_scale, "affine"},
        {Mutation::kappa_gradient_scale, "affine"},
        {Mutation::poisson_twist_scale, "phase"},
        {Mutation::momentum_left_scale, "phase"},
        {Mutation::scalar_momentum_scale, "phase"},
    };
    bool ok = true;
    std::string detail;
    for (const auto& entry : plan) {
      SuiteConfig cfg = base;
      cfg.trials = 8;
      cfg.mutation = entry.mutation;
      cfg.suite_filter = entry.suite;
      const auto report = run_suites(cfg);
      const bool flipped = report.failed() > 0;
      ok = ok && flipped;
      if (!detail.empty()) detail += ", ";
      detail += to_string(entry.mutation) + (flipped ? ": flipped" : ": MISSED");
    }
    criterion(12, ok, "every identity suite detects a 1e-3 formula perturbation",
              detail);
  }

  std::printf("%s: %d criterion failure(s)\n", g_failures == 0 ? "OK" : "FAILED",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
