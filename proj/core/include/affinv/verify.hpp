#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "affinv/orthogonal_algebra.hpp"

namespace affinv::verify {

/// Deliberate 1e-3 perturbations of the formulas under test, one per
/// identity family. Running a suite with its matching mutation must flip
/// at least one case to failing; this is how the harness proves its own
/// checks are not vacuous. The core library is never touched: mutations
/// are injected where the suite assembles each identity.
enum class Mutation {
  none,
  structure_constant,   // one structure constant entry shifted
  loop_pair_scale,      // Fourier-side pairing scaled in the grid agreement check
  affine_cocycle_scale, // central slot of the affine bracket scaled
  kappa_gradient_scale, // loop slot of grad kappa scaled
  poisson_twist_scale,  // twist term of the Poisson bracket scaled
  momentum_left_scale,  // k-term of the left momentum scaled
  scalar_momentum_scale // quadratic term of the scalar momentum scaled
};

std::string to_string(Mutation m);
Mutation mutation_from_string(const std::string& text);

struct SuiteConfig {
  std::string algebra = "sl2";  // "sl2", "so3" or a JSON file path
  int band = 4;
  int grid = 128;
  int trials = 50;  // per identity
  std::uint64_t seed = 0xA11FEE;
  std::vector<Complex> k_values = {Complex(1, 0), Complex(1, 0.5)};
  double tol_exact = 1e-12;
  double tol_grid = 1e-8;
  double tol_fd = 1e-6;
  std::string suite_filter;  // substring match on suite name; empty = all
  std::string case_filter;   // exact case id; empty = all
  Mutation mutation = Mutation::none;

  /// Throws ConfigError on violated constraints (grid a power of two and
  /// above four times the band, positive tolerances and counts).
  void validate() const;
};

struct CaseRecord {
  std::string suite;
  std::string id;
  std::uint64_t seed_offset = 0;
  std::string digest;  // FNV-1a over the case's sampled inputs
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

struct SuiteReport {
  std::string version;
  SuiteConfig config;
  std::vector<CaseRecord> cases;

  int total() const { return static_cast<int>(cases.size()); }
  int passed() const;
  int failed() const { return total() - passed(); }
  bool all_passed() const { return failed() == 0; }
};

/// Runs every identity suite admitted by the filters, in the fixed order
/// algebra, loop, affine, phase. Deterministic for a given config: each
/// case draws from a sub-seed derived from (seed, case ordinal), so
/// filtering does not change any case's inputs. Constructor failures of a
/// configured algebra surface as a failed construction case, not a crash.
SuiteReport run_suites(const SuiteConfig& cfg);

/// Report as a JSON document with deterministic bytes; residuals and
/// tolerances carry 17 significant digits.
std::string report_to_json(const SuiteReport& report);

/// Writes report_to_json to a file. Throws Error on I/O failure.
void emit_report(const SuiteReport& report, const std::string& path);

/// Parses a document produced by report_to_json.
SuiteReport parse_report_text(const std::string& text);
SuiteReport load_report(const std::string& path);

/// Per-identity summary table plus failing cases, for terminal output.
void print_table(const SuiteReport& report, std::ostream& os);

}  // namespace affinv::verify
