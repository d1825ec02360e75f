#pragma once

#include <complex>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "affinv/errors.hpp"

namespace affinv {

using Complex = std::complex<double>;

class OrthogonalAlgebra;
using AlgebraPtr = std::shared_ptr<const OrthogonalAlgebra>;

/// Finite-dimensional complex Lie algebra carrying an invariant symmetric
/// nondegenerate bilinear form, realized by a basis of square matrices.
///
/// The bracket is encoded by structure constants, [b_i, b_j] = sum_k
/// c_ij^k b_k with c_ij^k stored as structure_matrix(k)(i, j), and the form
/// by form()(i, j) = tr(b_i b_j). Keeping the form equal to the trace form
/// of the realization is what makes the coadjoint action on loop fibers a
/// plain matrix conjugation later on.
///
/// Instances are immutable after construction and shared through
/// AlgebraPtr; element operations check that both operands point to the
/// same instance.
class OrthogonalAlgebra {
 public:
  enum class MatrixGroup { special_linear, special_orthogonal, general_linear };

  /// sl(2,C) with basis (e, f, h) and the trace form.
  static AlgebraPtr sl2();

  /// so(3,C) with the standard rotation generators and the trace form.
  static AlgebraPtr so3();

  /// Builds the algebra spanned by the given matrices. Structure constants
  /// are extracted by least-squares expansion of commutators in the basis
  /// (closure residual must stay below 1e-10), the form is the trace form.
  /// Throws NotClosedError when a commutator leaves the span and
  /// DegenerateFormError when the trace form is singular on the span.
  static AlgebraPtr from_matrices(std::vector<Eigen::MatrixXcd> basis,
                                  std::string name = "custom");

  /// Loads basis matrices from a JSON file: an object with an optional
  /// "name" and a "basis" array of matrices given as nested arrays of
  /// [re, im] pairs. File or schema problems raise ConfigError; the math
  /// checks are those of from_matrices.
  static AlgebraPtr from_json_file(const std::string& path);

  /// Assembles an algebra from precomputed components. With validate set,
  /// every type invariant is checked; without it the data is taken as-is,
  /// which is how test harnesses inject deliberately corrupted structure
  /// constants.
  static AlgebraPtr from_components(std::vector<Eigen::MatrixXcd> basis,
                                    std::vector<Eigen::MatrixXcd> structure,
                                    Eigen::MatrixXcd form, std::string name,
                                    MatrixGroup group, bool validate);

  /// Resolves "sl2", "so3" or a path to a JSON file.
  static AlgebraPtr named(const std::string& name_or_path);

  int dim() const { return dim_; }
  int matrix_dim() const { return matrix_dim_; }
  const std::string& name() const { return name_; }
  MatrixGroup group() const { return group_; }
  const Eigen::MatrixXcd& basis_matrix(int i) const { return basis_[static_cast<std::size_t>(i)]; }
  const std::vector<Eigen::MatrixXcd>& basis() const { return basis_; }
  const Eigen::MatrixXcd& form() const { return form_; }

  /// c_ij^k = structure_matrix(k)(i, j).
  const Eigen::MatrixXcd& structure_matrix(int k) const {
    return structure_[static_cast<std::size_t>(k)];
  }

  /// Bracket in coordinates: out_k = x^T C_k y.
  Eigen::VectorXcd bracket_coords(const Eigen::VectorXcd& x,
                                  const Eigen::VectorXcd& y) const;

  /// Complex-bilinear symmetric form: x^T B y (no conjugation).
  Complex inner_coords(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const;

  /// Matrix realization of a coordinate vector.
  Eigen::MatrixXcd to_matrix(const Eigen::VectorXcd& coords) const;

  /// Coordinates of a matrix in the span of the basis (B^{-1} applied to
  /// the vector of traces). Components orthogonal to the span are dropped.
  Eigen::VectorXcd to_coords(const Eigen::MatrixXcd& m) const;

  /// Distance of a matrix from the built-in group constraint: |det - 1|
  /// for SL, the orthogonality defect for SO, 0 for the generic case.
  double group_constraint_residual(const Eigen::MatrixXcd& g) const;

  /// Checks every type invariant (antisymmetry, Jacobi, form symmetry and
  /// condition, ad-invariance, consistency with the matrix realization).
  void validate() const;

 private:
  OrthogonalAlgebra(std::vector<Eigen::MatrixXcd> basis,
                    std::vector<Eigen::MatrixXcd> structure,
                    Eigen::MatrixXcd form, std::string name, MatrixGroup group);

  std::string name_;
  MatrixGroup group_;
  int dim_;
  int matrix_dim_;
  std::vector<Eigen::MatrixXcd> basis_;
  std::vector<Eigen::MatrixXcd> structure_;
  Eigen::MatrixXcd form_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> form_lu_;
};

inline bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) { return a.get() == b.get(); }
void require_same_algebra(const AlgebraPtr& a, const AlgebraPtr& b, const char* what);

/// Element of an OrthogonalAlgebra in basis coordinates.
struct AlgebraElement {
  AlgebraPtr algebra;
  Eigen::VectorXcd coeffs;

  static AlgebraElement zero(const AlgebraPtr& algebra);
};

/// i-th basis vector as an element.
AlgebraElement basis_element(const AlgebraPtr& algebra, int i);

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);
Complex inner(const AlgebraElement& x, const AlgebraElement& y);

/// Coefficients drawn uniformly from the unit disc.
AlgebraElement random_element(const AlgebraPtr& algebra, std::mt19937_64& rng);

AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement operator-(const AlgebraElement& x);
AlgebraElement operator*(Complex c, const AlgebraElement& x);
inline AlgebraElement operator*(const AlgebraElement& x, Complex c) { return c * x; }

}  // namespace affinv
