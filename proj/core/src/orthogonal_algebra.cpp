#include "affinv/orthogonal_algebra.hpp"

#include <cmath>
#include <fstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "affinv/rng.hpp"

namespace affinv {

namespace {

constexpr double kExactTol = 1e-12;
constexpr double kClosureTol = 1e-10;
constexpr double kConditionTol = 1e-10;

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

}  // namespace

OrthogonalAlgebra::OrthogonalAlgebra(std::vector<Eigen::MatrixXcd> basis,
                                     std::vector<Eigen::MatrixXcd> structure,
                                     Eigen::MatrixXcd form, std::string name,
                                     MatrixGroup group)
    : name_(std::move(name)),
      group_(group),
      dim_(static_cast<int>(basis.size())),
      matrix_dim_(static_cast<int>(basis.empty() ? 0 : basis.front().rows())),
      basis_(std::move(basis)),
      structure_(std::move(structure)),
      form_(std::move(form)),
      form_lu_(form_) {}

AlgebraPtr OrthogonalAlgebra::from_components(std::vector<Eigen::MatrixXcd> basis,
                                              std::vector<Eigen::MatrixXcd> structure,
                                              Eigen::MatrixXcd form, std::string name,
                                              MatrixGroup group, bool validate) {
  AlgebraPtr algebra(new OrthogonalAlgebra(std::move(basis), std::move(structure),
                                           std::move(form), std::move(name), group));
  if (validate) algebra->validate();
  return algebra;
}

AlgebraPtr OrthogonalAlgebra::from_matrices(std::vector<Eigen::MatrixXcd> basis,
                                            std::string name) {
  const int d = static_cast<int>(basis.size());
  if (d == 0) throw std::invalid_argument("empty basis");
  const auto m = basis.front().rows();
  for (const auto& b : basis) {
    if (b.rows() != m || b.cols() != m)
      throw std::invalid_argument("basis matrices must be square and of equal size");
  }

  Eigen::MatrixXcd span(m * m, d);
  for (int i = 0; i < d; ++i) span.col(i) = vectorize(basis[static_cast<std::size_t>(i)]);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(span, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= kClosureTol * sv(0))
    throw std::invalid_argument("basis matrices are linearly dependent");

  // Expand each commutator in the basis by least squares; a residual means
  // the span is not a subalgebra.
  std::vector<Eigen::MatrixXcd> structure(
      static_cast<std::size_t>(d), Eigen::MatrixXcd::Zero(d, d));
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const Eigen::MatrixXcd comm =
          basis[static_cast<std::size_t>(i)] * basis[static_cast<std::size_t>(j)] -
          basis[static_cast<std::size_t>(j)] * basis[static_cast<std::size_t>(i)];
      const Eigen::VectorXcd rhs = vectorize(comm);
      const Eigen::VectorXcd c = svd.solve(rhs);
      if ((span * c - rhs).cwiseAbs().maxCoeff() > kClosureTol)
        throw NotClosedError("commutator of basis matrices " + std::to_string(i) +
                             ", " + std::to_string(j) + " leaves the span");
      for (int k = 0; k < d; ++k) {
        structure[static_cast<std::size_t>(k)](i, j) = c(k);
        structure[static_cast<std::size_t>(k)](j, i) = -c(k);
      }
    }
  }

  Eigen::MatrixXcd form(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      form(i, j) = (basis[static_cast<std::size_t>(i)] * basis[static_cast<std::size_t>(j)])
                       .trace();

  return from_components(std::move(basis), std::move(structure), std::move(form),
                         std::move(name), MatrixGroup::general_linear, true);
}

AlgebraPtr OrthogonalAlgebra::sl2() {
  static const AlgebraPtr instance = [] {
    Eigen::MatrixXcd e(2, 2), f(2, 2), h(2, 2);
    e << 0, 1, 0, 0;
    f << 0, 0, 1, 0;
    h << 1, 0, 0, -1;
    std::vector<Eigen::MatrixXcd> basis = {e, f, h};

    const int d = 3;
    std::vector<Eigen::MatrixXcd> structure(d, Eigen::MatrixXcd::Zero(d, d));
    // [e,f] = h, [e,h] = -2e, [f,h] = 2f
    structure[2](0, 1) = 1;
    structure[2](1, 0) = -1;
    structure[0](0, 2) = -2;
    structure[0](2, 0) = 2;
    structure[1](1, 2) = 2;
    structure[1](2, 1) = -2;

    Eigen::MatrixXcd form(d, d);
    form << 0, 1, 0, 1, 0, 0, 0, 0, 2;

    return from_components(std::move(basis), std::move(structure), std::move(form),
                           "sl2", MatrixGroup::special_linear, true);
  }();
  return instance;
}

AlgebraPtr OrthogonalAlgebra::so3() {
  static const AlgebraPtr instance = [] {
    Eigen::MatrixXcd l1 = Eigen::MatrixXcd::Zero(3, 3);
    Eigen::MatrixXcd l2 = Eigen::MatrixXcd::Zero(3, 3);
    Eigen::MatrixXcd l3 = Eigen::MatrixXcd::Zero(3, 3);
    l1(1, 2) = -1; l1(2, 1) = 1;
    l2(0, 2) = 1;  l2(2, 0) = -1;
    l3(0, 1) = -1; l3(1, 0) = 1;
    std::vector<Eigen::MatrixXcd> basis = {l1, l2, l3};

    const int d = 3;
    std::vector<Eigen::MatrixXcd> structure(d, Eigen::MatrixXcd::Zero(d, d));
    // [l_i, l_j] = eps_ijk l_k
    structure[2](0, 1) = 1;
    structure[2](1, 0) = -1;
    structure[0](1, 2) = 1;
    structure[0](2, 1) = -1;
    structure[1](2, 0) = 1;
    structure[1](0, 2) = -1;

    Eigen::MatrixXcd form = -2.0 * Eigen::MatrixXcd::Identity(3, 3);

    return from_components(std::move(basis), std::move(structure), std::move(form),
                           "so3", MatrixGroup::special_orthogonal, true);
  }();
  return instance;
}

AlgebraPtr OrthogonalAlgebra::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open algebra file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse algebra file " + path + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("basis") || !doc["basis"].is_array())
    throw ConfigError("algebra file " + path + " must contain a \"basis\" array");

  std::vector<Eigen::MatrixXcd> basis;
  for (const auto& mat : doc["basis"]) {
    if (!mat.is_array() || mat.empty())
      throw ConfigError("algebra file " + path + ": each basis entry must be a matrix");
    const auto rows = mat.size();
    Eigen::MatrixXcd b(rows, rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto& row = mat[r];
      if (!row.is_array() || row.size() != rows)
        throw ConfigError("algebra file " + path + ": basis matrices must be square");
      for (std::size_t c = 0; c < rows; ++c) {
        const auto& entry = row[c];
        if (!entry.is_array() || entry.size() != 2)
          throw ConfigError("algebra file " + path + ": entries must be [re, im] pairs");
        b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            Complex(entry[0].get<double>(), entry[1].get<double>());
      }
    }
    basis.push_back(std::move(b));
  }
  std::string name = doc.value("name", std::string("custom"));
  return from_matrices(std::move(basis), std::move(name));
}

AlgebraPtr OrthogonalAlgebra::named(const std::string& name_or_path) {
  if (name_or_path == "sl2") return sl2();
  if (name_or_path == "so3") return so3();
  return from_json_file(name_or_path);
}

Eigen::VectorXcd OrthogonalAlgebra::bracket_coords(const Eigen::VectorXcd& x,
                                                   const Eigen::VectorXcd& y) const {
  if (x.size() != dim_ || y.size() != dim_)
    throw MismatchError("bracket: coordinate dimension mismatch");
  Eigen::VectorXcd out(dim_);
  for (int k = 0; k < dim_; ++k)
    out(k) = x.transpose() * structure_[static_cast<std::size_t>(k)] * y;
  return out;
}

Complex OrthogonalAlgebra::inner_coords(const Eigen::VectorXcd& x,
                                        const Eigen::VectorXcd& y) const {
  if (x.size() != dim_ || y.size() != dim_)
    throw MismatchError("inner: coordinate dimension mismatch");
  return x.transpose() * form_ * y;
}

Eigen::MatrixXcd OrthogonalAlgebra::to_matrix(const Eigen::VectorXcd& coords) const {
  if (coords.size() != dim_) throw MismatchError("to_matrix: coordinate dimension mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(matrix_dim_, matrix_dim_);
  for (int i = 0; i < dim_; ++i) out += coords(i) * basis_[static_cast<std::size_t>(i)];
  return out;
}

Eigen::VectorXcd OrthogonalAlgebra::to_coords(const Eigen::MatrixXcd& m) const {
  if (m.rows() != matrix_dim_ || m.cols() != matrix_dim_)
    throw MismatchError("to_coords: matrix dimension mismatch");
  Eigen::VectorXcd traces(dim_);
  for (int i = 0; i < dim_; ++i)
    traces(i) = (basis_[static_cast<std::size_t>(i)] * m).trace();
  return form_lu_.solve(traces);
}

double OrthogonalAlgebra::group_constraint_residual(const Eigen::MatrixXcd& g) const {
  switch (group_) {
    case MatrixGroup::special_linear:
      return std::abs(g.determinant() - Complex(1, 0));
    case MatrixGroup::special_orthogonal: {
      const Eigen::MatrixXcd defect =
          g.transpose() * g - Eigen::MatrixXcd::Identity(g.rows(), g.cols());
      return std::max(max_abs(defect), std::abs(g.determinant() - Complex(1, 0)));
    }
    case MatrixGroup::general_linear:
      return 0.0;
  }
  return 0.0;
}

void OrthogonalAlgebra::validate() const {
  const int d = dim_;
  if (static_cast<int>(structure_.size()) != d)
    throw Error("structure tensor has wrong dimension");

  double antisym = 0.0;
  for (int k = 0; k < d; ++k)
    antisym = std::max(antisym,
                       max_abs(structure_[static_cast<std::size_t>(k)] +
                               structure_[static_cast<std::size_t>(k)].transpose()));
  if (antisym > kExactTol)
    throw Error(name_ + ": structure constants are not antisymmetric");

  // Jacobi identity on basis triples.
  double jacobi = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          Complex sum = 0;
          for (int m = 0; m < d; ++m) {
            sum += structure_[static_cast<std::size_t>(m)](j, k) *
                       structure_[static_cast<std::size_t>(l)](i, m) +
                   structure_[static_cast<std::size_t>(m)](k, i) *
                       structure_[static_cast<std::size_t>(l)](j, m) +
                   structure_[static_cast<std::size_t>(m)](i, j) *
                       structure_[static_cast<std::size_t>(l)](k, m);
          }
          jacobi = std::max(jacobi, std::abs(sum));
        }
  if (jacobi > kExactTol)
    throw Error(name_ + ": structure constants violate the Jacobi identity");

  if (max_abs(form_ - form_.transpose()) > kExactTol)
    throw Error(name_ + ": form is not symmetric");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(form_);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= kConditionTol * sv(0))
    throw DegenerateFormError(name_ + ": bilinear form is singular");

  // ad-invariance: (b_i, [b_j, b_k]) = ([b_i, b_j], b_k) on basis triples.
  double adinv = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        Complex lhs = 0, rhs = 0;
        for (int l = 0; l < d; ++l) {
          lhs += structure_[static_cast<std::size_t>(l)](j, k) * form_(i, l);
          rhs += structure_[static_cast<std::size_t>(l)](i, j) * form_(l, k);
        }
        adinv = std::max(adinv, std::abs(lhs - rhs));
      }
  if (adinv > kExactTol) throw Error(name_ + ": form is not ad-invariant");

  // Consistency with the matrix realization.
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Eigen::MatrixXcd expanded = Eigen::MatrixXcd::Zero(matrix_dim_, matrix_dim_);
      for (int k = 0; k < d; ++k)
        expanded += structure_[static_cast<std::size_t>(k)](i, j) *
                    basis_[static_cast<std::size_t>(k)];
      const Eigen::MatrixXcd comm =
          basis_[static_cast<std::size_t>(i)] * basis_[static_cast<std::size_t>(j)] -
          basis_[static_cast<std::size_t>(j)] * basis_[static_cast<std::size_t>(i)];
      if (max_abs(expanded - comm) > kClosureTol)
        throw Error(name_ + ": structure constants do not reproduce commutators");
      const Complex trace_form =
          (basis_[static_cast<std::size_t>(i)] * basis_[static_cast<std::size_t>(j)]).trace();
      if (std::abs(form_(i, j) - trace_form) > kExactTol)
        throw Error(name_ + ": form does not match the trace form of the realization");
    }
  }
}

void require_same_algebra(const AlgebraPtr& a, const AlgebraPtr& b, const char* what) {
  if (!same_algebra(a, b)) throw MismatchError(std::string(what) + ": algebra mismatch");
}

AlgebraElement AlgebraElement::zero(const AlgebraPtr& algebra) {
  return {algebra, Eigen::VectorXcd::Zero(algebra->dim())};
}

AlgebraElement basis_element(const AlgebraPtr& algebra, int i) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(algebra->dim());
  c(i) = 1;
  return {algebra, std::move(c)};
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_algebra(x.algebra, y.algebra, "bracket");
  return {x.algebra, x.algebra->bracket_coords(x.coeffs, y.coeffs)};
}

Complex inner(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_algebra(x.algebra, y.algebra, "inner");
  return x.algebra->inner_coords(x.coeffs, y.coeffs);
}

AlgebraElement random_element(const AlgebraPtr& algebra, std::mt19937_64& rng) {
  Eigen::VectorXcd c(algebra->dim());
  for (int i = 0; i < algebra->dim(); ++i) c(i) = unit_disc(rng);
  return {algebra, std::move(c)};
}

AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_algebra(x.algebra, y.algebra, "operator+");
  return {x.algebra, x.coeffs + y.coeffs};
}

AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_algebra(x.algebra, y.algebra, "operator-");
  return {x.algebra, x.coeffs - y.coeffs};
}

AlgebraElement operator-(const AlgebraElement& x) { return {x.algebra, -x.coeffs}; }

AlgebraElement operator*(Complex c, const AlgebraElement& x) {
  return {x.algebra, c * x.coeffs};
}

}  // namespace affinv
