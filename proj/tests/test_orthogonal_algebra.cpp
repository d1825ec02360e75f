#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "affinv/orthogonal_algebra.hpp"
#include "affinv/rng.hpp"
#include "oracles.hpp"

using namespace affinv;

namespace {

Eigen::MatrixXcd sl2_e() {
  Eigen::MatrixXcd m(2, 2);
  m << 0, 1, 0, 0;
  return m;
}
Eigen::MatrixXcd sl2_f() {
  Eigen::MatrixXcd m(2, 2);
  m << 0, 0, 1, 0;
  return m;
}
Eigen::MatrixXcd sl2_h() {
  Eigen::MatrixXcd m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace

TEST_CASE("sl2 bracket reproduces the matrix commutator oracle") {
  const auto alg = OrthogonalAlgebra::sl2();
  const auto e = basis_element(alg, 0);
  const auto f = basis_element(alg, 1);
  const auto h = basis_element(alg, 2);

  // [e, f] = h, frozen from the commutator oracle e f - f e.
  CHECK(oracles::commutator(sl2_e(), sl2_f()).isApprox(sl2_h(), 1e-15));
  CHECK((bracket(e, f).coeffs - h.coeffs).cwiseAbs().maxCoeff() < 1e-14);

  // [h, e] = 2e.
  CHECK(oracles::commutator(sl2_h(), sl2_e()).isApprox(2.0 * sl2_e(), 1e-15));
  CHECK((bracket(h, e).coeffs - 2.0 * e.coeffs).cwiseAbs().maxCoeff() < 1e-14);

  // [X, X] = 0.
  std::mt19937_64 rng(7);
  const auto x = random_element(alg, rng);
  CHECK(bracket(x, x).coeffs.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sl2 trace form values") {
  const auto alg = OrthogonalAlgebra::sl2();
  const auto e = basis_element(alg, 0);
  const auto f = basis_element(alg, 1);
  const auto h = basis_element(alg, 2);

  CHECK(std::abs((sl2_h() * sl2_h()).trace() - Complex(2, 0)) < 1e-15);
  CHECK(std::abs(inner(h, h) - Complex(2, 0)) < 1e-14);
  CHECK(std::abs((sl2_e() * sl2_f()).trace() - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(inner(e, f) - Complex(1, 0)) < 1e-14);
  CHECK(std::abs(inner(e, AlgebraElement::zero(alg))) == 0.0);
}

TEST_CASE("invariance and Jacobi hold on seeded random triples") {
  for (const auto& alg : {OrthogonalAlgebra::sl2(), OrthogonalAlgebra::so3()}) {
    std::mt19937_64 rng(0xA11FEE);
    for (int t = 0; t < 200; ++t) {
      const auto x = random_element(alg, rng);
      const auto y = random_element(alg, rng);
      const auto z = random_element(alg, rng);
      CHECK(std::abs(inner(x, bracket(y, z)) - inner(bracket(x, y), z)) < 1e-12);
      const AlgebraElement jac = bracket(x, bracket(y, z)) +
                                 bracket(y, bracket(z, x)) +
                                 bracket(z, bracket(x, y));
      CHECK(jac.coeffs.cwiseAbs().maxCoeff() < 1e-12);
      // Coordinates agree with the matrix commutator.
      const Eigen::MatrixXcd direct = oracles::commutator(alg->to_matrix(x.coeffs),
                                                          alg->to_matrix(y.coeffs));
      CHECK((alg->to_matrix(bracket(x, y).coeffs) - direct).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("from_matrices rebuilds sl2 structure") {
  const auto alg = OrthogonalAlgebra::from_matrices({sl2_e(), sl2_f(), sl2_h()}, "sl2-custom");
  CHECK(alg->dim() == 3);
  const auto e = basis_element(alg, 0);
  const auto f = basis_element(alg, 1);
  const auto h = basis_element(alg, 2);
  CHECK((bracket(e, f).coeffs - h.coeffs).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(inner(h, h) - Complex(2, 0)) < 1e-12);
  CHECK(std::abs(inner(e, f) - Complex(1, 0)) < 1e-12);
  alg->validate();
}

TEST_CASE("from_matrices on a single diagonal matrix gives an abelian line") {
  const auto alg = OrthogonalAlgebra::from_matrices({sl2_h()}, "line");
  CHECK(alg->dim() == 1);
  CHECK(alg->structure_matrix(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(alg->form()(0, 0) - Complex(2, 0)) < 1e-15);
}

TEST_CASE("from_matrices rejects the Borel subalgebra: degenerate trace form") {
  CHECK_THROWS_AS(OrthogonalAlgebra::from_matrices({sl2_e(), sl2_h()}),
                  DegenerateFormError);
}

TEST_CASE("from_matrices rejects a non-closed span") {
  CHECK_THROWS_AS(OrthogonalAlgebra::from_matrices({sl2_e(), sl2_f()}), NotClosedError);
}

TEST_CASE("element operations reject mixed algebras") {
  const auto a = OrthogonalAlgebra::sl2();
  const auto b = OrthogonalAlgebra::so3();
  CHECK_THROWS_AS(bracket(basis_element(a, 0), basis_element(b, 0)), MismatchError);
  CHECK_THROWS_AS(inner(basis_element(a, 0), basis_element(b, 0)), MismatchError);
}

TEST_CASE("so3 structure sanity") {
  const auto alg = OrthogonalAlgebra::so3();
  const auto l1 = basis_element(alg, 0);
  const auto l2 = basis_element(alg, 1);
  const auto l3 = basis_element(alg, 2);
  CHECK((bracket(l1, l2).coeffs - l3.coeffs).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(inner(l1, l1) - Complex(-2, 0)) < 1e-14);
  CHECK(std::abs(inner(l1, l2)) < 1e-14);
  alg->validate();
}

TEST_CASE("algebra round-trips through the JSON file format") {
  const auto temp = std::string("algebra_roundtrip_test.json");
  {
    std::ofstream out(temp);
    out << R"({"name": "sl2-file", "basis": [)"
        << R"([[[0,0],[1,0]],[[0,0],[0,0]]],)"   // e
        << R"([[[0,0],[0,0]],[[1,0],[0,0]]],)"   // f
        << R"([[[1,0],[0,0]],[[0,0],[-1,0]]])"   // h
        << "]}";
  }
  const auto alg = OrthogonalAlgebra::from_json_file(temp);
  std::remove(temp.c_str());
  CHECK(alg->name() == "sl2-file");
  CHECK(alg->dim() == 3);
  const auto e = basis_element(alg, 0);
  const auto f = basis_element(alg, 1);
  CHECK((bracket(e, f).coeffs - basis_element(alg, 2).coeffs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("missing algebra file raises ConfigError") {
  CHECK_THROWS_AS(OrthogonalAlgebra::from_json_file("does_not_exist.json"), ConfigError);
}

TEST_CASE("malformed algebra files raise ConfigError") {
  const auto temp = std::string("algebra_malformed_test.json");
  {
    std::ofstream out(temp);
    out << R"({"basis": 5})";
  }
  CHECK_THROWS_AS(OrthogonalAlgebra::from_json_file(temp), ConfigError);
  {
    std::ofstream out(temp);
    out << "{ not json";
  }
  CHECK_THROWS_AS(OrthogonalAlgebra::from_json_file(temp), ConfigError);
  std::remove(temp.c_str());
}

TEST_CASE("named resolves built-ins") {
  CHECK(OrthogonalAlgebra::named("sl2") == OrthogonalAlgebra::sl2());
  CHECK(OrthogonalAlgebra::named("so3") == OrthogonalAlgebra::so3());
}

TEST_CASE("to_coords inverts to_matrix on the span") {
  for (const auto& alg : {OrthogonalAlgebra::sl2(), OrthogonalAlgebra::so3()}) {
    std::mt19937_64 rng(3);
    const auto x = random_element(alg, rng);
    const Eigen::VectorXcd back = alg->to_coords(alg->to_matrix(x.coeffs));
    CHECK((back - x.coeffs).cwiseAbs().maxCoeff() < 1e-13);
  }
}
