#include "affinv/serialization.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

#include "affinv/errors.hpp"

namespace affinv {

namespace {

nlohmann::json complex_to_json(Complex c) {
  return nlohmann::json::array({c.real(), c.imag()});
}

Complex complex_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError("expected a [re, im] pair");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

}  // namespace

nlohmann::json loop_to_json(const LoopElement& x) {
  nlohmann::json modes = nlohmann::json::array();
  for (int n = -x.band(); n <= x.band(); ++n) {
    nlohmann::json coeffs = nlohmann::json::array();
    const Eigen::VectorXcd m = x.mode(n);
    for (Eigen::Index c = 0; c < m.size(); ++c) coeffs.push_back(complex_to_json(m(c)));
    modes.push_back(std::move(coeffs));
  }
  return {{"band", x.band()}, {"modes", std::move(modes)}};
}

LoopElement loop_from_json(const nlohmann::json& j, const AlgebraPtr& algebra) {
  const int band = j.at("band").get<int>();
  const auto& modes = j.at("modes");
  if (!modes.is_array() || static_cast<int>(modes.size()) != 2 * band + 1)
    throw ConfigError("loop JSON needs 2*band+1 mode rows");
  std::vector<Eigen::VectorXcd> out;
  out.reserve(modes.size());
  for (const auto& row : modes) {
    Eigen::VectorXcd m(algebra->dim());
    if (static_cast<int>(row.size()) != algebra->dim())
      throw ConfigError("loop JSON mode row has wrong dimension");
    for (int c = 0; c < algebra->dim(); ++c)
      m(c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    out.push_back(std::move(m));
  }
  return LoopElement(algebra, std::move(out));
}

nlohmann::json affine_vector_to_json(const AffineVector& u) {
  return {{"z", complex_to_json(u.z)},
          {"x", loop_to_json(u.x)},
          {"a", complex_to_json(u.a)}};
}

AffineVector affine_vector_from_json(const nlohmann::json& j, const AlgebraPtr& algebra) {
  return {complex_from_json(j.at("z")), loop_from_json(j.at("x"), algebra),
          complex_from_json(j.at("a"))};
}

nlohmann::json affine_covector_to_json(const AffineCovector& mu) {
  return {{"alpha", complex_to_json(mu.alpha)},
          {"xi", loop_to_json(mu.xi)},
          {"e", complex_to_json(mu.e)}};
}

AffineCovector affine_covector_from_json(const nlohmann::json& j,
                                         const AlgebraPtr& algebra) {
  return {complex_from_json(j.at("alpha")), loop_from_json(j.at("xi"), algebra),
          complex_from_json(j.at("e"))};
}

nlohmann::json algebra_to_json(const OrthogonalAlgebra& algebra) {
  nlohmann::json basis = nlohmann::json::array();
  for (int i = 0; i < algebra.dim(); ++i) {
    const auto& b = algebra.basis_matrix(i);
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < b.cols(); ++c) row.push_back(complex_to_json(b(r, c)));
      rows.push_back(std::move(row));
    }
    basis.push_back(std::move(rows));
  }
  return {{"name", algebra.name()}, {"basis", std::move(basis)}};
}

std::string format_complex(Complex c) {
  char buf[64];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%.17g", c.real());
  out += buf;
  out += c.imag() < 0 || std::signbit(c.imag()) ? "-" : "+";
  std::snprintf(buf, sizeof(buf), "%.17g", std::abs(c.imag()));
  out += buf;
  out += "i";
  return out;
}

Complex parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ConfigError("empty complex literal");

  const auto parse_real = [&](const std::string& part) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad complex literal: " + text);
    }
    if (used != part.size()) throw ConfigError("bad complex literal: " + text);
    return v;
  };

  if (s.back() != 'i' && s.back() != 'I') return Complex(parse_real(s), 0.0);

  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that does not follow an exponent marker.
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < body.size(); ++i) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E')
      split = i;
  }
  if (split == std::string::npos) {
    if (body.empty() || body == "+") return Complex(0, 1);
    if (body == "-") return Complex(0, -1);
    return Complex(0, parse_real(body));
  }
  const double re = parse_real(body.substr(0, split));
  std::string imag_part = body.substr(split);
  if (imag_part == "+") return Complex(re, 1);
  if (imag_part == "-") return Complex(re, -1);
  return Complex(re, parse_real(imag_part));
}

}  // namespace affinv
