#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "affinv/affine.hpp"
#include "affinv/loop_fourier.hpp"

namespace affinv {

// JSON forms used for report artifacts. Complex numbers are [re, im]
// pairs; a loop is {"band": N, "modes": [...]} with 2N+1 coefficient rows.

nlohmann::json loop_to_json(const LoopElement& x);
LoopElement loop_from_json(const nlohmann::json& j, const AlgebraPtr& algebra);

nlohmann::json affine_vector_to_json(const AffineVector& u);
AffineVector affine_vector_from_json(const nlohmann::json& j, const AlgebraPtr& algebra);

nlohmann::json affine_covector_to_json(const AffineCovector& mu);
AffineCovector affine_covector_from_json(const nlohmann::json& j, const AlgebraPtr& algebra);

/// Basis matrices in the file schema accepted by
/// OrthogonalAlgebra::from_json_file.
nlohmann::json algebra_to_json(const OrthogonalAlgebra& algebra);

/// Complex scalars in the "a+bi" text form used by the CLI.
std::string format_complex(Complex c);
Complex parse_complex(const std::string& text);

}  // namespace affinv
