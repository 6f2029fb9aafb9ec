#pragma once

// JSON encodings shared by the library, the CLI and the tests.
//
//   complex              [re, im]
//   CMatrix              {"rows": r, "cols": c, "data": [[re, im], ...]}  row-major
//   BlockToeplitz        {"n", "p", "coeffs": [τ_{−n+1}, ..., τ_{n−1}]}  optional "kind": "toeplitz"
//   TrigMatrixPoly       same with "kind": "trigpoly"
//   AtomicDecomposition  {"n", "p", "atoms": [{"lambda", "b"}], "residual"}
//   DilationFactorization {"q", "u", "w", "spectrum": [{"lambda", "mult"}]}
//   MatrixMap            {"preset": "identity"|"transpose"|"depolarizing", "p"}
//                        or {"p", "q", "units": [ψ(E_00), ψ(E_01), ...]}

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tsep/cp_duality.hpp"
#include "tsep/dilation.hpp"
#include "tsep/entanglement.hpp"
#include "tsep/positivity.hpp"
#include "tsep/separability.hpp"
#include "tsep/toeplitz.hpp"

namespace tsep::io {

using json = nlohmann::json;

/// Parses text; syntax errors become ParseError with line and column.
json parse(std::string_view text);
json read_file(const std::string& path);
/// Deterministic rendering (sorted keys, shortest round-trip doubles).
std::string dump(const json& j);

json to_json(cplx z);
json to_json(const CMatrix& m);
json to_json(const BlockToeplitz& t);
json to_json(const TrigMatrixPoly& f);
json to_json(const AtomicDecomposition& dec);
json to_json(const ToeplitzToeplitzDecomposition& dec);
json to_json(const DilationFactorization& fac);
json to_json(const PositivityCertificate& cert);
json to_json(const EntanglementCertificate& cert);
json to_json(const ProbeReport& report);
json to_json(const PurityResult& purity);
json to_json(const MatrixMap& map);

// Readers throw ParseError on schema violations and the module's own errors
// (DimensionMismatch, NotOnCircle) on inconsistent content.
cplx complex_from_json(const json& j);
CMatrix matrix_from_json(const json& j);
BlockToeplitz toeplitz_from_json(const json& j);
TrigMatrixPoly trigpoly_from_json(const json& j);
AtomicDecomposition decomposition_from_json(const json& j);
DilationFactorization factorization_from_json(const json& j);
MatrixMap matrix_map_from_json(const json& j);

/// "toeplitz" or "trigpoly", from the "kind" field (default "toeplitz").
std::string kind_of(const json& j);

}  // namespace tsep::io
