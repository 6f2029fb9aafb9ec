#include "tsep/io.hpp"

#include <fstream>
#include <sstream>

#include "tsep/errors.hpp"

namespace tsep::io {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object()) schema_error(std::string("expected an object with field \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) schema_error(std::string("missing field \"") + key + "\"");
  return *it;
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) schema_error(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

double number(const json& v, const char* what) {
  if (!v.is_number()) schema_error(std::string(what) + " must be a number");
  return v.get<double>();
}

std::vector<CMatrix> coeff_list(const json& j, int n, int p) {
  const json& list = field(j, "coeffs");
  if (!list.is_array() || list.size() != static_cast<std::size_t>(2 * n - 1)) {
    schema_error("\"coeffs\" must hold 2n−1 matrices");
  }
  std::vector<CMatrix> out;
  for (const auto& c : list) {
    CMatrix m = matrix_from_json(c);
    if (m.rows() != p || m.cols() != p) schema_error("coefficient is not p×p");
    out.push_back(std::move(m));
  }
  return out;
}

json coeffs_json(const std::vector<CMatrix>& coeffs) {
  json list = json::array();
  for (const auto& c : coeffs) list.push_back(to_json(c));
  return list;
}

json vector_json(const CVector& v) {
  json list = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) list.push_back(to_json(v(i)));
  return list;
}

}  // namespace

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string dump(const json& j) { return j.dump(2); }

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) schema_error("complex numbers are [re, im] pairs");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

json to_json(const CMatrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) data.push_back(to_json(m(i, k)));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& j) {
  const int rows = int_field(j, "rows");
  const int cols = int_field(j, "cols");
  if (rows < 1 || cols < 1) schema_error("matrix dimensions must be positive");
  const json& data = field(j, "data");
  if (!data.is_array() || data.size() != static_cast<std::size_t>(rows) * cols) {
    schema_error("\"data\" must hold rows×cols entries");
  }
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < cols; ++k) m(i, k) = complex_from_json(data[static_cast<std::size_t>(i * cols + k)]);
  }
  return m;
}

std::string kind_of(const json& j) {
  if (!j.is_object()) schema_error("expected an object");
  auto it = j.find("kind");
  if (it == j.end()) return "toeplitz";
  if (!it->is_string()) schema_error("\"kind\" must be a string");
  const std::string kind = it->get<std::string>();
  if (kind != "toeplitz" && kind != "trigpoly") schema_error("unknown kind \"" + kind + "\"");
  return kind;
}

json to_json(const BlockToeplitz& t) {
  return {{"n", t.n()}, {"p", t.p()}, {"coeffs", coeffs_json(t.coeffs())}};
}

BlockToeplitz toeplitz_from_json(const json& j) {
  if (kind_of(j) != "toeplitz") schema_error("expected a block-Toeplitz element, got a trig polynomial");
  const int n = int_field(j, "n");
  const int p = int_field(j, "p");
  if (n < 1 || p < 1) schema_error("n and p must be positive");
  return BlockToeplitz(n, p, coeff_list(j, n, p));
}

json to_json(const TrigMatrixPoly& f) {
  return {{"kind", "trigpoly"}, {"n", f.n()}, {"p", f.p()}, {"coeffs", coeffs_json(f.coeffs())}};
}

TrigMatrixPoly trigpoly_from_json(const json& j) {
  if (kind_of(j) != "trigpoly") schema_error("expected \"kind\": \"trigpoly\"");
  const int n = int_field(j, "n");
  const int p = int_field(j, "p");
  if (n < 1 || p < 1) schema_error("n and p must be positive");
  return TrigMatrixPoly(n, p, coeff_list(j, n, p));
}

json to_json(const AtomicDecomposition& dec) {
  json atoms = json::array();
  for (const auto& a : dec.atoms) atoms.push_back({{"lambda", to_json(a.lambda)}, {"b", to_json(a.b)}});
  return {{"n", dec.n}, {"p", dec.p}, {"atoms", std::move(atoms)}, {"residual", dec.residual}};
}

AtomicDecomposition decomposition_from_json(const json& j) {
  AtomicDecomposition dec;
  dec.n = int_field(j, "n");
  dec.p = int_field(j, "p");
  if (dec.n < 1 || dec.p < 1) schema_error("n and p must be positive");
  const json& atoms = field(j, "atoms");
  if (!atoms.is_array()) schema_error("\"atoms\" must be an array");
  for (const auto& a : atoms) {
    CMatrix b = matrix_from_json(field(a, "b"));
    if (b.rows() != dec.p || b.cols() != dec.p) schema_error("atom block is not p×p");
    dec.atoms.push_back({normalize_unit(complex_from_json(field(a, "lambda"))), std::move(b)});
  }
  if (j.contains("residual")) dec.residual = number(j["residual"], "\"residual\"");
  return dec;
}

json to_json(const ToeplitzToeplitzDecomposition& dec) {
  json out = to_json(dec.block);
  json products = json::array();
  for (const auto& a : dec.products) {
    products.push_back({{"lambda", to_json(a.lambda)}, {"mu", to_json(a.mu)}, {"weight", a.weight}});
  }
  out["product_atoms"] = std::move(products);
  return out;
}

json to_json(const DilationFactorization& fac) {
  json spectrum = json::array();
  for (const auto& s : fac.spectrum) spectrum.push_back({{"lambda", to_json(s.lambda)}, {"mult", s.mult}});
  json out = {{"q", fac.q}, {"u", to_json(fac.u)}, {"w", to_json(fac.w)}, {"spectrum", std::move(spectrum)}};
  if (!fac.warnings.empty()) out["warnings"] = fac.warnings;
  return out;
}

DilationFactorization factorization_from_json(const json& j) {
  DilationFactorization fac;
  fac.q = int_field(j, "q");
  fac.u = matrix_from_json(field(j, "u"));
  fac.w = matrix_from_json(field(j, "w"));
  const json& spectrum = field(j, "spectrum");
  if (!spectrum.is_array()) schema_error("\"spectrum\" must be an array");
  for (const auto& s : spectrum) fac.spectrum.push_back({complex_from_json(field(s, "lambda")), int_field(s, "mult")});
  return fac;
}

json to_json(const PositivityCertificate& cert) {
  json out = {{"verdict", std::string(to_string(cert.verdict))},
              {"margin", cert.margin},
              {"tol", cert.tol},
              {"scale", cert.scale}};
  if (cert.witness.size() > 0) out["witness"] = vector_json(cert.witness);
  if (cert.witness_theta) out["witness_theta"] = *cert.witness_theta;
  if (cert.grid) {
    out["grid"] = {{"K", cert.grid->grid},
                   {"min_sample", cert.grid->min_sample},
                   {"lipschitz", cert.grid->lipschitz},
                   {"curvature", cert.grid->curvature},
                   {"penalty", cert.grid->penalty},
                   {"levels", cert.grid->levels}};
  }
  return out;
}

json to_json(const EntanglementCertificate& cert) {
  json out = {{"verdict", std::string(to_string(cert.verdict))}};
  if (cert.samples > 0) {
    out["samples"] = cert.samples;
    out["max_rank"] = cert.max_rank;
    out["ranks"] = cert.ranks;
  }
  if (cert.evidence) {
    out["evidence"] = {{"theta1", cert.evidence->theta1},
                       {"theta2", cert.evidence->theta2},
                       {"range1", vector_json(cert.evidence->range1)},
                       {"range2", vector_json(cert.evidence->range2)},
                       {"sine", cert.evidence->sine}};
  }
  if (cert.grid > 0) {
    out["search"] = {{"grid", cert.grid},
                     {"dictionary_size", cert.dictionary_size},
                     {"residual", cert.residual},
                     {"verify_residual", cert.verify_residual}};
  }
  if (!cert.terms.empty()) {
    json terms = json::array();
    for (const auto& t : cert.terms) terms.push_back({{"f", to_json(t.f)}, {"b", to_json(t.b)}});
    out["terms"] = std::move(terms);
  }
  return out;
}

json to_json(const ProbeReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"n", v.n},
                          {"trial", v.trial},
                          {"generator", v.generator},
                          {"input", to_json(v.input)},
                          {"min_eigenvalue", v.min_eigenvalue},
                          {"witness", vector_json(v.witness)}});
  }
  return {{"seed", report.seed},
          {"n_max", report.n_max},
          {"trials", report.trials},
          {"checked", report.checked},
          {"tol", report.tol},
          {"violations", std::move(violations)},
          {"max_negative_eigenvalue", report.max_negative_eigenvalue}};
}

json to_json(const PurityResult& purity) {
  if (!purity.pure) return {{"verdict", "NotPure"}, {"reason", purity.reason}};
  return {{"verdict", "Pure"}, {"lambda", to_json(purity.lambda)}, {"alpha", purity.alpha}, {"q", to_json(purity.q)}};
}

json to_json(const MatrixMap& map) {
  json units = json::array();
  for (const auto& u : map.unit_images()) units.push_back(to_json(u));
  return {{"p", map.p()}, {"q", map.q()}, {"name", map.name()}, {"units", std::move(units)}};
}

MatrixMap matrix_map_from_json(const json& j) {
  const int p = int_field(j, "p");
  if (p < 1) schema_error("p must be positive");
  if (j.contains("preset")) {
    const json& preset = j["preset"];
    if (!preset.is_string()) schema_error("\"preset\" must be a string");
    const std::string name = preset.get<std::string>();
    if (name == "identity") return MatrixMap::identity(p);
    if (name == "transpose") return MatrixMap::transpose(p);
    if (name == "depolarizing") return MatrixMap::depolarizing(p);
    schema_error("unknown preset \"" + name + "\"");
  }
  const int q = int_field(j, "q");
  const json& units = field(j, "units");
  if (!units.is_array()) schema_error("\"units\" must be an array");
  std::vector<CMatrix> images;
  for (const auto& u : units) images.push_back(matrix_from_json(u));
  std::string name = "custom";
  if (j.contains("name") && j["name"].is_string()) name = j["name"].get<std::string>();
  return MatrixMap(p, q, std::move(images), name);
}

}  // namespace tsep::io
