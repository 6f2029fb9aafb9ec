#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "tsep/cp_duality.hpp"
#include "tsep/dilation.hpp"
#include "tsep/entanglement.hpp"
#include "tsep/errors.hpp"
#include "tsep/generators.hpp"
#include "tsep/io.hpp"
#include "tsep/parallel.hpp"
#include "tsep/positivity.hpp"
#include "tsep/rng.hpp"
#include "tsep/separability.hpp"

namespace tsep::cli {

using io::json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

namespace {

// what() without the leading "Code: ".
std::string message_of(const Error& e) {
  const std::string what = e.what();
  const std::string prefix = std::string(to_string(e.code())) + ": ";
  return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::BadParams, "cannot write " + path);
    f << text;
    if (!f.flush()) throw Error(ErrorCode::BadParams, "cannot write " + path);
  }
  std::filesystem::rename(tmp, path);
}

// Everything one invocation knows about itself, for the manifest.
struct Run {
  std::vector<std::string> args;
  std::string out_path;
  std::string manifest_path;
  json inputs = json::array();
  json tolerances = json::object();
  json extra = json::object();
  std::optional<std::uint64_t> seed;
  std::string result;

  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  json load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    inputs.push_back({{"path", path}, {"sha256", sha256_hex(text)}, {"bytes", text.size()}});
    try {
      return io::parse(text);
    } catch (const Error& e) {
      throw Error(e.code(), path + ": " + message_of(e));
    }
  }

  void emit(const json& j) {
    result = io::dump(j) + "\n";
    if (out_path.empty()) {
      *out << result;
    } else {
      write_atomically(out_path, result);
    }
  }

  void write_manifest(const std::string& command, int code, double seconds) const {
    json m = {{"command", command},
              {"args", args},
              {"inputs", inputs},
              {"tolerances", tolerances},
              {"rng", std::string(Rng::kName)},
              {"exit_code", code},
              {"result_sha256", sha256_hex(result)},
              {"wall_time_seconds", seconds},
              {"threads", worker_count()},
              {"version", "0.1.0"}};
    if (seed) m["seed"] = *seed;
    for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
    write_atomically(manifest_path, io::dump(m) + "\n");
  }
};

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPositive:
    case ErrorCode::NotPSD:
    case ErrorCode::NotStrictlyPositive:
      return kNegative;
    case ErrorCode::BudgetExhausted:
      return kBudget;
    default:
      return kError;
  }
}

// Fills in "kind" for files that leave it implicit, and rejects a clash.
void force_kind(json& j, const std::string& kind) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "expected an object");
  if (!j.contains("kind")) {
    j["kind"] = kind;
  } else if (io::kind_of(j) != kind) {
    throw Error(ErrorCode::ParseError, "file declares kind \"" + io::kind_of(j) + "\", --kind says \"" + kind + "\"");
  }
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  std::string path;
  std::string kind;
  double tol = kDefaultTol;
  std::int64_t grid = 0;
};

int cmd_check(Run& run, const CheckArgs& a) {
  json j = run.load(a.path);
  const std::string kind = a.kind.empty() ? io::kind_of(j) : a.kind;
  force_kind(j, kind);
  run.tolerances["tol"] = a.tol;
  PositivityCertificate cert;
  if (kind == "toeplitz") {
    cert = check_toeplitz_psd(io::toeplitz_from_json(j), a.tol);
  } else {
    run.tolerances["grid"] = a.grid;
    cert = check_trigpoly_psd(io::trigpoly_from_json(j), a.grid, a.tol);
  }
  run.emit(io::to_json(cert));
  return cert.positive() ? kOk : kNegative;
}

// ---------------------------------------------------------------- decompose / factorize

struct DecomposeArgs {
  std::string path;
  std::string engine = "auto";
  std::optional<double> tol;
  int max_atoms = 60;
};

struct Decomposed {
  std::string engine;
  AtomicDecomposition dec;
  json body;  // what decompose prints
  bool budget = false;
  std::string message;
};

std::string pick_engine(const std::string& requested, const BlockToeplitz& t) {
  if (requested != "auto") return requested;
  if (t.p() == 1) return "caratheodory";
  if (is_toeplitz_toeplitz(t)) return "grid2d";
  return "greedy";
}

Decomposed decompose(Run& run, const DecomposeArgs& a, const BlockToeplitz& t) {
  const PositivityCertificate pre = check_toeplitz_psd(t);
  if (!pre.positive()) {
    throw Error(ErrorCode::NotPositive, "input is not PSD (λ_min " + fmt(pre.margin) + ")");
  }
  Decomposed d;
  d.engine = pick_engine(a.engine, t);
  try {
    if (d.engine == "caratheodory") {
      const double tol = a.tol.value_or(kDefaultTol);
      run.tolerances["decompose_tol"] = tol;
      d.dec = caratheodory_scalar(t, tol);
      d.body = io::to_json(d.dec);
    } else if (d.engine == "greedy") {
      GreedyOptions o;
      o.tol = a.tol.value_or(o.tol);
      o.max_atoms = a.max_atoms;
      run.tolerances["decompose_tol"] = o.tol;
      run.tolerances["max_atoms"] = o.max_atoms;
      d.dec = decompose_block(t, o);
      d.body = io::to_json(d.dec);
    } else {
      Grid2dOptions o;
      o.tol = a.tol.value_or(o.tol);
      run.tolerances["decompose_tol"] = o.tol;
      const ToeplitzToeplitzDecomposition tt = decompose_toeplitz_toeplitz(t, o);
      d.dec = tt.block;
      d.body = io::to_json(tt);
    }
  } catch (const BudgetExhaustedError& e) {
    d.dec = e.best();
    d.body = io::to_json(d.dec);
    d.budget = true;
    d.message = message_of(e);
  }
  d.body["engine"] = d.engine;
  run.extra["engine"] = d.engine;
  run.extra["decomposition_residual"] = d.dec.residual;
  return d;
}

int budget_exit(Run& run, const Decomposed& d) {
  *run.err << "tsep: BudgetExhausted: " << d.message << " (best so far emitted)\n";
  return kBudget;
}

int cmd_decompose(Run& run, const DecomposeArgs& a) {
  const BlockToeplitz t = io::toeplitz_from_json(run.load(a.path));
  Decomposed d = decompose(run, a, t);
  if (d.budget) d.body["status"] = "BudgetExhausted";
  run.emit(d.body);
  return d.budget ? budget_exit(run, d) : kOk;
}

int cmd_factorize(Run& run, const DecomposeArgs& a) {
  const BlockToeplitz t = io::toeplitz_from_json(run.load(a.path));
  const Decomposed d = decompose(run, a, t);
  const DilationFactorization fac = naimark_from_atoms(d.dec);
  const FactorizationCheck check = verify_factorization(t, fac);
  for (const auto& w : fac.warnings) *run.err << "tsep: warning: " << w << "\n";
  json body = {{"engine", d.engine},
               {"decomposition", d.body},
               {"decomposition_residual", d.dec.residual},
               {"factorization", io::to_json(fac)},
               {"residual", check.residual},
               {"coefficient_error", check.coefficient_error}};
  if (d.budget) body["status"] = "BudgetExhausted";
  run.extra["factorization_residual"] = check.residual;
  run.emit(body);
  return d.budget ? budget_exit(run, d) : kOk;
}

// ---------------------------------------------------------------- witness

struct WitnessArgs {
  std::string path;
  int samples = 64;
  int search_budget = 40;
  double tol = kDefaultTol;
  double search_tol = 1e-8;
};

int cmd_witness(Run& run, const WitnessArgs& a) {
  json j = run.load(a.path);
  force_kind(j, "trigpoly");
  const TrigMatrixPoly f = io::trigpoly_from_json(j);
  run.tolerances["tol"] = a.tol;
  run.tolerances["samples"] = a.samples;
  run.tolerances["search_budget"] = a.search_budget;
  run.tolerances["search_tol"] = a.search_tol;

  EntanglementCertificate cert = rank_one_range_witness(f, a.samples, a.tol);
  if (cert.verdict != EntanglementVerdict::Entangled && a.search_budget > 0) {
    DualSearchOptions o;
    o.tol = a.search_tol;
    o.max_terms = a.search_budget;
    EntanglementCertificate search = separability_search_dual(f, o);
    search.samples = cert.samples;
    search.max_rank = cert.max_rank;
    search.ranks = std::move(cert.ranks);
    cert = std::move(search);
  }
  run.extra["verdict"] = std::string(to_string(cert.verdict));
  run.emit(io::to_json(cert));
  return kOk;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string mode;
  int n = 2;
  int p = 1;
  std::optional<int> atoms;
  std::uint64_t seed = 1;
  std::vector<double> lambda{1.0, 0.0};
  std::string kind = "toeplitz";
  std::string truth;
};

int cmd_gen(Run& run, const GenArgs& a) {
  check_instance_size(a.n, a.p);
  run.seed = a.seed;
  Rng rng(a.seed);
  json instance;
  json truth;
  if (a.mode == "atoms") {
    const int m = a.atoms.value_or(a.n);
    if (m < 1) throw Error(ErrorCode::BadParams, "--atoms must be positive");
    AtomicDecomposition dec;
    instance = io::to_json(gen_atoms(a.n, a.p, m, rng, &dec));
    truth = io::to_json(dec);
  } else if (a.mode == "density") {
    instance = io::to_json(gen_density(a.n, a.p, rng));
  } else if (a.mode == "pure") {
    const PureInstance pure = gen_pure(a.n, a.p, rng);
    instance = io::to_json(pure.t);
    truth = {{"lambda", io::to_json(pure.lambda)}, {"alpha", pure.alpha}, {"q", io::to_json(pure.q)}};
  } else if (a.mode == "universal") {
    const cplx lambda = normalize_unit({a.lambda.at(0), a.lambda.at(1)});
    if (a.kind == "trigpoly") {
      instance = io::to_json(universal_trigpoly(a.n));
    } else {
      instance = io::to_json(tensor(gen_universal(a.n, lambda), CMatrix::Identity(a.p, a.p)));
    }
  } else {
    CMatrix w;
    instance = io::to_json(gen_dualpure(a.n, a.p, rng, &w));
    truth = {{"w", io::to_json(w)}};
  }
  run.emit(instance);

  std::string truth_path = a.truth;
  if (truth_path.empty() && !run.out_path.empty()) truth_path = run.out_path + ".truth.json";
  if (!truth.is_null() && !truth_path.empty()) {
    truth["mode"] = a.mode;
    truth["seed"] = a.seed;
    truth["rng"] = std::string(Rng::kName);
    write_atomically(truth_path, io::dump(truth) + "\n");
    run.extra["truth"] = truth_path;
  }
  return kOk;
}

// ---------------------------------------------------------------- pair

struct PairArgs {
  std::string toeplitz_path;
  std::string trigpoly_path;
};

int cmd_pair(Run& run, const PairArgs& a) {
  const BlockToeplitz t = io::toeplitz_from_json(run.load(a.toeplitz_path));
  json fj = run.load(a.trigpoly_path);
  force_kind(fj, "trigpoly");
  const TrigMatrixPoly f = io::trigpoly_from_json(fj);
  run.emit({{"value", io::to_json(duality_pair(t, f))}});
  return kOk;
}

// ---------------------------------------------------------------- cp-probe

struct ProbeArgs {
  std::string path;
  int n_max = 5;
  int trials = 200;
  std::uint64_t seed = kDefaultProbeSeed;
  double tol = kDefaultTol;
};

int cmd_cp_probe(Run& run, const ProbeArgs& a) {
  const MatrixMap psi = io::matrix_map_from_json(run.load(a.path));
  run.seed = a.seed;
  run.tolerances["tol"] = a.tol;
  const ProbeReport report = toeplitz_cp_probe(psi, a.n_max, a.trials, a.seed, a.tol);
  json body = io::to_json(report);
  body["map"] = psi.name();
  run.extra["violations"] = report.violations.size();
  run.emit(body);
  return report.violations.empty() ? kOk : kNegative;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Positivity, separability and dilation tools for block-Toeplitz matrices", "tsep"};
  app.require_subcommand(1);

  Run r;
  r.args = args;
  r.out = &out;
  r.err = &err;
  auto common = [&r](CLI::App* sub) {
    sub->add_option("-o,--out", r.out_path, "Write the result here (atomically) instead of stdout");
    sub->add_option("--manifest", r.manifest_path, "Write a run manifest to this file");
  };

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "Cone membership of a block-Toeplitz element or trig polynomial");
  c_check->add_option("path", check.path)->required();
  c_check->add_option("--kind", check.kind)->check(CLI::IsMember({"toeplitz", "trigpoly"}));
  c_check->add_option("--tol", check.tol)->check(CLI::PositiveNumber);
  c_check->add_option("--grid", check.grid, "Starting grid for trig polynomials (0: default)");
  common(c_check);

  DecomposeArgs dec;
  auto add_decompose_options = [&dec, &common](CLI::App* sub) {
    sub->add_option("path", dec.path)->required();
    sub->add_option("--engine", dec.engine)->check(CLI::IsMember({"auto", "caratheodory", "greedy", "grid2d"}));
    sub->add_option("--tol", dec.tol)->check(CLI::PositiveNumber);
    sub->add_option("--max-atoms", dec.max_atoms)->check(CLI::PositiveNumber);
    common(sub);
  };
  auto* c_decompose = app.add_subcommand("decompose", "Separable decomposition Σ T_n(λ_j) ⊗ b_j");
  add_decompose_options(c_decompose);
  auto* c_factorize = app.add_subcommand("factorize", "Decompose, then dilate to (1 ⊗ w)* T_n(u) (1 ⊗ w)");
  add_decompose_options(c_factorize);

  WitnessArgs witness;
  auto* c_witness = app.add_subcommand("witness", "Entanglement witness and separable search for a trig polynomial");
  c_witness->add_option("path", witness.path)->required();
  c_witness->add_option("--samples", witness.samples)->check(CLI::Range(2, 1 << 20));
  c_witness->add_option("--search-budget", witness.search_budget, "Max dictionary terms (0 skips the search)")
      ->check(CLI::NonNegativeNumber);
  c_witness->add_option("--tol", witness.tol)->check(CLI::PositiveNumber);
  c_witness->add_option("--search-tol", witness.search_tol)->check(CLI::PositiveNumber);
  common(c_witness);

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "Seeded instance generators");
  c_gen->add_option("--mode", gen.mode)
      ->required()
      ->check(CLI::IsMember({"atoms", "density", "pure", "universal", "dualpure"}));
  c_gen->add_option("--n", gen.n);
  c_gen->add_option("--p", gen.p);
  c_gen->add_option("--atoms", gen.atoms, "Atom count for --mode atoms (default n)");
  c_gen->add_option("--seed", gen.seed);
  c_gen->add_option("--lambda", gen.lambda, "Point of the circle for --mode universal, as re,im")
      ->expected(2)
      ->delimiter(',');
  c_gen->add_option("--kind", gen.kind, "universal only: trigpoly emits T_n(z) over M_n")
      ->check(CLI::IsMember({"toeplitz", "trigpoly"}));
  c_gen->add_option("--truth", gen.truth, "Ground-truth sidecar (default <out>.truth.json)");
  common(c_gen);

  PairArgs pair;
  auto* c_pair = app.add_subcommand("pair", "Duality pairing of a scalar Toeplitz element with a trig polynomial");
  c_pair->add_option("toeplitz", pair.toeplitz_path)->required();
  c_pair->add_option("trigpoly", pair.trigpoly_path)->required();
  common(c_pair);

  ProbeArgs probe;
  auto* c_probe = app.add_subcommand("cp-probe", "Randomized Toeplitz complete positivity probe of a map on M_p");
  c_probe->add_option("map", probe.path)->required();
  c_probe->add_option("--nmax", probe.n_max)->check(CLI::Range(2, 12));
  c_probe->add_option("--trials", probe.trials)->check(CLI::PositiveNumber);
  c_probe->add_option("--seed", probe.seed);
  c_probe->add_option("--tol", probe.tol)->check(CLI::PositiveNumber);
  common(c_probe);

  std::vector<const char*> argv{"tsep"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  int code = kError;
  try {
    if (sub == c_check) code = cmd_check(r, check);
    else if (sub == c_decompose) code = cmd_decompose(r, dec);
    else if (sub == c_factorize) code = cmd_factorize(r, dec);
    else if (sub == c_witness) code = cmd_witness(r, witness);
    else if (sub == c_gen) code = cmd_gen(r, gen);
    else if (sub == c_pair) code = cmd_pair(r, pair);
    else code = cmd_cp_probe(r, probe);
  } catch (const Error& e) {
    err << "tsep: " << e.what() << "\n";
    code = exit_for(e.code());
  } catch (const std::exception& e) {
    err << "tsep: " << e.what() << "\n";
    code = kError;
  }
  if (!r.manifest_path.empty()) {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    try {
      r.write_manifest(sub->get_name(), code, seconds);
    } catch (const std::exception& e) {
      err << "tsep: manifest: " << e.what() << "\n";
      if (code == kOk) code = kError;
    }
  }
  return code;
}

}  // namespace tsep::cli
