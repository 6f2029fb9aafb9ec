#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "oracles.hpp"
#include "tsep/generators.hpp"
#include "tsep/io.hpp"

using namespace tsep;
using io::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const char* env = std::getenv("TSEP_TEST_TMP");
    dir_ = fs::path(env ? env : fs::temp_directory_path().string()) /
           ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const json& j) const { return write_text(name, io::dump(j)); }

  std::string write_text(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
    return path(name);
  }

  static std::string read(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  static Result call(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    Result r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
  }

  static json body(const Result& r) { return io::parse(r.out); }

  fs::path dir_;
};

BlockToeplitz indefinite() {
  BlockToeplitz t(2, 1);
  t.coeff(0)(0, 0) = 1.0;
  t.coeff(1)(0, 0) = 2.0;
  t.coeff(-1)(0, 0) = 2.0;
  return t;
}

}  // namespace

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(cli::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(Cli, CheckExamples) {
  Result r = call({"check", write("unit.json", io::to_json(BlockToeplitz::order_unit(2, 2)))});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NEAR(body(r)["margin"].get<double>(), 1.0, 1e-14);

  r = call({"check", write("t3.json", io::to_json(universal_toeplitz(3, 1.0)))});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(body(r)["verdict"], "Positive");
  EXPECT_NEAR(body(r)["margin"].get<double>(), 0.0, 1e-14);

  r = call({"check", write("bad.json", io::to_json(indefinite()))});
  EXPECT_EQ(r.code, cli::kNegative);
  const json w = body(r)["witness"];
  ASSERT_EQ(w.size(), 2u);
  CVector v(2);
  for (int i = 0; i < 2; ++i) v(i) = io::complex_from_json(w[static_cast<std::size_t>(i)]);
  EXPECT_NEAR((v.adjoint() * oracle::assemble(indefinite()) * v)(0, 0).real(), -1.0, 1e-12);
}

TEST_F(Cli, CheckTrigpoly) {
  TrigMatrixPoly f(2, 1);
  f.coeff(0)(0, 0) = 1.0;
  f.coeff(1)(0, 0) = 1.0;
  f.coeff(-1)(0, 0) = 1.0;
  const Result r = call({"check", write("f.json", io::to_json(f))});
  EXPECT_EQ(r.code, cli::kNegative);
  EXPECT_TRUE(body(r).contains("grid"));
  // Same file without "kind", told on the command line.
  json plain = io::to_json(f);
  plain.erase("kind");
  EXPECT_EQ(call({"check", "--kind", "trigpoly", write("plain.json", plain)}).code, cli::kNegative);
  EXPECT_EQ(call({"check", "--kind", "toeplitz", write("clash.json", io::to_json(f))}).code, cli::kError);
}

TEST_F(Cli, InputErrors) {
  Result r = call({"check", write_text("broken.json", "{\n  \"n\": 2,\n  \"p\": }\n")});
  EXPECT_EQ(r.code, cli::kError);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;

  r = call({"check", path("missing.json")});
  EXPECT_EQ(r.code, cli::kError);

  EXPECT_EQ(call({"nope"}).code, cli::kError);
  EXPECT_EQ(call({}).code, cli::kError);
  EXPECT_EQ(call({"--help"}).code, cli::kOk);
  EXPECT_EQ(call({"gen", "--mode", "density", "--n", "13"}).code, cli::kError);
}

TEST_F(Cli, DecomposeEngines) {
  Rng rng(701);
  const cplx lambda = rng.unit_complex();
  const CMatrix q = random_rank_one_projection(2, rng);
  Result r = call({"decompose", write("pure.json", io::to_json(tensor(universal_toeplitz(3, std::conj(lambda)), q)))});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  json b = body(r);
  EXPECT_EQ(b["engine"], "greedy");
  EXPECT_EQ(b["atoms"].size(), 1u);
  EXPECT_LE(b["residual"].get<double>(), 1e-10);

  r = call({"decompose", write("unit.json", io::to_json(BlockToeplitz::order_unit(2, 2)))});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(body(r)["engine"], "grid2d");
  EXPECT_LE(body(r)["residual"].get<double>(), 1e-8);
  r = call({"decompose", "--engine", "greedy", path("unit.json")});
  EXPECT_LE(body(r)["atoms"].size(), 4u);

  r = call({"decompose", write("scalar.json", io::to_json(BlockToeplitz::order_unit(2, 1)))});
  EXPECT_EQ(body(r)["engine"], "caratheodory");

  const BlockToeplitz density = gen_density(3, 2, rng);
  r = call({"decompose", write("density.json", io::to_json(density))});
  ASSERT_EQ(r.code, cli::kOk);
  const AtomicDecomposition dec = io::decomposition_from_json(body(r));
  EXPECT_LE(oracle::decomposition_residual(dec, density), 1e-6 * std::max(1.0, density.frobenius_norm()));

  EXPECT_EQ(call({"decompose", write("bad.json", io::to_json(indefinite()))}).code, cli::kNegative);
}

TEST_F(Cli, DecomposeBudgetEmitsBestSoFar) {
  Rng rng(703);
  const std::string in = write("density.json", io::to_json(gen_density(4, 3, rng)));
  const Result r = call({"decompose", "--max-atoms", "1", in});
  EXPECT_EQ(r.code, cli::kBudget);
  EXPECT_EQ(body(r)["status"], "BudgetExhausted");
  EXPECT_LE(body(r)["atoms"].size(), 1u);
  EXPECT_NE(r.err.find("BudgetExhausted"), std::string::npos);
}

TEST_F(Cli, FactorizeIsNoWorseThanDecompose) {
  Rng rng(705);
  for (int trial = 0; trial < 3; ++trial) {
    const std::string in = write("t" + std::to_string(trial) + ".json", io::to_json(gen_density(2 + trial, 2, rng)));
    const Result d = call({"decompose", in});
    const Result f = call({"factorize", in});
    ASSERT_EQ(d.code, cli::kOk);
    ASSERT_EQ(f.code, cli::kOk) << f.err;
    EXPECT_LE(body(f)["residual"].get<double>(), body(d)["residual"].get<double>() + 1e-9);
    EXPECT_EQ(body(f)["decomposition_residual"], body(d)["residual"]);
  }
  // Scalar identity: u = diag(1, −1).
  const Result r = call({"factorize", write("id.json", io::to_json(BlockToeplitz::order_unit(2, 1)))});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_EQ(body(r)["factorization"]["q"], 2);
  EXPECT_LE(body(r)["residual"].get<double>(), 1e-12);
}

TEST_F(Cli, WitnessVerdicts) {
  for (int n = 2; n <= 6; ++n) {
    const Result r = call({"witness", write("t" + std::to_string(n) + ".json", io::to_json(universal_trigpoly(n)))});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_EQ(body(r)["verdict"], "Entangled") << "n " << n;
  }
  const Result c = call({"witness", write("const.json", io::to_json(TrigMatrixPoly::order_unit(3, 2)))});
  EXPECT_EQ(body(c)["verdict"], "SeparableFound");
  const Result skip = call({"witness", "--search-budget", "0", path("const.json")});
  EXPECT_EQ(body(skip)["verdict"], "Undecided");
}

TEST_F(Cli, GenExamples) {
  Result r = call({"gen", "--mode", "atoms", "--n", "3", "--p", "2", "--atoms", "3", "--seed", "7", "-o", path("a.json")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(call({"check", path("a.json")}).code, cli::kOk);
  const AtomicDecomposition truth = io::decomposition_from_json(io::read_file(path("a.json.truth.json")));
  EXPECT_EQ(truth.atoms.size(), 3u);
  EXPECT_LE(oracle::decomposition_residual(truth, io::toeplitz_from_json(io::read_file(path("a.json")))), 1e-12);

  r = call({"gen", "--mode", "universal", "--n", "4", "--lambda", "1,0"});
  const BlockToeplitz u = io::toeplitz_from_json(body(r));
  EXPECT_EQ((assemble(u) - CMatrix::Ones(4, 4)).norm(), 0.0);

  r = call({"gen", "--mode", "pure", "--n", "3", "--p", "2", "--seed", "1"});
  EXPECT_TRUE(purity_check(io::toeplitz_from_json(body(r))).pure);

  r = call({"gen", "--mode", "universal", "--n", "3", "--kind", "trigpoly"});
  EXPECT_EQ(body(r)["kind"], "trigpoly");
  EXPECT_EQ(body(r)["p"], 3);
}

TEST_F(Cli, PairExamples) {
  const std::string unit = write("unit.json", io::to_json(BlockToeplitz::order_unit(2, 1)));
  TrigMatrixPoly chi0(2, 1);
  chi0.coeff(0)(0, 0) = 1.0;
  Result r = call({"pair", unit, write("chi0.json", io::to_json(chi0))});
  EXPECT_EQ(io::complex_from_json(body(r)["value"]), cplx(1.0));

  const std::string r1 = write("r1.json", io::to_json(BlockToeplitz::from_assembled(shift_power(2, 1), 2, 1)));
  TrigMatrixPoly chi(2, 1);
  chi.coeff(-1)(0, 0) = 1.0;
  EXPECT_EQ(io::complex_from_json(body(call({"pair", r1, write("chim.json", io::to_json(chi))}))["value"]), cplx(1.0));
  chi.coeff(-1)(0, 0) = 0.0;
  chi.coeff(1)(0, 0) = 1.0;
  EXPECT_EQ(io::complex_from_json(body(call({"pair", r1, write("chip.json", io::to_json(chi))}))["value"]), cplx(0.0));
}

TEST_F(Cli, CpProbe) {
  Result r = call({"cp-probe", "--nmax", "3", "--trials", "20", write("t.json", json{{"preset", "transpose"}, {"p", 2}})});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(body(r)["violations"].size(), 0u);
  EXPECT_EQ(body(r)["map"], "transpose");
  r = call({"cp-probe", "--nmax", "3", "--trials", "20", write("i.json", json{{"preset", "identity"}, {"p", 3}})});
  EXPECT_EQ(r.code, cli::kOk);

  json units = json::array();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CMatrix img = CMatrix::Zero(2, 2);
      if (i == j) img(0, 0) = 1.0;
      img(i, j) -= 0.5;
      units.push_back(io::to_json(img));
    }
  }
  r = call({"cp-probe", "--nmax", "3", "--trials", "20", write("bad.json", json{{"p", 2}, {"q", 2}, {"units", units}})});
  EXPECT_EQ(r.code, cli::kNegative);
  EXPECT_GE(body(r)["violations"].size(), 1u);
}

TEST_F(Cli, DeterministicOutputsAndManifests) {
  for (const char* name : {"x", "y"}) {
    const std::string base = path(name);
    const Result r = call({"gen", "--mode", "density", "--n", "3", "--p", "2", "--seed", "11", "-o", base + ".json",
                           "--manifest", base + ".manifest.json"});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
  }
  const std::string x = read(path("x.json"));
  EXPECT_EQ(x, read(path("y.json")));
  const json mx = io::parse(read(path("x.manifest.json")));
  const json my = io::parse(read(path("y.manifest.json")));
  EXPECT_EQ(mx["result_sha256"], my["result_sha256"]);
  EXPECT_EQ(mx["result_sha256"], cli::sha256_hex(x));
  EXPECT_EQ(mx["seed"], 11);
  EXPECT_EQ(mx["rng"], std::string(Rng::kName));
  EXPECT_EQ(mx["exit_code"], 0);

  // A consumer run digests its input.
  const Result d = call({"decompose", path("x.json"), "-o", path("d1.json"), "--manifest", path("d1.manifest.json")});
  ASSERT_EQ(d.code, cli::kOk);
  call({"decompose", path("x.json"), "-o", path("d2.json"), "--manifest", path("d2.manifest.json")});
  EXPECT_EQ(read(path("d1.json")), read(path("d2.json")));
  const json md = io::parse(read(path("d1.manifest.json")));
  EXPECT_EQ(md["inputs"][0]["sha256"], cli::sha256_hex(x));
  EXPECT_EQ(md["engine"], "greedy");
  EXPECT_EQ(md["result_sha256"], cli::sha256_hex(read(path("d1.json"))));
  EXPECT_FALSE(fs::exists(path("d1.json.tmp")));
}
