#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "quasibasis/cli.hpp"
#include "quasibasis/constructions.hpp"
#include "quasibasis/io.hpp"
#include "test_support.hpp"

using namespace qb;
using namespace qbtest;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  json result() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("qb_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

void write_state(const std::string& path, const HermitianOperator& rho) { io::write_json_file(path, io::state_to_json(rho)); }

HermitianOperator ket0(int d) {
  CVector v = CVector::Zero(d);
  v[0] = 1.0;
  return HermitianOperator::outer(v);
}

}  // namespace

TEST_CASE("construct writes a classified basis") {
  TempDir tmp;
  const auto r = run({"construct", "sic", "--d", "2", "--out", tmp / "sic2.json"});
  REQUIRE(r.code == cli::kExitOk);
  const auto j = r.result();
  CHECK(j["command"] == "construct");
  CHECK(j["status"] == "ok");
  CHECK(j["payload"]["summary"] == "MIC, unbiased, rank-1");
  CHECK(j["payload"]["size"] == 4);
  const auto basis = io::basis_from_json(io::read_json_file(tmp / "sic2.json"));
  CHECK(basis.size() == 4);
  CHECK(max_elementwise(basis, builtin_sic(2)) < 1e-15);

  const auto w = run({"construct", "wootters", "--d", "3"});
  REQUIRE(w.code == 0);
  CHECK(w.result()["payload"]["summary"] == "Wigner basis, unbiased");
  CHECK(w.result()["payload"].contains("basis"));

  const auto composite = run({"construct", "wootters", "--primes", "2,3"});
  REQUIRE(composite.code == 0);
  CHECK(composite.result()["payload"]["dimension"] == 6);

  const auto tens = run({"construct", "tensorhedron", "--n", "2"});
  REQUIRE(tens.code == 0);
  CHECK(tens.result()["payload"]["size"] == 16);
}

TEST_CASE("round trip preserves classification") {
  TempDir tmp;
  for (const std::string variant : {"mic", "unbiased-mic", "unbiased-wigner"}) {
    const std::string path = tmp / (variant + ".json");
    const auto r = run({"construct", "random", "--d", "3", "--seed", "5", "--variant", variant, "--out", path});
    REQUIRE(r.code == 0);
    const auto back = io::basis_from_json(io::read_json_file(path));
    CHECK(classify(back).summary() == r.result()["payload"]["summary"].get<std::string>());
  }
}

TEST_CASE("collinear and principal Wigner commands") {
  TempDir tmp;
  REQUIRE(run({"construct", "sic", "--d", "2", "--out", tmp / "sic2.json"}).code == 0);
  const auto anti = run({"construct", "collinear", "--in", tmp / "sic2.json", "--t", "-1", "--out", tmp / "anti.json"});
  REQUIRE(anti.code == 0);
  CHECK(anti.result()["payload"]["summary"] == "MIC, unbiased, rank-1");
  const auto range = anti.result()["payload"]["mic_t_range"];
  CHECK(range[0].get<double>() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(range[1].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  const auto pw = run({"pw", "--in", tmp / "sic2.json", "--out", tmp / "pw.json"});
  REQUIRE(pw.code == 0);
  CHECK(pw.result()["payload"]["summary"] == "Wigner basis, unbiased");
  const auto f = io::basis_from_json(io::read_json_file(tmp / "pw.json"));
  const double r3 = std::sqrt(3.0);
  CHECK(max_abs_diff(f[0], (r3 / 2.0) * (2.0 * builtin_sic(2)[0]) + ((1.0 - r3) / 4.0) * HermitianOperator::identity(2)) <
        1e-12);

  io::write_json_file(tmp / "w3.json", io::basis_to_json(wootters_wigner(3)));
  REQUIRE(run({"pw", "--in", tmp / "w3.json", "--out", tmp / "w3pw.json"}).code == 0);
  CHECK(max_elementwise(io::basis_from_json(io::read_json_file(tmp / "w3pw.json")), wootters_wigner(3)) < 1e-10);

  // Shifted PW of the Hesse SIC is the Wootters qutrit basis.
  REQUIRE(run({"construct", "sic", "--d", "3", "--out", tmp / "sic3.json"}).code == 0);
  REQUIRE(run({"pw", "--in", tmp / "sic3.json", "--shifted", "--out", tmp / "spw3.json"}).code == 0);
  CHECK(max_elementwise(io::basis_from_json(io::read_json_file(tmp / "spw3.json")), wootters_wigner(3)) < 1e-12);
}

TEST_CASE("verify suites") {
  TempDir tmp;
  REQUIRE(run({"construct", "sic", "--d", "2", "--out", tmp / "sic2.json"}).code == 0);

  const auto t2 = run({"verify", "theorem2", "--in", tmp / "sic2.json"});
  REQUIRE(t2.code == 0);
  const auto p = t2.result()["payload"];
  CHECK(p["lower_bound"].get<double>() == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-12));
  CHECK(p["upper_bound"].get<double>() == doctest::Approx(2.0 + std::sqrt(3.0)).epsilon(1e-12));
  CHECK(p["saturated_lower"] == true);
  CHECK(p["saturated_upper"] == true);

  CHECK(run({"verify", "theorem1", "--in", tmp / "sic2.json"}).code == 0);
  CHECK(run({"verify", "collinear", "--in", tmp / "sic2.json", "--t", "0.7,-0.7"}).code == 0);
  CHECK(run({"verify", "triple", "--in", tmp / "sic2.json"}).code == 0);

  const auto neg = run({"pw", "--in", tmp / "sic2.json", "--out", tmp / "pw2.json"});
  REQUIRE(neg.code == 0);
  const auto n = run({"verify", "negativity", "--in", tmp / "pw2.json", "--samples", "2000", "--seed", "3"});
  REQUIRE(n.code == 0);
  CHECK(n.result()["payload"]["ceiling_negativity"].get<double>() ==
        doctest::Approx((std::sqrt(3.0) - 1.0) / 4.0).epsilon(1e-12));
  CHECK(n.result()["payload"]["sampled"].get<double>() <= (std::sqrt(3.0) - 1.0) / 4.0 + 1e-12);

  io::write_json_file(tmp / "w3.json", io::basis_to_json(wootters_wigner(3)));
  const std::string csv = tmp / "gamma.csv";
  CHECK(run({"verify", "triple", "--in", tmp / "w3.json", "--area", "--csv", csv}).code == 0);
  std::ifstream in(csv);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 729 + 1);

  // --tol after the subcommand reaches the clauses.
  CHECK(run({"verify", "theorem2", "--in", tmp / "sic2.json", "--tol", "1e-6"}).code == 0);
}

TEST_CASE("exit codes") {
  TempDir tmp;
  REQUIRE(run({"construct", "random", "--d", "3", "--seed", "2", "--variant", "unbiased-wigner", "--out",
               tmp / "w.json"})
              .code == 0);
  const auto failed = run({"verify", "triple", "--in", tmp / "w.json", "--area"});
  CHECK(failed.code == cli::kExitVerificationFailed);
  CHECK(failed.err.find("failed: area_phase") != std::string::npos);
  CHECK(failed.result()["status"] == "error");

  CHECK(run({"construct", "bogus"}).code == cli::kExitUsage);
  CHECK(run({"verify", "theorem2"}).code == cli::kExitUsage);
  CHECK(run({"--help"}).code == cli::kExitOk);

  // Library errors map to the usage code with a typed payload.
  const auto biased = run({"construct", "random", "--d", "3", "--seed", "1", "--out", tmp / "m.json"});
  REQUIRE(biased.code == 0);
  const auto e = run({"verify", "theorem2", "--in", tmp / "m.json"});
  CHECK(e.code == cli::kExitUsage);
  CHECK(e.result()["payload"]["error"] == "biased_reference");
  CHECK(e.err.rfind("error: ", 0) == 0);
}

TEST_CASE("represent") {
  TempDir tmp;
  io::write_json_file(tmp / "w3.json", io::basis_to_json(wootters_wigner(3)));
  write_state(tmp / "garbage.json", (1.0 / 3.0) * HermitianOperator::identity(3));
  write_state(tmp / "ket0.json", ket0(3));

  const auto g = run({"represent", "--state", tmp / "garbage.json", "--basis", tmp / "w3.json"});
  REQUIRE(g.code == 0);
  for (const auto& v : g.result()["payload"]["values"]) CHECK(v.get<double>() == doctest::Approx(1.0 / 9.0));

  const auto pure = run({"represent", "--state", tmp / "ket0.json", "--basis", tmp / "w3.json", "--mode", "quasi"});
  REQUIRE(pure.code == 0);
  CHECK(pure.result()["payload"]["sum"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  const auto split = run({"represent", "--state", tmp / "ket0.json", "--basis", tmp / "w3.json", "--mode", "split"});
  REQUIRE(split.code == 0);
  CHECK(split.result()["payload"].contains("left"));

  const auto csv =
      run({"represent", "--state", tmp / "ket0.json", "--basis", tmp / "w3.json", "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("index,value\n", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 10);

  io::write_json_file(tmp / "m.json", io::basis_to_json(random_mic(3, 1)));
  const auto refused = run({"represent", "--state", tmp / "ket0.json", "--basis", tmp / "m.json", "--mode", "split"});
  CHECK(refused.code == cli::kExitUsage);
  CHECK(refused.result()["payload"]["error"] == "biased_reference");

  io::write_json_file(tmp / "sic2.json", io::basis_to_json(builtin_sic(2)));
  CHECK(run({"represent", "--state", tmp / "ket0.json", "--basis", tmp / "sic2.json"}).code == cli::kExitUsage);
}

TEST_CASE("output is deterministic") {
  const auto a = run({"construct", "random", "--d", "4", "--seed", "9", "--variant", "unbiased-mic"});
  const auto b = run({"construct", "random", "--d", "4", "--seed", "9", "--variant", "unbiased-mic"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto c = run({"construct", "random", "--d", "4", "--seed", "10", "--variant", "unbiased-mic"});
  CHECK(a.out != c.out);
}
