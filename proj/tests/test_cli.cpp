#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "json.hpp"
#include "model_file.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "curvjac");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = curvjac::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(CURVJAC_FIXTURE_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "curvjac_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

json strip_time(json j) {
  j.erase("wall_time_s");
  return j;
}

}  // namespace

TEST_CASE("validate") {
  CHECK(cli({"validate", fixture("constant.curv.json")}).code == 0);
  CHECK(cli({"validate", fixture("product.curv.json")}).code == 0);

  const Result bad = cli({"validate", fixture("conflicting.curv.json")});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("R_2112") != std::string::npos);

  const Result malformed = cli({"validate", fixture("malformed.curv.json")});
  CHECK(malformed.code == 2);
  CHECK(malformed.err.find("dimm") != std::string::npos);

  CHECK(cli({"validate", fixture("does-not-exist.curv.json")}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
}

TEST_CASE("classify") {
  SUBCASE("product fixture") {
    const Result r = cli({"classify", fixture("product.curv.json"), "--json", "--samples", "64"});
    REQUIRE(r.code <= 1);
    const json j = json::parse(r.out);
    CHECK(j["einstein"]["lambda"].is_null());
    CHECK(j["puffini_videv"]["value"] == true);
    const auto& blocks = j["decomposition"]["blocks"];
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0]["dimension"] == 2);
    CHECK(blocks[1]["dimension"] == 2);
  }
  SUBCASE("constant fixture") {
    const Result r = cli({"classify", fixture("constant.curv.json"), "--json", "--samples", "64"});
    const json j = json::parse(r.out);
    CHECK(j["flat"]["value"] == false);
    CHECK(j["constant_curvature"]["kappa"].get<double>() == doctest::Approx(1.0));
    CHECK(j["einstein"]["lambda"].get<double>() == doctest::Approx(3.0));
  }
  SUBCASE("flat fixture") {
    const Result r = cli({"classify", fixture("flat.curv.json"), "--json", "--samples", "64"});
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["flat"]["value"] == true);
    CHECK(j["constant_curvature"]["kappa"] == 0.0);
    CHECK(j["einstein"]["lambda"] == 0.0);
    CHECK(j["pseudo_einstein"]["value"] == true);
    CHECK(j["puffini_videv"]["value"] == true);
    for (const auto& s : j["sweeps"]) CHECK(s["holds"] == true);
  }
  SUBCASE("text output") {
    const Result r = cli({"classify", fixture("product.curv.json"), "--samples", "16"});
    CHECK(r.out.find("einstein") != std::string::npos);
  }
  SUBCASE("bad flags") {
    CHECK(cli({"classify", fixture("product.curv.json"), "--samples", "zero"}).code == 2);
    CHECK(cli({"classify"}).code == 2);
  }
}

TEST_CASE("classify --json is deterministic") {
  const std::string f = fixture("random.curv.json");
  const Result a = cli({"classify", f, "--json", "--samples", "64", "--seed", "9"});
  const Result b = cli({"classify", f, "--json", "--samples", "64", "--seed", "9"});
  const Result c = cli({"classify", f, "--json", "--samples", "64", "--seed", "9", "--threads", "4"});
  const std::string ja = strip_time(json::parse(a.out)).dump();
  CHECK(ja == strip_time(json::parse(b.out)).dump());
  CHECK(ja == strip_time(json::parse(c.out)).dump());
}

TEST_CASE("verify") {
  const fs::path repro = scratch("repro.curv.json");
  SUBCASE("polarized criterion agrees with sampling") {
    const Result r = cli({"verify", "--theorem", "3.1", "--trials", "10", "--seed", "1", "--samples", "32",
                          "--reproducer", repro.string()});
    CHECK(r.code == 0);
  }
  SUBCASE("block round trip lists block multisets") {
    const Result r = cli({"verify", "--theorem", "3.2", "--trials", "6", "--seed", "1", "--samples", "32", "--json",
                          "--reproducer", repro.string()});
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    bool any_blocks = false;
    for (const auto& rec : j["records"])
      if (rec.contains("blocks") && rec["blocks"].size() >= 2) any_blocks = true;
    CHECK(any_blocks);
  }
  SUBCASE("zero trials") { CHECK(cli({"verify", "--theorem", "2.2", "--trials", "0"}).code == 2); }
  SUBCASE("unknown statement") { CHECK(cli({"verify", "--theorem", "9.9"}).code == 2); }
}

TEST_CASE("generate") {
  SUBCASE("constant round-trips through validate") {
    const fs::path out = scratch("gen-constant.curv.json");
    CHECK(cli({"generate", "constant", "--dim", "4", "--kappa", "1", "-o", out.string()}).code == 0);
    CHECK(cli({"validate", out.string()}).code == 0);
  }
  SUBCASE("direct sum classifies into two blocks") {
    const fs::path out = scratch("gen-sum.curv.json");
    CHECK(cli({"generate", "direct-sum", "--block", "constant,dim=2,kappa=1", "--block",
               "constant,dim=2,kappa=2", "--rotate", "--seed", "3", "-o", out.string()})
              .code == 0);
    const Result r = cli({"classify", out.string(), "--json", "--samples", "32"});
    const json j = json::parse(r.out);
    CHECK(j["decomposition"]["blocks"].size() == 2);
  }
  SUBCASE("stdout") {
    const Result r = cli({"generate", "flat", "--dim", "3", "-o", "-"});
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["dim"] == 3);
  }
  SUBCASE("non-symmetric phi") {
    CHECK(cli({"generate", "r-phi", "--dim", "2", "--phi", "1,2;3,4", "-o", "-"}).code == 2);
  }
}

TEST_CASE("model file parsing") {
  using curvjac::cli::InputError;
  using curvjac::cli::parse_model_file;
  CHECK_THROWS_AS(parse_model_file(json::parse(R"({"dim":3,"signature":{"p":2,"q":2},"curvature":{"kind":"flat"}})")),
                  InputError);
  CHECK_THROWS_AS(
      parse_model_file(json::parse(
          R"({"dim":2,"signature":{"p":2,"q":0},"curvature":{"kind":"components","entries":[[1,2,2,3,1.0]]}})")),
      InputError);
  const auto ok = parse_model_file(
      json::parse(R"({"dim":2,"signature":{"p":1,"q":1},"curvature":{"kind":"constant","kappa":-1}})"));
  CHECK(ok.p == 1);
  REQUIRE(ok.generator);
  CHECK(ok.generator->kappa == -1.0);
  CHECK(curvjac::cli::fnv1a64("") == "cbf29ce484222325");
}

TEST_CASE("help and version") {
  CHECK(cli({"--help"}).code == 0);
  const Result v = cli({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find("1.0.0") != std::string::npos);
}
