#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "mtdhg/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded.
Run Cli(const std::string& args) {
  const std::string command = std::string(MTDHG_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Run run;
  char buffer[4096];
  std::size_t got;
  while ((got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) run.out.append(buffer, got);
  const int status = pclose(pipe);
  run.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

fs::path Dir() {
  const fs::path dir = fs::temp_directory_path() / "mtdhg_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string Path(const std::string& name) { return (Dir() / name).string(); }

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(Cli("--help").code == 0);
  CHECK(Cli("").code == 2);
  CHECK(Cli("frobnicate").code == 2);
  CHECK(Cli("solve bsse").code == 2);  // missing --instance
  CHECK(Cli("generate --types 0 --targets 2 --seed 1 --out " + Path("x.json")).code == 2);
}

TEST_CASE("generate then solve") {
  const auto inst = Path("k1.json");
  REQUIRE(Cli("generate --types 2 --targets 1 --seed 3 --out " + inst).code == 0);
  const auto doc = mtdhg::io::read_json_file(inst);
  CHECK(doc["K"] == 1);
  CHECK(doc["n"] == 2);
  for (const char* kind : {"bsse", "hbne"}) {
    const auto run = Cli(std::string("solve ") + kind + " --instance " + inst + " --json");
    REQUIRE(run.code == 0);
    const auto out = mtdhg::io::parse_json_text(run.out);
    CHECK(out["x"][0].get<double>() == doctest::Approx(doc["R_d"].get<double>()));
  }
  // Text mode prints something readable.
  const auto text = Cli("solve bsse --instance " + inst);
  CHECK(text.code == 0);
  CHECK_FALSE(text.out.empty());
}

TEST_CASE("same seed, same instance") {
  REQUIRE(Cli("generate --types 3 --targets 3 --seed 9 --out " + Path("a.json")).code == 0);
  REQUIRE(Cli("generate --types 3 --targets 3 --seed 9 --out " + Path("b.json")).code == 0);
  CHECK(mtdhg::io::read_json_file(Path("a.json")) == mtdhg::io::read_json_file(Path("b.json")));
}

TEST_CASE("robust check on the hbne strategy") {
  const auto inst = Path("r.json");
  REQUIRE(Cli("generate --types 2 --targets 3 --seed 5 --out " + inst).code == 0);
  const auto solved = Cli("solve hbne --instance " + inst + " --json");
  REQUIRE(solved.code == 0);
  std::ofstream(Path("x.json")) << solved.out;
  const auto doc = mtdhg::io::read_json_file(inst);
  const std::string p = doc["P"][0].dump() + "," + doc["P"][1].dump();
  const auto run = Cli("check robust --instance " + inst + " --x-file " + Path("x.json") +
                       " --p-prime " + p + " --json");
  CHECK(run.code == 0);
  CHECK(mtdhg::io::parse_json_text(run.out)["is_robust"] == true);

  // A fragile verdict is still a successful run.
  const auto far = Cli("check robust --instance " + inst + " --x-file " + Path("x.json") +
                       " --p-prime 1,0");
  CHECK(far.code == 0);

  CHECK(Cli("check robust --instance " + inst + " --x-file " + Path("x.json") +
            " --p-prime 0.5,abc")
            .code == 2);

  const auto radius = Cli("radius --instance " + inst + " --x-file " + Path("x.json") +
                          " --directions 4 --json");
  CHECK(radius.code == 0);
  CHECK(mtdhg::io::parse_json_text(radius.out)["directions_evaluated"] == 6);
}

TEST_CASE("stability check") {
  const auto inst = Path("s.json");
  REQUIRE(Cli("generate --types 2 --targets 2 --seed 12 --out " + inst).code == 0);
  const auto run = Cli("check stability --instance " + inst + " --json");
  REQUIRE(run.code == 0);
  const auto doc = mtdhg::io::parse_json_text(run.out);
  CHECK(doc["sol"].contains("sol_nonempty"));
  CHECK(doc.contains("strategy_hbne"));
}

TEST_CASE("bad inputs exit 1 with a json error") {
  std::ofstream(Path("bad.json")) << R"({"K": 1})";
  const auto run = Cli("solve bsse --instance " + Path("bad.json") + " --json");
  CHECK(run.code == 1);
  const auto err = mtdhg::io::parse_json_text(run.out);
  CHECK(err["error"]["kind"] == "ShapeError");

  std::ofstream(Path("invalid.json"))
      << R"({"K":1,"n":1,"R_d":1,"R_a":1,"theta0":0,"P":[1],"U_d_c":[0],"U_d_u":[1],)"
      << R"("U_a_c":[[0]],"U_a_u":[[1]]})";
  const auto inv = Cli("solve hbne --instance " + Path("invalid.json") + " --json");
  CHECK(inv.code == 1);
  const auto e2 = mtdhg::io::parse_json_text(inv.out);
  CHECK(e2["error"]["kind"] == "ValidationError");
  CHECK(e2["error"]["violations"].size() >= 1);

  CHECK(Cli("solve bsse --instance " + Path("does-not-exist.json")).code == 1);
}

TEST_CASE("experiments") {
  const auto cfg = Path("cfg.json");
  std::ofstream(cfg) << R"({"type_counts": [2], "target_counts": [2], "instances_per_cell": 3,
                           "grid_step": 0.5, "out_dir": ")"
                     << Path("runs") << "\"}";
  CHECK(Cli("exp fig1 --config " + cfg).code == 0);
  CHECK(Cli("exp fig2 --config " + cfg + " --threads 2").code == 0);
  std::ofstream(Path("badcfg.json")) << R"({"typo": 1})";
  CHECK(Cli("exp fig1 --config " + Path("badcfg.json")).code == 1);
}
