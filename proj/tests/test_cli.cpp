#include "olg/feasible.hpp"
#include "olg/game.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace olg;
namespace fs = std::filesystem;

namespace {

const std::string kCli = OLG_CLI_PATH;
const std::string kGames = OLG_GAMES_DIR;

struct RunResult {
  int exit_code;
  std::string output;  // stdout only
};

RunResult run(const std::string& args, const std::string& env_prefix = "") {
  fs::path capture = fs::temp_directory_path() / "olg_cli_capture.txt";
  std::string cmd = env_prefix + kCli + " " + args + " > " + capture.string() + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  std::ifstream in(capture);
  std::ostringstream buf;
  buf << in.rdbuf();
  r.output = buf.str();
  return r;
}

std::string game(const std::string& name) { return kGames + "/" + name; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("compute prints vertices with their generating sequences") {
  RunResult r = run("compute --game " + game("prisoners_dilemma.json") + " --delta 1/3 --T 1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("5/4,5/4,DC,CD") != std::string::npos);
  CHECK(r.output.find("2,-1,DC,DC") != std::string::npos);

  // (1,1) becomes extreme again once the discount is high enough
  RunResult high = run("compute --game " + game("prisoners_dilemma.json") + " --delta 2/3 --T 1");
  CHECK(high.exit_code == 0);
  CHECK(high.output.find("1,1,CC,CC") != std::string::npos);
}

TEST_CASE("compute --out writes the same rows to a file") {
  fs::path out = fs::temp_directory_path() / "olg_compute_out.csv";
  fs::remove(out);
  RunResult r = run("compute --game " + game("prisoners_dilemma.json") +
                    " --delta 1/3 --T 1 --out " + out.string());
  CHECK(r.exit_code == 0);
  std::string content = read_file(out);

  // re-hulling the emitted vertices reproduces the feasible set
  std::ifstream games_in(game("prisoners_dilemma.json"));
  std::ostringstream gbuf;
  gbuf << games_in.rdbuf();
  StageGame g = parse_game(gbuf.str());
  std::vector<Point> pts;
  std::istringstream lines(content);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string cell;
    Point p;
    for (int c = 0; c < 2; ++c) {
      REQUIRE(std::getline(cells, cell, ','));
      p.push_back(parse_rational(cell));
    }
    pts.push_back(std::move(p));
  }
  CHECK(hull_equal(Polytope::from_points(2, pts), feasible_set(g, Rat(1, 3))));
}

TEST_CASE("sweep emits a monotonicity report") {
  RunResult r = run("sweep --game " + game("prisoners_dilemma.json") + " --deltas 1/3,2/3,1");
  CHECK(r.exit_code == 0);
  auto doc = nlohmann::json::parse(r.output);
  REQUIRE(doc["pairs"].size() == 2);
  for (const auto& pair : doc["pairs"]) {
    CHECK(pair["contains"] == true);
    CHECK(pair["strict"] == true);
    CHECK(pair.contains("witness"));
  }
}

TEST_CASE("verify passes on the bundled games") {
  RunResult r = run("verify --game " + game("prisoners_dilemma.json") +
                    " --delta 1/2 --T 2 --trials 2000 --seed 99");
  CHECK(r.exit_code == 0);
  auto doc = nlohmann::json::parse(r.output);
  CHECK(doc["ok"] == true);
  for (const auto& check : doc["checks"]) CHECK(check["status"] == "pass");
}

TEST_CASE("breakpoints reports the switch point") {
  RunResult r = run("breakpoints --game " + game("prisoners_dilemma.json") + " --lambda 1,1");
  CHECK(r.exit_code == 0);
  auto doc = nlohmann::json::parse(r.output);
  CHECK(doc["exact_mode"] == true);
  REQUIRE(doc["breakpoints"].size() == 1);
  CHECK(doc["breakpoints"][0]["exact"] == true);
  CHECK(doc["breakpoints"][0]["value"] == "1/2");
  CHECK(doc["pieces"].size() == 2);
}

TEST_CASE("limits emits both ends") {
  RunResult one = run("limits --game " + game("prisoners_dilemma.json") + " --end one");
  CHECK(one.exit_code == 0);
  CHECK(nlohmann::json::parse(one.output)["vertices"].size() == 4);

  RunResult zero = run("limits --game " + game("prisoners_dilemma.json") + " --end zero");
  CHECK(zero.exit_code == 0);
  auto doc = nlohmann::json::parse(zero.output);
  CHECK(doc["vertices"].size() == 4);
  bool has_corner = false;
  for (const auto& v : doc["vertices"])
    has_corner = has_corner || (v[0] == "2" && v[1] == "2");
  CHECK(has_corner);
}

TEST_CASE("plot renders an SVG") {
  RunResult r = run("plot --game " + game("prisoners_dilemma.json") + " --deltas 1/3,2/3");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("<svg") != std::string::npos);
  CHECK(r.output.find("</svg>") != std::string::npos);

  RunResult r3 = run("plot --game " + game("coordination.json") + " --deltas 1/2");
  CHECK(r3.exit_code == 0);
  CHECK(r3.output.find("<svg") != std::string::npos);
}

TEST_CASE("missing input file exits 2") {
  RunResult r = run("compute --game /nonexistent/game.json --delta 1/2 --T 1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("malformed game or arguments exit 3") {
  fs::path bad = fs::temp_directory_path() / "olg_bad_game.json";
  std::ofstream(bad) << "{ not json";
  RunResult r = run("compute --game " + bad.string() + " --delta 1/2 --T 1");
  CHECK(r.exit_code == 3);

  RunResult r2 = run("compute --game " + game("prisoners_dilemma.json") + " --delta 3/2 --T 1");
  CHECK(r2.exit_code == 3);

  RunResult r3 = run("nonsense-subcommand");
  CHECK(r3.exit_code == 3);

  RunResult r4 = run("limits --game " + game("prisoners_dilemma.json") + " --end sideways");
  CHECK(r4.exit_code == 3);
}

TEST_CASE("enumeration cap exits 4") {
  RunResult r = run("compute --game " + game("prisoners_dilemma.json") + " --delta 1/2 --T 1",
                    "OLG_ENUM_CAP=3 ");
  CHECK(r.exit_code == 4);
}

TEST_CASE("plotting needs two or three players") {
  fs::path four = fs::temp_directory_path() / "olg_four_player.json";
  {
    nlohmann::json doc;
    doc["players"] = 4;
    doc["actions"] = nlohmann::json::array();
    for (int i = 0; i < 4; ++i)
      doc["actions"].push_back(nlohmann::json::array({"a", "b"}));
    // payoff tensor: 2x2x2x2, all zeros except the all-a profile
    auto cell = [](int s) { return nlohmann::json::array({s, s, s, s}); };
    nlohmann::json t = nlohmann::json::array();
    for (int i = 0; i < 2; ++i) {
      nlohmann::json l1 = nlohmann::json::array();
      for (int j = 0; j < 2; ++j) {
        nlohmann::json l2 = nlohmann::json::array();
        for (int k = 0; k < 2; ++k) {
          nlohmann::json l3 = nlohmann::json::array();
          for (int l = 0; l < 2; ++l) l3.push_back(cell(i + j + k + l == 0 ? 1 : 0));
          l2.push_back(std::move(l3));
        }
        l1.push_back(std::move(l2));
      }
      t.push_back(std::move(l1));
    }
    doc["payoffs"] = std::move(t);
    std::ofstream(four) << doc.dump();
  }
  RunResult compute_ok = run("compute --game " + four.string() + " --delta 1/2 --T 1");
  CHECK(compute_ok.exit_code == 0);
  RunResult r = run("plot --game " + four.string() + " --deltas 1/2");
  CHECK(r.exit_code == 3);
}
