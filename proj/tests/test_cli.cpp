#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string audit_bin() {
  const char* bin = std::getenv("AUDIT_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "AUDIT_BIN not set");
  return bin;
}

int run_cmd(const std::string& args) {
  const std::string cmd = audit_bin() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string capture_cmd(const std::string& args) {
  const std::string out = "/tmp/audit_cli_capture.txt";
  const std::string cmd = audit_bin() + " " + args + " >" + out + " 2>&1";
  std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  f << content;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("zoo list prints the 21 models") {
  const std::string out = capture_cmd("zoo list");
  CHECK(out.find("21 models") != std::string::npos);
  CHECK(out.find("random_forest") != std::string::npos);
  CHECK(out.find("mlp_128x64") != std::string::npos);
  CHECK(run_cmd("zoo list") == 0);
}

TEST_CASE("synth subcommand") {
  const std::string out_csv = "/tmp/audit_cli_synth.csv";
  SUBCASE("writes the requested csv deterministically") {
    CHECK(run_cmd("synth --n 24 --weights 2,0.5 --noise 0.1 --seed 5 --out " +
                  out_csv) == 0);
    const std::string first = slurp(out_csv);
    CHECK(run_cmd("synth --n 24 --weights 2,0.5 --noise 0.1 --seed 5 --out " +
                  out_csv) == 0);
    CHECK(first == slurp(out_csv));
    std::istringstream in(first);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 25);  // header + rows
    fs::remove(out_csv);
  }
  SUBCASE("negative noise exits 2") {
    CHECK(run_cmd("synth --n 24 --weights 2,0.5 --noise -1 --seed 5 --out " +
                  out_csv) == 2);
  }
  SUBCASE("bad weights exit 2") {
    CHECK(run_cmd("synth --n 24 --weights abc --out " + out_csv) == 2);
  }
}

TEST_CASE("run subcommand exit codes") {
  SUBCASE("missing config exits 2") {
    CHECK(run_cmd("run --config /tmp/definitely_missing.json") == 2);
  }
  SUBCASE("unknown model in config exits 2") {
    const std::string cfg = "/tmp/audit_cli_badmodel.json";
    write_file(cfg, R"({"synth": {"n": 20, "weights": [1.0, 0.5]},
                        "zoo": {"include": ["warp_drive"]},
                        "top_k": [1], "out_dir": "/tmp/audit_cli_out"})");
    CHECK(run_cmd("run --config " + cfg) == 2);
  }
  SUBCASE("missing dataset file exits 3") {
    const std::string cfg = "/tmp/audit_cli_baddata.json";
    write_file(cfg, R"({"dataset": {"path": "/tmp/no_such_data.csv",
                                    "target": "y"},
                        "top_k": [1], "out_dir": "/tmp/audit_cli_out"})");
    CHECK(run_cmd("run --config " + cfg) == 3);
  }
  SUBCASE("a small pipeline run exits 0 and writes its outputs") {
    const std::string cfg = "/tmp/audit_cli_ok.json";
    const std::string out_dir = "/tmp/audit_cli_run_out";
    fs::remove_all(out_dir);
    write_file(cfg, R"({"synth": {"n": 30, "weights": [3.0, 1.0], "noise": 0.05,
                                  "seed": 2},
                        "zoo": {"include": ["ridge", "knn", "decision_tree"]},
                        "folds": 3, "top_k": [1, 2],
                        "out_dir": ")" + out_dir + R"("})");
    CHECK(run_cmd("run --config " + cfg) == 0);
    CHECK(fs::exists(fs::path(out_dir) / "report.json"));
    CHECK(fs::exists(fs::path(out_dir) / "report.md"));
    CHECK(fs::exists(fs::path(out_dir) / "rank_matrix.svg"));
    CHECK(fs::exists(fs::path(out_dir) / "r2_bars.svg"));
    CHECK(fs::exists(fs::path(out_dir) / "target_hist.svg"));
    CHECK(fs::exists(fs::path(out_dir) / "attributions" / "ridge.csv"));
  }
}

TEST_CASE("explain subcommand") {
  const std::string cfg = "/tmp/audit_cli_explain.json";
  const std::string out_dir = "/tmp/audit_cli_explain_out";
  write_file(cfg, R"({"synth": {"n": 20, "weights": [2.0, 1.0], "seed": 9},
                      "zoo": {"include": ["ridge", "knn"]},
                      "top_k": [1], "out_dir": ")" + out_dir + R"("})");
  SUBCASE("writes the csv for a known model") {
    CHECK(run_cmd("explain --config " + cfg + " --model ridge") == 0);
    CHECK(fs::exists(fs::path(out_dir) / "attributions" / "ridge.csv"));
    fs::remove_all(out_dir);
  }
  SUBCASE("unknown model exits 2") {
    CHECK(run_cmd("explain --config " + cfg + " --model nonexistent") == 2);
  }
}

TEST_CASE("bad command line maps to exit 2") {
  CHECK(run_cmd("frobnicate") == 2);
  CHECK(run_cmd("run") == 2);  // missing required --config
}
