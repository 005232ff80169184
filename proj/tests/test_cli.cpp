#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <json.hpp>
#include <random>
#include <sstream>

#include "../tools/commands.hpp"
#include "sbpsat/io.hpp"
#include "sbpsat/problem.hpp"

namespace fs = std::filesystem;
using namespace sbpsat;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("sbpsat_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
};

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  return {code, o.str(), e.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::map<std::string, std::string> snapshot_dir(const fs::path& dir) {
  std::map<std::string, std::string> m;
  for (const auto& e : fs::directory_iterator(dir)) m[e.path().filename().string()] = slurp(e.path());
  return m;
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) r.push_back(cell.empty() ? NAN : std::stod(cell));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST_CASE("N list parsing") {
  CHECK(cli::parse_N_list("32..512") == std::vector<int>{32, 64, 128, 256, 512});
  CHECK(cli::parse_N_list("16,40,64..128") == std::vector<int>{16, 40, 64, 128});
  CHECK(cli::parse_N_list("64") == std::vector<int>{64});
  CHECK_THROWS_AS(cli::parse_N_list(""), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_N_list("512..32"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_N_list("a..b"), cli::UsageError);
  CHECK(cli::parse_double_list("0,0.5,1.25") == std::vector<double>{0.0, 0.5, 1.25});
}

TEST_CASE("converge writes the table and a rerun reproduces it byte for byte") {
  TempDir dir;
  const auto r = call({"converge", "--case", "1a", "--p", "2,3,4,5", "--N", "32..512", "--out", dir.str()});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(dir.path / "converge_1a.csv");
  CHECK(rows.size() == 20);
  CHECK(fs::exists(dir.path / "manifest_converge.json"));
  CHECK(fs::exists(dir.path / "converge_1a.svg"));
  const auto j = nlohmann::json::parse(slurp(dir.path / "manifest_converge.json"));
  CHECK(j["ok"] == true);
  CHECK(j["rows"].size() == 20);

  const auto before = snapshot_dir(dir.path);
  const auto again = call({"rerun", (dir.path / "manifest_converge.json").string()});
  CHECK(again.code == 0);
  CHECK(snapshot_dir(dir.path) == before);
}

TEST_CASE("usage errors exit with 2") {
  TempDir dir;
  CHECK(call({"converge", "--case", "9z", "--out", dir.str()}).code == 2);
  CHECK(call({"converge", "--p", "7", "--out", dir.str()}).code == 2);
  CHECK(call({"converge", "--N", "", "--out", dir.str()}).code == 2);
  CHECK(call({"converge", "--p", "5", "--N", "4", "--out", dir.str()}).code == 2);
  CHECK(call({"converge", "--T", "-1", "--out", dir.str()}).code == 2);
  CHECK(call({"converge", "--tol", "0", "--out", dir.str()}).code == 2);
  CHECK(call({"spectrum", "--region", "1,2,3", "--out", dir.str()}).code == 2);
  CHECK(call({"nonsense"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"rerun", (dir.path / "missing.json").string()}).code == 2);
  const auto r = call({"converge", "--case", "9z", "--out", dir.str()});
  CHECK(r.err.find("9z") != std::string::npos);
}

TEST_CASE("spectrum writes per-run, analytic, comparison and persistence files") {
  TempDir dir;
  const auto r =
      call({"spectrum", "--case", "1a", "--p", "2,4", "--N", "64,256,512", "--out", dir.str(), "--export-matrix"});
  REQUIRE(r.code == 0);
  for (int p : {2, 4})
    for (int N : {64, 256, 512}) {
      const std::string stem = "1a_p" + std::to_string(p) + "_N" + std::to_string(N);
      CHECK(fs::exists(dir.path / ("spectrum_" + stem + ".csv")));
      CHECK(fs::exists(dir.path / ("matrix_" + stem + ".csv")));
    }
  CHECK(fs::exists(dir.path / "spectrum_1a_analytic.csv"));
  CHECK(fs::exists(dir.path / "spectrum_1a.svg"));
  CHECK(fs::exists(dir.path / "persistence_1a.csv"));
  const auto cmp = slurp(dir.path / "comparison_1a.csv");
  CHECK(cmp.rfind("p,N,max_distance,mean_distance,threshold,right_of_line,max_re_nonreal\n", 0) == 0);
  const auto rows = read_csv(dir.path / "comparison_1a.csv");
  REQUIRE(rows.size() == 6);
  // distance shrinks with N at fixed order
  CHECK(rows[1][2] < rows[0][2]);
  CHECK(rows[2][2] < rows[1][2]);
  CHECK(rows[5][2] < rows[4][2]);
  const auto per = slurp(dir.path / "persistence_1a.csv");
  CHECK(per.rfind("cluster,re,im,members,runs,persistent,run_list\n", 0) == 0);
  const auto mat = read_csv(dir.path / "matrix_1a_p2_N64.csv");
  CHECK(mat.size() + 1 == 130);  // header line consumed
}

TEST_CASE("simulate starts from the gaussian and tracks the exact solution") {
  TempDir dir;
  const auto r = call({"simulate", "--case", "1b", "--p", "2", "--N", "256", "--T", "1", "--snapshots", "0,0.5,1",
                       "--out", dir.str()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("relative error") != std::string::npos);
  const auto s0 = read_csv(dir.path / ("snap_1b_t" + io::fmt(0.0) + ".csv"));
  REQUIRE(s0.size() == 257);
  const auto pulse = GaussianPulse::centered(2.0, 0.2);
  for (const auto& row : s0) {
    CHECK(row[1] == 0.0);
    CHECK(row[2] == doctest::Approx(pulse(row[0])).epsilon(1e-12));
  }
  const auto s1 = read_csv(dir.path / ("snap_1b_t" + io::fmt(1.0) + ".csv"));
  double err = 0.0;
  for (const auto& row : s1) err = std::max({err, std::abs(row[1] - row[3]), std::abs(row[2] - row[4])});
  CHECK(err < 0.05);
  CHECK(fs::exists(dir.path / "simulate_1b.svg"));
  CHECK(fs::exists(dir.path / "energy_1b.csv"));
}

TEST_CASE("simulate with absorbing walls and no coupling has non-increasing energy") {
  TempDir dir;
  const auto r = call({"simulate", "--case", "1a", "--p", "3", "--N", "128", "--T", "3", "--R0", "0", "--RL", "0",
                       "--zero-B", "--out", dir.str()});
  REQUIRE(r.code == 0);
  const auto e = read_csv(dir.path / "energy_1a.csv");
  REQUIRE(e.size() > 10);
  for (std::size_t k = 1; k < e.size(); ++k) {
    CHECK(e[k][0] > e[k - 1][0]);
    CHECK(e[k][1] <= e[k - 1][1] + 1e-12 * e.front()[1]);
  }
  CHECK(e.back()[1] < 1e-6 * e.front()[1]);
}

TEST_CASE("snapshot after the final time is a usage error") {
  TempDir dir;
  CHECK(call({"simulate", "--case", "1b", "--N", "64", "--T", "1", "--snapshots", "0,2", "--out", dir.str()}).code == 2);
}

TEST_CASE("simulate and spectrum reruns are byte identical") {
  TempDir dir;
  REQUIRE(call({"simulate", "--case", "3a", "--p", "3", "--N", "64", "--out", dir.str()}).code == 0);
  REQUIRE(call({"spectrum", "--case", "2b", "--p", "2", "--N", "64,128", "--out", dir.str()}).code == 0);
  const auto before = snapshot_dir(dir.path);
  CHECK(call({"rerun", (dir.path / "manifest_simulate.json").string()}).code == 0);
  CHECK(call({"rerun", (dir.path / "manifest_spectrum.json").string()}).code == 0);
  CHECK(snapshot_dir(dir.path) == before);
}

TEST_CASE("check passes and writes its table") {
  TempDir dir;
  const auto r = call({"check", "--out", dir.str()});
  CHECK(r.code == 0);
  const auto rows = read_csv(dir.path / "check_sbp.csv");
  CHECK(rows.size() == 8);
}

TEST_CASE("an impossible tolerance fails the row with exit code 1") {
  TempDir dir;
  const auto r = call({"converge", "--case", "2a", "--p", "2", "--N", "32", "--tol", "1e-300", "--out", dir.str()});
  CHECK(r.code == 1);
  CHECK(r.out.find("failed") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(dir.path / "manifest_converge.json"));
  CHECK(j["ok"] == false);
}
