#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbpsat::cli {

/// Fully resolved command configuration.
struct RunConfig {
  std::string command;
  std::vector<std::string> cases;
  std::vector<int> p;
  std::vector<int> N;
  std::optional<double> T;  // unset: per-case default
  std::optional<double> tol;  // unset: verified per-row choice (converge), 1e-10 (simulate)
  int jobs = 1;
  std::string out = ".";
  std::vector<double> snapshots;
  std::optional<double> R0, RL;
  std::uint64_t seed = 20240601;
  std::array<double, 4> region{0.0, 10.0, -20.0, 20.0};  // re_min, re_max, im_min, im_max
  std::array<double, 4> view{-10.0, 10.0, -20.0, 20.0};
  double radius = 0.25;
  int N_threshold = 0;
  double sigma = 0.2;
  bool export_matrix = false;
  bool zero_b = false;
};

/// Thrown for invalid flags or values; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "32..512" doubles from 32 to 512; items separated by commas may mix both forms.
std::vector<int> parse_N_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

/// Entry point shared by the executable and the tests.  Returns the process exit code:
/// 0 when every row completed, 1 when some row failed, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int converge(const RunConfig& cfg, std::ostream& out);
int spectrum(const RunConfig& cfg, std::ostream& out);
int simulate(const RunConfig& cfg, std::ostream& out);
int check(const RunConfig& cfg, std::ostream& out);

}  // namespace sbpsat::cli
