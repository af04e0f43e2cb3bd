#pragma once

// Scenario files: line-oriented declarations and tasks, run into a
// deterministic text report.
//
//   [towers]  NAME = base mixed|equal p=P [f=F] M=M
//             NAME = root BASE D [unit=C]        x^D - C pi
//             NAME = eisenstein BASE c0, ..., c_{D-1}
//             NAME = unramified BASE D
//   [pairs]   NAME = certify A B l=L [pi=ELEMENT]
//   [tori]    NAME = split F [over=L] [rank=N] | res F E | norm_one F E
//   [tasks]   one task per line, see run_scenario
//
// Elements are sums of terms like 3, -pi, 2*pi^3 in the named tower.

#include <stdexcept>
#include <string>
#include <vector>

namespace ctt::cli {

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(int l, int c, const std::string& msg);
};

struct Token {
  std::string text;
  int column = 1;
};

struct Line {
  int number = 0;
  std::string section;
  std::vector<Token> tokens;
};

struct Scenario {
  std::string name;
  std::vector<Line> towers, pairs, tori, tasks;
};

Scenario parse_scenario(const std::string& text, const std::string& name = "scenario");

struct Options {
  int stage_degree = 0;      // 0: least degree trivializing Frobenius
  size_t max_enumeration = 10000;
};

struct RunResult {
  std::string body;    // deterministic part, ends with SUMMARY
  std::string footer;  // timings
  int exit_code = 0;
  int passed = 0, total = 0;
};

/// Exit code 2 is returned (and the error put in body) for parse errors and
/// undeclared names; verification failures give 1.
RunResult run_scenario(const Scenario& s, const Options& opt);
RunResult run_file(const std::string& path, const Options& opt);

/// Report bodies equal after dropping the timing footer.
bool compare_reports(const std::string& a, const std::string& b, std::string& difference);

/// Throws std::invalid_argument listing the known names.
std::string explain(const std::string& name);

inline constexpr const char* kFooterMarker = "--- timings (ignored by --compare) ---";

}  // namespace ctt::cli
