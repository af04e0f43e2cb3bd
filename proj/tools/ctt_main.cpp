#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ctt/cli.hpp"

namespace {

bool slurp(const std::string& path, std::string& out) {
  std::ifstream f(path);
  if (!f) return false;
  std::stringstream ss;
  ss << f.rdbuf();
  out = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Close-field torus transfer: run scenarios, compare reports, explain constructions"};
  app.require_subcommand(0, 1);

  std::vector<std::string> compare;
  app.add_option("--compare", compare, "Compare two reports, ignoring the timing footer")->expected(2);

  ctt::cli::Options opt;
  std::string file, report;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("file", file, "Scenario file")->required();
  run->add_option("--report", report, "Write the report to this path");
  run->add_option("--stage-degree", opt.stage_degree, "Unramified stage degree f* for congruent isomorphisms");
  run->add_option("--max-enumeration", opt.max_enumeration, "Bound on enumerated group orders");

  std::string name;
  auto* ex = app.add_subcommand("explain", "Describe a construction");
  ex->add_option("name", name, "herbrand, kottwitz, standard, ...")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (!compare.empty()) {
    std::string a, b, diff;
    if (!slurp(compare[0], a) || !slurp(compare[1], b)) {
      std::cerr << "error: cannot read reports\n";
      return 2;
    }
    if (ctt::cli::compare_reports(a, b, diff)) {
      std::cout << "reports match\n";
      return 0;
    }
    std::cout << "reports differ at " << diff << "\n";
    return 1;
  }
  if (*ex) {
    try {
      std::cout << ctt::cli::explain(name) << "\n";
      return 0;
    } catch (const std::invalid_argument& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
  }
  if (*run) {
    auto res = ctt::cli::run_file(file, opt);
    std::cout << res.body;
    if (!res.footer.empty()) std::cout << "\n" << res.footer;
    if (!report.empty()) {
      std::ofstream out(report);
      out << res.body;
      if (!res.footer.empty()) out << "\n" << res.footer;
      if (!out) {
        std::cerr << "error: cannot write " << report << "\n";
        return 2;
      }
    }
    return res.exit_code;
  }
  std::cout << app.help();
  return 0;
}
