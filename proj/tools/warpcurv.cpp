#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "warpcurv/cli.hpp"

#ifndef WARPCURV_FIXTURES_DIR
#define WARPCURV_FIXTURES_DIR "fixtures"
#endif

namespace {

using namespace warpcurv;

int emit(const CommandResult& r, const std::string& json_out) {
  std::cout << r.text;
  if (!json_out.empty()) {
    if (json_out == "-") {
      std::cout << dump_report(r.report);
    } else {
      std::ofstream out(json_out);
      if (!out) {
        std::cerr << "warpcurv: cannot write " << json_out << "\n";
        return kExitInputError;
      }
      out << dump_report(r.report);
    }
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature tensors, pseudosymmetry conditions and warped-product checks"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int points = 0;
  std::string json_out;
  std::vector<std::string> params;
  std::string file;
  std::string l1, l2;
  bool dichotomy = false;
  std::string fixtures = WARPCURV_FIXTURES_DIR;

  auto* seed_opt = app.add_option("--seed", seed, "Sampling seed");
  auto* points_opt = app.add_option("--points", points, "Sample points per identity (default 8)");
  app.add_option("--json", json_out, "Write the JSON report to this file ('-' for stdout)");
  app.add_option("--param", params, "Override a parameter: name=value or name=lo..hi");

  auto* curvature = app.add_subcommand("curvature", "Print nonzero curvature components and check expectations");
  curvature->add_option("file", file, "Manifest")->required();
  auto* classify = app.add_subcommand("classify", "Fit and check the catalog of curvature conditions");
  classify->add_option("file", file, "Manifest")->required();
  auto* verify = app.add_subcommand("warped-verify", "Verify the warped-product conditions for candidate L1, L2");
  verify->add_option("file", file, "Warped manifest")->required();
  auto* l1_opt = verify->add_option("--L1", l1, "Candidate L1 (base function)");
  auto* l2_opt = verify->add_option("--L2", l2, "Candidate L2 (base function)");
  verify->add_flag("--dichotomy", dichotomy, "Fail with an input error when L2 vanishes at a sample point");
  auto* selftest = app.add_subcommand("selftest", "Run the bundled fixture suite");
  selftest->add_option("--fixtures", fixtures, "Fixture directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  RunOptions opt;
  if (*seed_opt) opt.seed = seed;
  if (*points_opt) opt.points = points;
  if (*l1_opt) opt.l1 = l1;
  if (*l2_opt) opt.l2 = l2;
  opt.require_dichotomy = dichotomy;
  try {
    for (const std::string& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--param expects name=value, got '" + p + "'");
      opt.parameters[p.substr(0, eq)] = p.substr(eq + 1);
    }
    if (*selftest) return emit(cmd_selftest(fixtures, opt), json_out);
    const Manifest m = load_manifest(file);
    if (*curvature) return emit(cmd_curvature(m, opt), json_out);
    if (*classify) return emit(cmd_classify(m, opt), json_out);
    return emit(cmd_warped_verify(m, opt), json_out);
  } catch (const std::exception& e) {
    if (auto msg = input_error_message(e)) {
      std::cerr << "warpcurv: " << *msg << "\n";
      return kExitInputError;
    }
    std::cerr << "warpcurv: internal error: " << e.what() << "\n";
    return 3;
  }
}
