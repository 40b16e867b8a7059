#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "orlicz/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal Orlicz modular toolkit: verification suite, modulars, rearrangements, "
               "eigenvalue scans"};
  app.set_version_flag("--version", "orlicz-cli 1.0");

  std::string command;
  std::string config_path;
  std::string input;
  std::string seed;
  std::string out;
  std::string mu;
  std::string tol;
  std::string max_iter;
  std::string grid;
  bool json = false;

  app.add_option("command", command,
                 "verify | modular | rearrange | polarize | eigen | faber-krahn | kernels")
      ->required();
  app.add_option("input", input, "input field CSV (modular, rearrange, polarize)");
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--out", out, "output path (field CSV for rearrange/polarize, JSON otherwise)");
  app.add_flag("--json", json, "print the JSON report on stdout");
  app.add_option("--mu", mu, "comma-separated constraint levels (eigen, faber-krahn)");
  app.add_option("--tol", tol, "tolerance (optimizer stall or polarization distance)");
  app.add_option("--max-iter", max_iter, "iteration cap");
  app.add_option("--grid", grid, "grid as n,h,K");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string config_text;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config file '" << config_path << "'\n";
      return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    config_text = buf.str();
  }

  orlicz::cli::Overrides overrides{{"command", command}};
  if (!input.empty()) overrides.emplace_back("input", input);
  if (!seed.empty()) overrides.emplace_back("seed", seed);
  if (!out.empty()) overrides.emplace_back("output", out);
  if (!mu.empty()) overrides.emplace_back("mu", mu);
  if (!tol.empty()) overrides.emplace_back("tol", tol);
  if (!max_iter.empty()) overrides.emplace_back("max_iter", max_iter);
  if (!grid.empty()) overrides.emplace_back("grid", grid);
  if (json) overrides.emplace_back("json", "true");

  const auto parsed = orlicz::cli::parse(config_text, overrides);
  if (!parsed.plan) {
    for (const auto& e : parsed.errors) std::cerr << "error: " << e << "\n";
    return 2;
  }
  return orlicz::cli::execute(*parsed.plan, std::cout, std::cerr);
}
