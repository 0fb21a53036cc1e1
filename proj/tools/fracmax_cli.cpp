#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "experiment.hpp"

int main(int argc, char** argv) {
  using fracmax::cli::ExitCode;
  CLI::App app{"Discrete fractional Sobolev, maximal operator and capacity experiments"};
  app.require_subcommand(1);

  std::string spec_file;
  std::map<std::string, std::string> overrides;
  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  const Flag flags[] = {
      {"--out", "out", "output directory"},
      {"--seed", "seed", "random seed"},
      {"--threads", "threads", "worker threads, 0 = all cores"},
      {"--grid", "cells_per_side", "cells per side (power of two)"},
      {"--s", "s", "smoothness s in (0,1)"},
      {"--p", "p", "integrability p in (1,inf)"},
      {"--domain", "shape", "builtin shape"},
      {"--set", "set", "compact set: cube:<id>, cells:<i,j,...>, all, empty"},
      {"--solver-budget", "solver_budget", "capacity iteration budget"},
      {"--function", "function", "test function kind"},
  };
  std::map<std::string, std::string> raw;
  app.add_option("--spec", spec_file, "experiment spec file (key = value lines)");
  for (const Flag& f : flags) app.add_option(f.name, raw[f.key], f.help);

  for (const std::string& name : fracmax::cli::subcommands()) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ExitCode::kOk : ExitCode::kInvalid;
  }

  std::string text;
  if (!spec_file.empty()) {
    std::ifstream in(spec_file);
    if (!in) {
      std::cerr << "error: cannot read spec file '" << spec_file << "'\n";
      return ExitCode::kIoError;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  for (const Flag& f : flags)
    if (app.count(f.name)) overrides[f.key] = raw[f.key];
  overrides["command"] = app.get_subcommands().front()->get_name();

  const auto parsed = fracmax::cli::parse_spec(text, overrides);
  if (!parsed.spec) {
    for (const auto& e : parsed.errors) std::cerr << "error: " << e << '\n';
    return ExitCode::kInvalid;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const int code = fracmax::cli::run(*parsed.spec, std::cerr);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "wall_time = " << seconds << " s\n";
  return code;
}
