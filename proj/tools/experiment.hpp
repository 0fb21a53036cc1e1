#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fracmax::cli {

const std::vector<std::string>& subcommands();

struct ExperimentSpec {
  std::string command;
  // domain
  std::string shape = "interval";
  int dim = 1;
  int cells_per_side = 256;
  double beta = 3.0;
  double width = 0.125;
  std::vector<unsigned char> mask;  // set when the domain is given as a mask
  // parameters
  double s = 0.5;
  double p = 2.0;
  std::uint64_t seed = 0;
  std::optional<unsigned> threads;
  std::string out = ".";
  // operation options
  std::string function = "bump";
  std::string set = "cube:0";
  std::size_t solver_budget = 100000;
  double tolerance = 1e-8;
  std::size_t family_budget = 32;
  int corpus_size = 20;
  int min_side_cells = 4;
  int samples = 64;
  double r_max = 1.0;
  std::string radii = "auto";
  double bucket_width = 0.05;
};

struct ParseResult {
  std::optional<ExperimentSpec> spec;
  std::vector<std::string> errors;
};

/// Parses `key = value` lines ('#' starts a comment).  `overrides` replace
/// keys from the text (command-line flags).  Every problem is reported, not
/// just the first.
ParseResult parse_spec(const std::string& text, const std::map<std::string, std::string>& overrides = {});

/// Exit codes of run().
enum ExitCode { kOk = 0, kInvalid = 1, kNotConverged = 2, kIoError = 3 };

/// Runs the experiment and writes run.txt plus CSV tables into spec.out.
/// Nothing is written when the run fails before producing results.
int run(const ExperimentSpec& spec, std::ostream& err);

}  // namespace fracmax::cli
