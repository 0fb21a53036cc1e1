#include "experiment.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "fracmax/fracmax.h"

#ifndef FRACMAX_GIT_DESCRIBE
#define FRACMAX_GIT_DESCRIBE "unknown"
#endif

namespace fracmax::cli {

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"whitney",  "maximal", "seminorm",    "dominate",  "capacity",
                                              "hardy-test", "quasi", "condition-b", "regularity"};
  return names;
}

namespace {

const std::set<std::string> kKeys{"command",       "shape",         "dim",         "cells_per_side", "beta",
                                  "width",         "mask",          "s",           "p",              "seed",
                                  "threads",       "out",           "function",    "set",            "solver_budget",
                                  "tolerance",     "family_budget", "corpus_size", "min_side_cells", "samples",
                                  "r_max",         "radii",         "bucket_width"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  template <class T>
  void integer(const std::map<std::string, std::string>& kv, const std::string& key, T& out, long long lo) {
    auto it = kv.find(key);
    if (it == kv.end()) return;
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(it->second.c_str(), &end, 10);
    if (errno || end == it->second.c_str() || *end != '\0') {
      errors_.push_back(key + ": expected an integer, got '" + it->second + "'");
    } else if (v < lo) {
      errors_.push_back(key + " must be at least " + std::to_string(lo));
    } else {
      out = static_cast<T>(v);
    }
  }

  void real(const std::map<std::string, std::string>& kv, const std::string& key, double& out) {
    auto it = kv.find(key);
    if (it == kv.end()) return;
    char* end = nullptr;
    const double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0' || !std::isfinite(v))
      errors_.push_back(key + ": expected a number, got '" + it->second + "'");
    else
      out = v;
  }

 private:
  std::vector<std::string>& errors_;
};

// Run-length mask: tokens "<bit>*<count>" or "<bit>", whitespace separated.
std::optional<std::vector<unsigned char>> decode_mask(const std::string& text, std::string& error) {
  std::vector<unsigned char> out;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    const auto star = token.find('*');
    const std::string bit = token.substr(0, star);
    long long count = 1;
    if (star != std::string::npos) {
      char* end = nullptr;
      count = std::strtoll(token.c_str() + star + 1, &end, 10);
      if (*end != '\0' || count <= 0) {
        error = "mask: bad run '" + token + "'";
        return std::nullopt;
      }
    }
    if (bit != "0" && bit != "1") {
      error = "mask: bad run '" + token + "'";
      return std::nullopt;
    }
    out.insert(out.end(), std::size_t(count), bit == "1" ? 1 : 0);
  }
  return out;
}

bool power_of_two(long long v) { return v >= 4 && (v & (v - 1)) == 0; }

}  // namespace

ParseResult parse_spec(const std::string& text, const std::map<std::string, std::string>& overrides) {
  ParseResult result;
  auto& errors = result.errors;
  std::map<std::string, std::string> kv;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!kKeys.count(key)) {
      errors.push_back("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      continue;
    }
    if (!kv.emplace(key, value).second) errors.push_back("duplicate key '" + key + "'");
  }
  for (const auto& [key, value] : overrides) {
    if (!kKeys.count(key)) errors.push_back("unknown key '" + key + "'");
    else kv[key] = value;
  }

  ExperimentSpec spec;
  Reader read(errors);

  if (auto it = kv.find("command"); it != kv.end()) spec.command = it->second;
  if (spec.command.empty()) {
    errors.push_back("command is required");
  } else if (std::find(subcommands().begin(), subcommands().end(), spec.command) == subcommands().end()) {
    errors.push_back("unknown command '" + spec.command + "'");
  }

  // Domain.
  const bool has_mask = kv.count("mask") > 0;
  if (has_mask && kv.count("shape")) errors.push_back("shape and mask are mutually exclusive");
  bool dim_known = true;
  if (has_mask) {
    spec.shape = "mask";
    if (!kv.count("dim")) errors.push_back("dim is required with mask");
    read.integer(kv, "dim", spec.dim, 1);
  } else {
    if (auto it = kv.find("shape"); it != kv.end()) spec.shape = it->second;
    int dim = 0;
    if (fracmax_builtin_dim(spec.shape.c_str(), &dim) != FRACMAX_OK) {
      errors.push_back("unknown shape '" + spec.shape + "'");
      dim_known = false;
    } else {
      spec.dim = dim;
      if (kv.count("dim") && kv["dim"] != std::to_string(dim))
        errors.push_back("dim does not match shape '" + spec.shape + "'");
    }
  }
  if (spec.dim != 1 && spec.dim != 2) {
    errors.push_back("dim must be 1 or 2");
    dim_known = false;
  }
  spec.cells_per_side = spec.dim == 2 ? 64 : 256;
  long long cells = spec.cells_per_side;
  read.integer(kv, "cells_per_side", cells, 1);
  if (kv.count("cells_per_side") && !power_of_two(cells))
    errors.push_back("cells_per_side must be a power of two >= 4, got " + kv["cells_per_side"]);
  else if (cells > (spec.dim == 2 ? 512 : 1 << 16))
    errors.push_back("cells_per_side is too large");
  else
    spec.cells_per_side = int(cells);
  read.real(kv, "beta", spec.beta);
  read.real(kv, "width", spec.width);
  if (has_mask) {
    std::string error;
    if (auto mask = decode_mask(kv["mask"], error)) {
      spec.mask = std::move(*mask);
      const std::size_t want =
          spec.dim == 2 ? std::size_t(spec.cells_per_side) * spec.cells_per_side : std::size_t(spec.cells_per_side);
      if (dim_known && spec.mask.size() != want)
        errors.push_back("mask has " + std::to_string(spec.mask.size()) + " cells, expected " + std::to_string(want));
    } else {
      errors.push_back(error);
    }
  }

  // Parameters.
  read.real(kv, "s", spec.s);
  read.real(kv, "p", spec.p);
  if (!(spec.s > 0.0 && spec.s < 1.0)) errors.push_back("s must lie in (0,1)");
  if (!(spec.p > 1.0)) errors.push_back("p must lie in (1,inf)");
  read.integer(kv, "seed", spec.seed, 0);
  if (kv.count("threads")) {
    unsigned t = 0;
    read.integer(kv, "threads", t, 0);
    spec.threads = t;
  }
  if (auto it = kv.find("out"); it != kv.end()) spec.out = it->second;

  // Operation options.
  if (auto it = kv.find("function"); it != kv.end()) spec.function = it->second;
  static const std::set<std::string> kinds{"bump", "indicator", "linear", "sinusoid", "mollified", "random-smooth"};
  if (!kinds.count(spec.function)) errors.push_back("unknown function '" + spec.function + "'");
  if (auto it = kv.find("set"); it != kv.end()) spec.set = it->second;
  if (spec.set.rfind("cube:", 0) != 0 && spec.set.rfind("cells:", 0) != 0 && spec.set != "all" && spec.set != "empty")
    errors.push_back("set must be cube:<id>, cells:<i,j,...>, all or empty");
  read.integer(kv, "solver_budget", spec.solver_budget, 1);
  read.real(kv, "tolerance", spec.tolerance);
  if (!(spec.tolerance >= 0.0)) errors.push_back("tolerance must be non-negative");
  read.integer(kv, "family_budget", spec.family_budget, 0);
  read.integer(kv, "corpus_size", spec.corpus_size, 0);
  read.integer(kv, "min_side_cells", spec.min_side_cells, 1);
  read.integer(kv, "samples", spec.samples, 0);
  read.real(kv, "r_max", spec.r_max);
  if (!(spec.r_max > 0.0)) errors.push_back("r_max must be positive");
  if (auto it = kv.find("radii"); it != kv.end()) spec.radii = it->second;
  if (spec.radii != "auto" && spec.radii != "all" && spec.radii != "dyadic")
    errors.push_back("radii must be auto, all or dyadic");
  read.real(kv, "bucket_width", spec.bucket_width);
  if (!(spec.bucket_width > 0.0)) errors.push_back("bucket_width must be positive");

  if (errors.empty()) result.spec = std::move(spec);
  return result;
}

namespace {

struct DomainDeleter {
  void operator()(fracmax_domain* d) const { fracmax_domain_free(d); }
};
struct FunctionDeleter {
  void operator()(fracmax_function* f) const { fracmax_function_free(f); }
};
struct WhitneyDeleter {
  void operator()(fracmax_whitney* w) const { fracmax_whitney_free(w); }
};
struct DominationDeleter {
  void operator()(fracmax_domination* r) const { fracmax_domination_free(r); }
};
struct HardyDeleter {
  void operator()(fracmax_hardy_report* r) const { fracmax_hardy_free(r); }
};
using Domain = std::unique_ptr<fracmax_domain, DomainDeleter>;
using Function = std::unique_ptr<fracmax_function, FunctionDeleter>;
using Whitney = std::unique_ptr<fracmax_whitney, WhitneyDeleter>;
using Domination = std::unique_ptr<fracmax_domination, DominationDeleter>;
using HardyReport = std::unique_ptr<fracmax_hardy_report, HardyDeleter>;

struct ApiError {
  fracmax_status status;
  std::string message;
};

void check(fracmax_status st) {
  if (st != FRACMAX_OK) throw ApiError{st, fracmax_last_error()};
}

// Everything a run produces, written only once complete.
struct Outputs {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::pair<std::string, std::string>> files;  // name, content
  bool converged = true;

  void put(const std::string& k, const std::string& v) { meta.emplace_back(k, v); }
  void put(const std::string& k, double v) { meta.emplace_back(k, fmt(v)); }
  void put_count(const std::string& k, std::size_t v) { meta.emplace_back(k, std::to_string(v)); }
};

fracmax_solver_options solver_opts(const ExperimentSpec& spec) {
  fracmax_solver_options o;
  fracmax_solver_defaults(&o);
  o.max_iterations = spec.solver_budget;
  o.tolerance = spec.tolerance;
  return o;
}

std::string index_header(int dim) { return dim == 2 ? "index_x,index_y" : "index"; }
std::string index_cols(int dim, const int* index) {
  return dim == 2 ? std::to_string(index[0]) + "," + std::to_string(index[1]) : std::to_string(index[0]);
}

std::vector<std::size_t> resolve_set(const ExperimentSpec& spec, fracmax_domain* d, const fracmax_domain_info& info) {
  std::vector<std::size_t> cells;
  if (spec.set == "empty") return cells;
  if (spec.set == "all") {
    for (std::size_t c = 0; c < info.cell_count; ++c) {
      int in = 0;
      check(fracmax_domain_is_interior(d, c, &in));
      if (in) cells.push_back(c);
    }
    return cells;
  }
  if (spec.set.rfind("cube:", 0) == 0) {
    char* end = nullptr;
    const std::string id_text = spec.set.substr(5);
    const unsigned long long id = std::strtoull(id_text.c_str(), &end, 10);
    if (id_text.empty() || *end != '\0') throw ApiError{FRACMAX_ERR_INVALID_ARGUMENT, "bad cube id in set"};
    fracmax_whitney* raw = nullptr;
    check(fracmax_whitney_decompose(d, &raw));
    Whitney w(raw);
    fracmax_cube_info q;
    check(fracmax_whitney_cube(w.get(), id, &q));
    const int n = info.cells_per_side;
    const int rows = info.dim == 2 ? q.side_cells : 1;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < q.side_cells; ++c)
        cells.push_back(std::size_t(q.index[1] * q.side_cells + r) * (info.dim == 2 ? n : 0) +
                        std::size_t(q.index[0] * q.side_cells + c));
    return cells;
  }
  std::istringstream in(spec.set.substr(6));
  std::string tok;
  while (std::getline(in, tok, ',')) {
    char* end = nullptr;
    tok = trim(tok);
    const unsigned long long c = std::strtoull(tok.c_str(), &end, 10);
    if (tok.empty() || *end != '\0') throw ApiError{FRACMAX_ERR_INVALID_ARGUMENT, "bad cell '" + tok + "' in set"};
    cells.push_back(c);
  }
  return cells;
}

void run_whitney(fracmax_domain* d, const fracmax_domain_info& info, Outputs& out) {
  fracmax_whitney* raw = nullptr;
  check(fracmax_whitney_decompose(d, &raw));
  Whitney w(raw);
  std::size_t cubes = 0, residual = 0;
  check(fracmax_whitney_counts(w.get(), &cubes, &residual));
  std::ostringstream csv;
  csv << "level," << index_header(info.dim) << ",side,dist,ratio\n";
  for (std::size_t i = 0; i < cubes; ++i) {
    fracmax_cube_info q;
    check(fracmax_whitney_cube(w.get(), i, &q));
    csv << q.level << ',' << index_cols(info.dim, q.index) << ',' << fmt(q.side) << ',' << fmt(q.dist) << ','
        << fmt(q.dist / q.diam) << '\n';
  }
  out.files.emplace_back("whitney.csv", csv.str());
  out.put_count("cubes", cubes);
  out.put_count("residual_cells", residual);
}

Function make_function(const ExperimentSpec& spec, fracmax_domain* d) {
  fracmax_function* raw = nullptr;
  check(fracmax_function_builtin(d, spec.function.c_str(), spec.seed, &raw));
  return Function(raw);
}

void run_maximal(const ExperimentSpec& spec, fracmax_domain* d, const fracmax_domain_info& info, Outputs& out) {
  Function f = make_function(spec, d);
  fracmax_function* raw = nullptr;
  check(fracmax_local_maximal(f.get(), &raw));
  Function mf(raw);
  std::vector<double> fv(info.cell_count), mv(info.cell_count);
  check(fracmax_function_values(f.get(), fv.data(), fv.size()));
  check(fracmax_function_values(mf.get(), mv.data(), mv.size()));
  std::ostringstream csv;
  csv << "cell,f,maximal\n";
  for (std::size_t c = 0; c < info.cell_count; ++c) {
    int in = 0;
    check(fracmax_domain_is_interior(d, c, &in));
    if (in) csv << c << ',' << fmt(fv[c]) << ',' << fmt(mv[c]) << '\n';
  }
  out.files.emplace_back("maximal.csv", csv.str());
}

void run_seminorm(const ExperimentSpec& spec, fracmax_domain* d, Outputs& out) {
  Function f = make_function(spec, d);
  double semi = 0.0, lhs = 0.0, ratio = 0.0;
  check(fracmax_seminorm(f.get(), spec.s, spec.p, &semi));
  check(fracmax_hardy_lhs(f.get(), spec.s, spec.p, &lhs));
  check(fracmax_boundedness_ratio(f.get(), spec.s, spec.p, &ratio));
  out.put("seminorm", semi);
  out.put("seminorm_power", std::pow(semi, spec.p));
  out.put("hardy_lhs", lhs);
  out.put("maximal_boundedness_ratio", ratio);
}

void run_dominate(const ExperimentSpec& spec, fracmax_domain* d, const fracmax_domain_info& info, Outputs& out) {
  Function f = make_function(spec, d);
  const bool dyadic = spec.radii == "dyadic" || (spec.radii == "auto" && info.dim == 2);
  fracmax_domination* raw = nullptr;
  check(fracmax_domination_check(f.get(), spec.s, spec.p, dyadic ? 1 : 0, spec.bucket_width, &raw));
  Domination r(raw);
  fracmax_domination_summary sum;
  check(fracmax_domination_get_summary(r.get(), &sum));
  std::vector<std::size_t> counts(sum.buckets);
  check(fracmax_domination_histogram(r.get(), counts.data(), counts.size()));
  std::ostringstream csv;
  csv << "bucket_lo,bucket_hi,count\n";
  for (std::size_t k = 0; k < counts.size(); ++k)
    csv << fmt(double(k) * sum.bucket_width) << ',' << fmt(double(k + 1) * sum.bucket_width) << ',' << counts[k]
        << '\n';
  out.files.emplace_back("histogram.csv", csv.str());
  out.put("radii", dyadic ? "dyadic" : "all");
  out.put("max_ratio", sum.max_ratio);
  out.put_count("arg_x", sum.arg_x);
  out.put_count("arg_y", sum.arg_y);
  out.put("finite", sum.finite ? "true" : "false");
  out.put_count("pairs", sum.pairs);
  out.put_count("identity_violations", sum.identity_violations);
}

void run_capacity(const ExperimentSpec& spec, fracmax_domain* d, const fracmax_domain_info& info, Outputs& out) {
  const std::vector<std::size_t> cells = resolve_set(spec, d, info);
  const fracmax_solver_options opts = solver_opts(spec);
  fracmax_capacity_summary sum;
  std::vector<double> minimizer(info.cell_count);
  check(fracmax_capacity(d, cells.data(), cells.size(), spec.s, spec.p, &opts, &sum, minimizer.data()));
  std::ostringstream csv;
  csv << "cell,u\n";
  for (std::size_t c = 0; c < info.cell_count; ++c) {
    int in = 0;
    check(fracmax_domain_is_interior(d, c, &in));
    if (in) csv << c << ',' << fmt(minimizer[c]) << '\n';
  }
  out.files.emplace_back("minimizer.csv", csv.str());
  out.put_count("set_cells", cells.size());
  out.put("value", sum.value);
  out.put_count("iterations", sum.iterations);
  out.put("residual", sum.residual);
  out.put("converged", sum.converged ? "true" : "false");
  out.put("subcritical", sum.subcritical ? "true" : "false");
  if (!sum.subcritical) out.put("warning", "s*p >= dim");
  out.converged = sum.converged != 0;
}

void run_hardy(const ExperimentSpec& spec, fracmax_domain* d, const fracmax_domain_info& info,
               fracmax_hardy_mode mode, Outputs& out) {
  fracmax_hardy_options opts;
  fracmax_hardy_defaults(&opts);
  opts.family_budget = spec.family_budget;
  opts.seed = spec.seed;
  opts.corpus_size = spec.corpus_size;
  opts.min_side_cells = spec.min_side_cells;
  opts.solver = solver_opts(spec);
  fracmax_hardy_report* raw = nullptr;
  check(fracmax_hardy_run(d, spec.s, spec.p, mode, &opts, &raw));
  HardyReport r(raw);
  fracmax_hardy_summary sum;
  check(fracmax_hardy_get_summary(r.get(), &sum));

  if (mode != FRACMAX_HARDY_QUASI) {
    std::ostringstream csv;
    csv << "cube_id,level," << index_header(info.dim) << ",side,cap,c_Q,converged\n";
    for (std::size_t i = 0; i < fracmax_hardy_cube_count(r.get()); ++i) {
      fracmax_cube_record c;
      check(fracmax_hardy_cube(r.get(), i, &c));
      csv << c.cube_id << ',' << c.level << ',' << index_cols(info.dim, c.index) << ','
          << fmt(c.side_cells * info.spacing) << ',' << fmt(c.cap) << ',' << fmt(c.c) << ','
          << (c.converged ? 1 : 0) << '\n';
    }
    out.files.emplace_back("cubes.csv", csv.str());
    out.put_count("cubes_tested", sum.cubes);
    out.put_count("cubes_below_cutoff", sum.skipped_small);
  }
  if (mode != FRACMAX_HARDY_TESTING) {
    std::ostringstream csv;
    csv << "family_id,size,sum_cap,cap_union,ratio,converged\n";
    for (std::size_t i = 0; i < fracmax_hardy_family_count(r.get()); ++i) {
      fracmax_family_record f;
      check(fracmax_hardy_family(r.get(), i, &f));
      csv << f.family_id << ',' << f.size << ',' << fmt(f.sum_cap) << ',' << fmt(f.cap_union) << ','
          << fmt(f.ratio) << ',' << (f.converged ? 1 : 0) << '\n';
    }
    out.files.emplace_back("families.csv", csv.str());
    out.put_count("families", sum.families);
    out.put_count("family_budget", spec.family_budget);
  }
  out.put_count("min_side_cells", std::size_t(sum.min_side_cells));
  out.put_count("residual_cells", sum.residual_cells);
  out.put_count("unconverged", sum.unconverged);
  if (mode != FRACMAX_HARDY_QUASI) out.put("max_c", sum.max_c);
  if (mode != FRACMAX_HARDY_TESTING) out.put("max_N", sum.max_ratio);
  if (mode == FRACMAX_HARDY_CONDITION_B) {
    out.put_count("corpus_size", std::size_t(spec.corpus_size));
    out.put("hardy_lower_bound", sum.hardy_lower_bound);
  }
  out.converged = sum.unconverged == 0;
}

void run_regularity(const ExperimentSpec& spec, fracmax_domain* d, Outputs& out) {
  double ratio = 0.0;
  check(fracmax_regularity_ratio(d, spec.samples, spec.seed, spec.r_max, &ratio));
  out.put_count("samples", std::size_t(spec.samples));
  out.put("r_max", spec.r_max);
  out.put("regularity_ratio", ratio);
}

bool write_outputs(const ExperimentSpec& spec, const Outputs& out, std::ostream& err) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(spec.out, ec);
  if (ec) {
    err << "error: cannot create output directory '" << spec.out << "': " << ec.message() << '\n';
    return false;
  }
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream f(fs::path(spec.out) / name, std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) {
      err << "error: cannot write '" << (fs::path(spec.out) / name).string() << "'\n";
      return false;
    }
    return true;
  };
  for (const auto& [name, content] : out.files)
    if (!write(name, content)) return false;
  std::ostringstream meta;
  for (const auto& [k, v] : out.meta) meta << k << " = " << v << '\n';
  return write("run.txt", meta.str());
}

}  // namespace

int run(const ExperimentSpec& spec, std::ostream& err) {
  Outputs out;
  out.put("version", std::string(fracmax_version()) + " (" + FRACMAX_GIT_DESCRIBE + ")");
  out.put("command", spec.command);
  out.put("shape", spec.shape);
  out.put_count("dim", std::size_t(spec.dim));
  out.put_count("cells_per_side", std::size_t(spec.cells_per_side));
  out.put("spacing", 1.0 / spec.cells_per_side);
  if (spec.shape == "cusp") out.put("beta", spec.beta);
  if (spec.shape == "corridor") out.put("width", spec.width);
  out.put("s", spec.s);
  out.put("p", spec.p);
  out.put_count("seed", spec.seed);
  const std::set<std::string> uses_function{"maximal", "seminorm", "dominate"};
  const std::set<std::string> uses_solver{"capacity", "hardy-test", "quasi", "condition-b"};
  if (uses_function.count(spec.command)) out.put("function", spec.function);
  if (uses_solver.count(spec.command)) {
    out.put_count("solver_budget", spec.solver_budget);
    out.put("tolerance", spec.tolerance);
  }
  if (spec.command == "capacity") out.put("set", spec.set);

  try {
    if (spec.threads) check(fracmax_set_threads(*spec.threads));
    fracmax_domain* raw = nullptr;
    if (spec.shape == "mask")
      check(fracmax_domain_from_mask(spec.dim, spec.cells_per_side, spec.mask.data(), &raw));
    else
      check(fracmax_domain_builtin(spec.shape.c_str(), spec.cells_per_side, spec.beta, spec.width, &raw));
    Domain d(raw);
    fracmax_domain_info info;
    check(fracmax_domain_get_info(d.get(), &info));
    out.put_count("interior_cells", info.interior_count);

    const std::string& c = spec.command;
    if (c == "whitney") run_whitney(d.get(), info, out);
    else if (c == "maximal") run_maximal(spec, d.get(), info, out);
    else if (c == "seminorm") run_seminorm(spec, d.get(), out);
    else if (c == "dominate") run_dominate(spec, d.get(), info, out);
    else if (c == "capacity") run_capacity(spec, d.get(), info, out);
    else if (c == "hardy-test") run_hardy(spec, d.get(), info, FRACMAX_HARDY_TESTING, out);
    else if (c == "quasi") run_hardy(spec, d.get(), info, FRACMAX_HARDY_QUASI, out);
    else if (c == "condition-b") run_hardy(spec, d.get(), info, FRACMAX_HARDY_CONDITION_B, out);
    else if (c == "regularity") run_regularity(spec, d.get(), out);
    else throw ApiError{FRACMAX_ERR_INVALID_ARGUMENT, "unknown command '" + c + "'"};
  } catch (const ApiError& e) {
    err << "error: " << e.message << '\n';
    return e.status == FRACMAX_ERR_OUT_OF_MEMORY || e.status == FRACMAX_ERR_INTERNAL ? kIoError : kInvalid;
  }

  out.put("status", out.converged ? "ok" : "not-converged");
  if (!write_outputs(spec, out, err)) return kIoError;
  if (!out.converged) {
    err << "warning: solver did not converge within the iteration budget\n";
    return kNotConverged;
  }
  return kOk;
}

}  // namespace fracmax::cli
