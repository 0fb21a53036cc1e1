// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "experiment.hpp"
#include "fracmax/capacity.hpp"
#include "fracmax/corpus.hpp"
#include "fracmax/hardy.hpp"
#include "fracmax/maximal.hpp"
#include "fracmax/random.hpp"
#include "fracmax/seminorm.hpp"

using namespace fracmax;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "failed: ";
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double time_limit, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0) {
    std::ostringstream msg;
    msg << "runtime " << seconds << " s exceeds " << time_limit << " s";
    out.require(seconds < time_limit, msg.str());
  }
  if (!out.pass) ++failures;
  std::printf("criterion %2d %-32s %s  (%.2f s)  %s\n", id, title.c_str(), out.pass ? "PASS" : "FAIL", seconds,
              out.detail.str().c_str());
  std::fflush(stdout);
}

GridFunction random_function(const DomainPtr& d, Rng& rng, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(d->cell_count());
  for (double& x : v) x = rng.uniform(lo, hi);
  return GridFunction(d, v);
}

DomainPtr interval_in_window(int n, int first, int inside) {
  std::vector<std::uint8_t> mask(n, 0);
  for (int i = first; i < first + inside; ++i) mask[i] = 1;
  return make_from_mask(1, n, mask);
}

int grid(const std::string& name, int log2_h_1d, int log2_h_2d) {
  return 1 << (builtin_dim(name) == 1 ? log2_h_1d : log2_h_2d);
}

bool within_factor_two(double a, double b) { return a > 0 && b > 0 && a <= 2 * b && b <= 2 * a; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

void whitney_exactness(Outcome& out) {
  double slowest = 0.0;
  for (const auto& name : builtin_shapes()) {
    for (int k : {6, 7, 8}) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto g = make_builtin(name, 1 << k);
      const auto w = whitney_decompose(*g);
      std::vector<int> hits(g->cell_count(), 0);
      std::size_t volume = 0;
      bool ratio_ok = true, inside_ok = true;
      for (const auto& q : w.cubes) {
        // Integer form of 1 <= dist/diam <= 4.
        const std::int64_t diam2 = std::int64_t(g->dim()) * q.side_cells * q.side_cells;
        const std::int64_t gap2 = cube_gap2(q, *g);
        ratio_ok = ratio_ok && diam2 <= gap2 && gap2 <= 16 * diam2;
        for (CellIndex c : cube_cells(q, *g)) {
          inside_ok = inside_ok && g->interior(c);
          ++hits[c];
          ++volume;
        }
      }
      for (CellIndex c : w.residual) ++hits[c];
      bool disjoint = true;
      for (CellIndex c = 0; c < g->cell_count(); ++c) disjoint = disjoint && hits[c] == (g->interior(c) ? 1 : 0);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      slowest = std::max(slowest, seconds);
      const std::string tag = name + " h=2^-" + std::to_string(k);
      out.require(ratio_ok, tag + " dist/diam outside [1,4]");
      out.require(inside_ok && disjoint, tag + " overlap or exterior cells");
      out.require(volume + w.residual.size() == g->interior_cells().size(), tag + " volume mismatch");
      out.require(seconds < 1.0, tag + " took " + num(seconds) + " s");
    }
  }
  out.detail << "24 decompositions, slowest " << num(slowest) << " s";
}

void seminorm_closed_form(Outcome& out) {
  const FracParams params(0.5, 2.0);
  double previous = INFINITY;
  for (int k : {6, 7, 8, 9}) {
    const int n = 1 << k;
    const auto g = make_builtin("interval", n);
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = g->center(CellIndex(i))[0];
    const double value = seminorm_power(GridFunction(g, v), params);
    const double h = 1.0 / n, err = std::abs(value - 1.0);
    out.require(err <= 5 * h, "h=2^-" + std::to_string(k) + " error " + num(err));
    out.require(err < previous, "error not decreasing at h=2^-" + std::to_string(k));
    previous = err;
    out.detail << "h=2^-" << k << ": " << num(value) << "  ";
  }
}

void pair_transform_identity(Outcome& out) {
  Rng rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto g = i % 2 == 0 ? make_builtin("interval", 128) : make_builtin("l-shape", 32);
    const FracParams params(rng.uniform(0.05, 0.95), rng.uniform(1.2, 4.0));
    const GridFunction f = random_function(g, rng);
    const double a = lp_norm_pair_power(pair_transform(f, params), params.p());
    const double b = seminorm_power(f, params);
    worst = std::max(worst, std::abs(a - b) / b);
  }
  out.require(worst <= 1e-12, "relative error " + num(worst));
  out.detail << "max relative error " << num(worst);
}

void maximal_boundedness(Outcome& out) {
  const FracParams params(0.5, 2.0);
  for (const std::string name : {"interval", "square", "cusp"}) {
    double maxima[2] = {0.0, 0.0};
    const int coarse = grid(name, 6, 5), fine = grid(name, 8, 6);
    int slot = 0;
    for (int n : {coarse, fine}) {
      const auto g = make_builtin(name, n);
      for (const GridFunction& f : standard_corpus(g, 20, 1)) {
        const double r = maximal_boundedness_ratio(f, params);
        out.require(std::isfinite(r), name + " infinite ratio");
        maxima[slot] = std::max(maxima[slot], r);
      }
      ++slot;
    }
    out.require(within_factor_two(maxima[0], maxima[1]), name + " corpus max not stable");
    out.detail << name << " " << num(maxima[0]) << "->" << num(maxima[1]) << "  ";
  }
}

void domination(Outcome& out) {
  const FracParams params(0.5, 2.0);
  struct Case {
    std::string name;
    std::vector<int> grids;
    int corpus;
    RadiusSet radii;
  };
  for (const Case& c : {Case{"interval", {64, 128, 256}, 20, RadiusSet::All},
                        Case{"square", {32, 64}, 3, RadiusSet::Dyadic}}) {
    std::vector<double> maxima;
    for (int n : c.grids) {
      const auto g = make_builtin(c.name, n);
      double best = 0.0;
      for (const GridFunction& f : standard_corpus(g, c.corpus, 5)) {
        const auto r = domination_check(f, params, c.radii);
        out.require(r.finite, c.name + " non-finite ratio");
        out.require(r.identity_violations == 0, c.name + " R < 2 S(f) at some pair");
        best = std::max(best, r.max_ratio);
      }
      maxima.push_back(best);
      out.detail << c.name << "@" << n << " " << num(best) << "  ";
    }
    out.require(within_factor_two(maxima.front(), maxima.back()), c.name + " corpus max not stable");
  }
}

void maximal_properties(Outcome& out) {
  Rng rng(6);
  for (const std::string name : {"interval", "square", "annulus"}) {
    const auto g = make_builtin(name, builtin_dim(name) == 1 ? 256 : 64);
    for (int trial = 0; trial < 10; ++trial) {
      const GridFunction f = random_function(g, rng), h = random_function(g, rng, -2.0, 3.0);
      const GridFunction mf = local_maximal(f), mh = local_maximal(h), mfh = local_maximal(sum(f, h));
      for (CellIndex c : g->interior_cells()) {
        out.require(mf[c] >= std::abs(f[c]), name + " M f < |f|");
        out.require(mfh[c] <= (mf[c] + mh[c]) * (1 + 1e-14), name + " sublinearity");
      }
      for (double scale : {-2.0, 0.5, 4.0}) {
        const GridFunction ms = local_maximal(scaled(f, scale));
        for (CellIndex c : g->interior_cells()) out.require(ms[c] == std::abs(scale) * mf[c], name + " homogeneity");
      }
    }
  }
  const auto g = make_builtin("interval", 256);
  std::vector<double> v(256);
  for (CellIndex c = 0; c < 256; ++c) v[c] = g->center(c)[0] < 0.5 ? 1.0 : 0.0;
  const GridFunction m = local_maximal(GridFunction(g, v));
  out.require(m[*g->cell_containing({0.75, 0.0})] == 0.0, "locality example");
  out.detail << "3 domains x 10 pairs, scalars -2, 1/2, 4";
}

void harnack(Outcome& out) {
  Rng rng(7);
  double worst[3] = {0.0, 0.0, 0.0};
  for (const auto& name : builtin_shapes()) {
    const auto g = make_builtin(name, builtin_dim(name) == 1 ? 256 : 64);
    const auto w = whitney_decompose(*g);
    const double bound = harnack_constant(g->dim()) + 0.05;
    for (int trial = 0; trial < 10; ++trial) {
      const GridFunction u = random_function(g, rng, 0.0, 1.0);
      const GridFunction mu = local_maximal(u);
      for (const auto& q : w.cubes) {
        const double r = harnack_ratio(u, mu, w, q);
        worst[g->dim()] = std::max(worst[g->dim()], r);
        out.require(r <= bound, name + " ratio " + num(r));
      }
    }
  }
  out.detail << "C(1)=" << num(harnack_constant(1)) << " max " << num(worst[1]) << ", C(2)=" << num(harnack_constant(2))
             << " max " << num(worst[2]);
}

void capacity_oracle_equivalence(Outcome& out) {
  Rng rng(8);
  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    const double s = std::array{0.25, 0.5, 0.75}[i % 3];
    const int inside = 6 + int(rng.below(9));  // 6..14 cells
    const int first = 1 + int(rng.below(std::uint64_t(16 - inside - 1)));
    const auto g = interval_in_window(16, first, inside);
    std::vector<CellIndex> k;
    for (CellIndex c : g->interior_cells())
      if (rng.uniform() < 0.35) k.push_back(c);
    if (k.empty()) k.push_back(g->interior_cells()[rng.below(g->interior_cells().size())]);
    while (g->interior_cells().size() - k.size() > 12) {
      const CellIndex c = g->interior_cells()[rng.below(g->interior_cells().size())];
      if (std::find(k.begin(), k.end(), c) == k.end()) k.push_back(c);
    }
    const CompactSet set(g, k);
    const FracParams params(s, 2.0);
    const double a = capacity(set, params).value, b = capacity_oracle(set, params);
    worst = std::max(worst, std::abs(a - b) / b);
  }
  out.require(worst <= 1e-3, "relative error " + num(worst));
  out.detail << "30 instances, max relative error " << num(worst);
}

void capacity_structure(Outcome& out) {
  const FracParams params(0.25, 2.0);
  for (const std::string name : {"interval", "square"}) {
    const auto g = make_builtin(name, builtin_dim(name) == 1 ? 64 : 16);
    const auto empty = capacity(CompactSet(g, {}), params);
    out.require(empty.value == 0.0, name + " empty set");
    const auto full = capacity(CompactSet(g, g->interior_cells()), params);
    double sup = 0.0;
    for (CellIndex c = 0; c < g->cell_count(); ++c)
      sup = std::max(sup, std::abs(full.minimizer[c] - (g->interior(c) ? 1.0 : 0.0)));
    out.require(sup <= 1e-6, name + " K = G minimizer off by " + num(sup));
  }
  Rng rng(9);
  int pairs = 0;
  double worst_drop = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto g = i % 2 == 0 ? make_builtin("interval", 64) : make_builtin("l-shape", 16);
    std::vector<CellIndex> big, small;
    for (CellIndex c : g->interior_cells())
      if (rng.uniform() < 0.2) {
        big.push_back(c);
        if (rng.uniform() < 0.5) small.push_back(c);
      }
    if (small.empty() || small.size() == big.size()) --i;
    if (small.empty() || small.size() == big.size()) continue;
    const auto a = capacity(CompactSet(g, small), params), b = capacity(CompactSet(g, big), params);
    out.require(a.converged && b.converged, "solver did not converge");
    worst_drop = std::max(worst_drop, (a.value - b.value) / b.value);
    out.require(a.value <= b.value * (1 + 1e-6), "monotonicity violated");
    for (const auto* r : {&a, &b})
      for (double x : r->minimizer.values()) out.require(x >= -1e-6 && x <= 1 + 1e-6, "minimizer out of range");
    ++pairs;
  }
  out.detail << pairs << " nested pairs, worst relative excess " << num(worst_drop);
}

void condition_b(Outcome& out) {
  const FracParams params(0.25, 2.0);
  std::vector<ConditionBReport> reports;
  for (int k : {6, 7, 8}) {
    const auto g = make_builtin("interval", 1 << k);
    ConditionBReport r = condition_b_report(g, params);
    const std::string tag = "h=2^-" + std::to_string(k);
    out.require(r.testing.unconverged == 0 && r.quasi.unconverged == 0, tag + " unconverged solves");
    for (const auto& f : r.quasi.records) {
      if (f.size == 1) out.require(f.ratio == 1.0, tag + " singleton ratio " + num(f.ratio));
      out.require(f.ratio >= 1 - 1e-6 && f.ratio <= double(f.size) + 1e-6, tag + " N_E out of range");
    }
    double asym = 0.0;
    const int n = 1 << k;
    for (const auto& a : r.testing.records)
      for (const auto& b : r.testing.records)
        if (a.cube.side_cells == b.cube.side_cells && b.cube.first_cell()[0] == n - a.cube.first_cell()[0] - a.cube.side_cells)
          asym = std::max(asym, std::abs(a.c - b.c) / std::max(a.c, b.c));
    out.require(asym <= 0.01, tag + " mirror asymmetry " + num(asym));
    out.detail << tag << ": max_c " << num(r.testing.max_c) << " max_N " << num(r.quasi.max_ratio) << " hardy "
               << num(r.hardy_lower_bound) << "  ";
    reports.push_back(std::move(r));
  }
  const auto& a = reports.front();
  const auto& b = reports.back();
  out.require(within_factor_two(a.testing.max_c, b.testing.max_c), "max_c not stable");
  out.require(within_factor_two(a.quasi.max_ratio, b.quasi.max_ratio), "max_N not stable");
  out.require(within_factor_two(a.hardy_lower_bound, b.hardy_lower_bound), "Hardy lower bound not stable");
}

void determinism(Outcome& out) {
  const fs::path root = fs::path(FRACMAX_TEST_TMP) / "acceptance-determinism";
  fs::remove_all(root);
  int runs = 0;
  for (const std::string& command : cli::subcommands()) {
    for (const std::string domain : {"shape = interval\ncells_per_side = 64\n", "shape = l-shape\ncells_per_side = 16\n"}) {
      std::string text = "command = " + command + "\n" + domain + "s = 0.25\nseed = 3\nfamily_budget = 6\ncorpus_size = 4\n";
      if (command == "capacity") text += "set = cube:1\n";
      auto parsed = cli::parse_spec(text);
      if (!parsed.spec) {
        out.require(false, command + " spec rejected");
        continue;
      }
      std::ostringstream err;
      const fs::path a = root / (command + std::to_string(runs) + "a"), b = root / (command + std::to_string(runs) + "b");
      parsed.spec->out = a.string();
      const int ca = cli::run(*parsed.spec, err);
      parsed.spec->out = b.string();
      const int cb = cli::run(*parsed.spec, err);
      out.require(ca == cli::kOk && cb == cli::kOk, command + " failed: " + err.str());
      for (const auto& entry : fs::directory_iterator(a))
        out.require(slurp(entry.path()) == slurp(b / entry.path().filename()),
                    command + " " + entry.path().filename().string() + " differs");
      ++runs;
    }
  }
  out.detail << runs << " experiment pairs compared byte for byte";
}

}  // namespace

int main() {
  criterion(1, "Whitney exactness", 0, whitney_exactness);
  criterion(2, "seminorm closed form", 5, seminorm_closed_form);
  criterion(3, "pair-transform identity", 0, pair_transform_identity);
  criterion(4, "maximal boundedness harness", 600, maximal_boundedness);
  criterion(5, "domination", 600, domination);
  criterion(6, "maximal unit properties", 0, maximal_properties);
  criterion(7, "Harnack check", 0, harnack);
  criterion(8, "capacity oracle equivalence", 60, capacity_oracle_equivalence);
  criterion(9, "capacity structure", 0, capacity_structure);
  criterion(10, "condition-B suite", 900, condition_b);
  criterion(11, "determinism", 0, determinism);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
