// Copyright 2026 The reachsweep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reachsweep/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "reachsweep/config.hpp"
#include "reachsweep/errors.hpp"
#include "reachsweep/gradcheck.hpp"
#include "reachsweep/io.hpp"
#include "reachsweep/levelset.hpp"
#include "reachsweep/oracle.hpp"
#include "reachsweep/scaling.hpp"
#include "reachsweep/sweep.hpp"

namespace reachsweep {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const Vec& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(finite_or_null(v[i]));
  return out;
}

// Discards output when --quiet is set.
class Console {
 public:
  explicit Console(const CliOptions& o) : o_(o) {}
  std::ostream& out() { return o_.quiet ? null_ : *o_.stdout_stream; }
  std::ostream& err() { return *o_.stderr_stream; }

 private:
  const CliOptions& o_;
  std::ostringstream null_;
};

fs::path output_dir(const CliOptions& opts, const std::string& from_config) {
  fs::path dir = !opts.out.empty() ? fs::path(opts.out)
                                   : (!from_config.empty() ? fs::path(from_config) : ".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

RunConfig load_required(const CliOptions& opts) {
  if (opts.config.empty()) throw ConfigError("--config PATH is required");
  return load_config(opts.config);
}

json levelset_json(const LevelSet& ls) {
  json j = {{"dim", ls.dim},
            {"vertices", ls.vertices.size()},
            {"segments", ls.segments.size()},
            {"triangles", ls.triangles.size()}};
  if (ls.dim == 1) {
    json c = json::array();
    for (const Vec& v : ls.vertices) c.push_back(v[0]);
    j["crossings"] = c;
  }
  return j;
}

// Maps exceptions onto the exit-code contract.
int guarded(Console& con, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    con.err() << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedModelError& e) {
    con.err() << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    con.err() << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("REACHSWEEP_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) {
      throw ConfigError(std::string("REACHSWEEP_THREADS='") + env +
                        "' is not a positive integer");
    }
    return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_sweep(const CliOptions& opts) {
  Console con(opts);
  return guarded(con, [&] {
    const auto start = clock_type::now();
    const RunConfig cfg = load_required(opts);
    cfg.require_problem();
    if (!cfg.seeds) throw ConfigError("seeds: required section missing for sweep");
    if (!(cfg.T > 0.0)) throw ConfigError("horizon.T: sweep requires T > 0");
    const int threads = resolve_threads(opts.threads);
    const fs::path dir = output_dir(opts, cfg.output);

    const SystemModel model = cfg.model();
    const TerminalCost target = cfg.target();
    const SeedSet seeds =
        seed_grid(Box(cfg.seeds->lo, cfg.seeds->hi), cfg.seeds->counts, cfg.seeds->jitter);
    SweepOptions so;
    so.trust_radius = cfg.seeds->trust_radius;
    so.threads = threads;
    const auto sweep_start = clock_type::now();
    const SweepResult res = run_sweep(model, target, seeds, cfg.horizon(), cfg.solver, so);
    const double sweep_seconds = seconds_since(sweep_start);

    const fs::path values = dir / "values.csv";
    write_values_csv(values.string(), res.buffer.grid, res.buffer.contributors);
    const LevelSet ls = model.n() <= 3 ? extract_levelset(res.buffer.grid) : LevelSet{};
    const std::string ls_path =
        model.n() <= 3 ? write_levelset((dir / "levelset").string(), ls) : "";

    json seeds_json = json::array();
    std::map<std::string, int> by_status;
    int monotone = 0, ratio = 0;
    for (const SeedReport& r : res.reports) {
      ++by_status[r.status];
      monotone += r.monotone_violations;
      ratio += r.ratio_violations;
      json s = {{"index", r.index},
                {"seed", to_json(r.seed)},
                {"status", r.status},
                {"iterations", r.iterations},
                {"accepted_steps", r.accepted_steps},
                {"final_ratio", finite_or_null(r.final_ratio)},
                {"value", finite_or_null(r.value)},
                {"monotone_violations", r.monotone_violations},
                {"ratio_violations", r.ratio_violations},
                {"seconds", r.seconds}};
      if (!r.error.empty()) s["error"] = r.error;
      seeds_json.push_back(std::move(s));
    }
    std::size_t unreached = 0;
    for (int c : res.buffer.contributors) unreached += c == 0 ? 1 : 0;
    const int failed = by_status.count("failed") ? by_status["failed"] : 0;

    json report = {
        {"command", "sweep"},
        {"config", cfg.source},
        {"resolved",
         {{"model", model.name()},
          {"n", model.n()},
          {"T", cfg.T},
          {"K", cfg.K},
          {"target", target.ToJson()},
          {"trust_radius", res.trust_radius},
          {"threads", threads}}},
        {"totals",
         {{"seeds", res.reports.size()},
          {"by_status", by_status},
          {"monotone_violations", monotone},
          {"ratio_violations", ratio},
          {"unreached_nodes", unreached}}},
        {"levelset", levelset_json(ls)},
        {"files", {{"values", values.filename().string()},
                   {"levelset", ls_path.empty() ? json(nullptr)
                                                : json(fs::path(ls_path).filename().string())}}},
        {"timings", {{"sweep_seconds", sweep_seconds}, {"total_seconds", seconds_since(start)}}},
        {"seeds", seeds_json}};
    write_json((dir / "report.json").string(), report);

    con.out() << "sweep: " << res.reports.size() << " seeds";
    for (const auto& [status, count] : by_status) con.out() << ", " << count << " " << status;
    con.out() << "; " << unreached << " unreached nodes; " << sweep_seconds << " s\n";
    if (model.n() == 1) {
      con.out() << "zero crossings:";
      for (const Vec& v : ls.vertices) con.out() << " " << v[0];
      con.out() << "\n";
    }
    if (failed > 0) {
      con.err() << "sweep: " << failed << " seed(s) failed; see report.json\n";
      return kExitNumerical;
    }
    return kExitOk;
  });
}

int cmd_oracle(const CliOptions& opts) {
  Console con(opts);
  return guarded(con, [&] {
    const auto start = clock_type::now();
    const RunConfig cfg = load_required(opts);
    cfg.require_problem();
    if (!cfg.oracle) throw ConfigError("oracle: required section missing for oracle");
    const int threads = resolve_threads(opts.threads);
    const SystemModel model = cfg.model();
    const TerminalCost target = cfg.target();
    const PdeSchedule schedule = pde_schedule(model, *cfg.oracle, cfg.T);
    const fs::path dir = output_dir(opts, cfg.output);
    const DenseGrid grid = solve_pde(model, target, *cfg.oracle, cfg.T, threads);

    const fs::path values = dir / "oracle_values.csv";
    write_values_csv(values.string(), grid, std::vector<int>(grid.size(), 1));
    const LevelSet ls = extract_levelset(grid);
    const std::string ls_path = write_levelset((dir / "oracle_levelset").string(), ls);

    json report = {{"command", "oracle"},
                   {"config", cfg.source},
                   {"resolved",
                    {{"model", model.name()},
                     {"n", model.n()},
                     {"T", cfg.T},
                     {"target", target.ToJson()},
                     {"nodes", cfg.oracle->nodes},
                     {"dt", schedule.dt},
                     {"steps", schedule.steps},
                     {"cfl_dt", schedule.cfl},
                     {"threads", threads}}},
                   {"levelset", levelset_json(ls)},
                   {"files",
                    {{"values", values.filename().string()},
                     {"levelset", fs::path(ls_path).filename().string()}}},
                   {"timings", {{"total_seconds", seconds_since(start)}}}};
    write_json((dir / "oracle_report.json").string(), report);

    con.out() << "oracle: " << grid.size() << " nodes, " << schedule.steps << " steps of dt "
              << schedule.dt << "\n";
    if (model.n() == 1) {
      con.out() << "zero crossings:";
      for (const Vec& v : ls.vertices) con.out() << " " << v[0];
      con.out() << "\n";
    }
    return kExitOk;
  });
}

SignAgreement sign_agreement(const DenseGrid& a, const std::vector<int>& contributors_a,
                             const DenseGrid& b) {
  if (!a.same_layout(b) || contributors_a.size() != a.size()) {
    throw ConfigError("sign agreement needs grids with identical layout");
  }
  const int d = b.dim();
  SignAgreement s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (contributors_a[i] <= 0) continue;
    const bool ref = b[i] <= 0.0;
    const std::vector<int> idx = b.unflatten(i);
    bool band = false;
    // Walk the 3^d offsets in {-1, 0, 1}^d.
    std::vector<int> off(static_cast<std::size_t>(d), -1);
    while (!band) {
      std::vector<int> nb = idx;
      bool inside = true;
      for (int k = 0; k < d; ++k) {
        nb[static_cast<std::size_t>(k)] += off[static_cast<std::size_t>(k)];
        inside = inside && nb[static_cast<std::size_t>(k)] >= 0 &&
                 nb[static_cast<std::size_t>(k)] < b.nodes()[static_cast<std::size_t>(k)];
      }
      if (inside && (b[b.flat(nb)] <= 0.0) != ref) band = true;
      int k = d - 1;
      while (k >= 0 && off[static_cast<std::size_t>(k)] == 1) {
        off[static_cast<std::size_t>(k)] = -1;
        --k;
      }
      if (k < 0) break;
      ++off[static_cast<std::size_t>(k)];
    }
    if (band) continue;
    ++s.considered;
    if ((a[i] <= 0.0) == ref) ++s.agree;
  }
  return s;
}

int cmd_compare(const std::string& a_path, const std::string& b_path, const CliOptions& opts) {
  Console con(opts);
  return guarded(con, [&] {
    const ValuesFile a = read_values_csv(a_path);
    const ValuesFile b = read_values_csv(b_path);
    if (!a.grid.same_layout(b.grid)) {
      std::ostringstream os;
      os << "grids differ:";
      if (a.grid.dim() != b.grid.dim()) {
        os << " dimension " << a.grid.dim() << " vs " << b.grid.dim();
      } else {
        for (int k = 0; k < a.grid.dim(); ++k) {
          const auto na = a.grid.nodes()[static_cast<std::size_t>(k)];
          const auto nb = b.grid.nodes()[static_cast<std::size_t>(k)];
          if (a.grid.lo()[k] != b.grid.lo()[k] || a.grid.hi()[k] != b.grid.hi()[k] || na != nb) {
            os << "\n  axis " << k << ": [" << format_double(a.grid.lo()[k]) << ", "
               << format_double(a.grid.hi()[k]) << "] x " << na << " vs ["
               << format_double(b.grid.lo()[k]) << ", " << format_double(b.grid.hi()[k])
               << "] x " << nb;
          }
        }
      }
      throw ConfigError(os.str());
    }
    const fs::path dir = output_dir(opts, "");
    const SetDistance dist = compare_sets(extract_levelset(a.grid), extract_levelset(b.grid));
    const SignAgreement agree = sign_agreement(a.grid, a.contributors, b.grid);
    json report = {{"command", "compare"},
                   {"a", a_path},
                   {"b", b_path},
                   {"hausdorff", dist.hausdorff},
                   {"mean", dist.mean},
                   {"agreement", agree.fraction()},
                   {"agreement_nodes", agree.considered}};
    write_json((dir / "compare.json").string(), report);
    con.out() << "hausdorff " << format_double(dist.hausdorff) << "\n"
              << "mean " << format_double(dist.mean) << "\n"
              << "agreement " << format_double(agree.fraction()) << " (" << agree.agree << "/"
              << agree.considered << " nodes)\n";
    return kExitOk;
  });
}

int cmd_gradcheck(const CliOptions& opts) {
  Console con(opts);
  return guarded(con, [&] {
    GradcheckSpec spec;
    std::string out_from_config;
    if (!opts.config.empty()) {
      const RunConfig cfg = load_config(opts.config);
      spec = cfg.gradcheck;
      out_from_config = cfg.output;
    }
    const fs::path dir = output_dir(opts, out_from_config);
    const GradcheckReport rep = run_gradcheck(spec);
    write_json((dir / "gradcheck.json").string(), rep.ToJson());
    for (const BlockError& b : rep.blocks) {
      con.out() << (b.pass() ? "ok   " : "FAIL ") << b.suite << "/" << b.model << "/" << b.block
                << " max_err=" << b.error << " tol=" << b.tol << "\n";
    }
    if (!rep.pass()) {
      con.err() << "gradcheck failed: " << rep.first_failure() << "\n";
      return kExitNumerical;
    }
    con.out() << "gradcheck passed (" << rep.blocks.size() << " blocks)\n";
    return kExitOk;
  });
}

int cmd_scaling(const std::vector<int>& dims, const CliOptions& opts) {
  Console con(opts);
  return guarded(con, [&] {
    const fs::path dir = output_dir(opts, "");
    const ScalingResult res = measure_scaling(dims);
    write_json((dir / "scaling.json").string(), res.ToJson());
    for (const auto& p : res.points) {
      con.out() << "n=" << p.n << " seconds=" << p.seconds << " repeats=" << p.repeats << "\n";
    }
    con.out() << "exponent " << res.exponent << "\n";
    return kExitOk;
  });
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Backward reachable tubes for two-player differential games"};
  app.require_subcommand(1);
  CliOptions opts;
  opts.stdout_stream = &out;
  opts.stderr_stream = &err;

  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opts.config, "JSON run configuration");
    if (needs_config) c->required();
    sub->add_option("--out", opts.out, "output directory");
    sub->add_option("--threads", opts.threads, "worker threads (default REACHSWEEP_THREADS)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", opts.quiet, "suppress progress output");
  };
  auto* sweep = app.add_subcommand("sweep", "solve seeded trajectories and write the value grid");
  common(sweep, true);
  auto* oracle = app.add_subcommand("oracle", "solve the HJI PDE on a dense grid (n <= 3)");
  common(oracle, true);
  auto* compare = app.add_subcommand("compare", "compare two value files (B is the reference)");
  std::string a_path, b_path;
  compare->add_option("A", a_path, "values file")->required();
  compare->add_option("B", b_path, "reference values file")->required();
  common(compare, false);
  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference derivative checks");
  common(gradcheck, false);
  auto* scaling = app.add_subcommand("scaling", "time one iteration against state dimension");
  std::vector<int> dims = {2, 4, 8, 16};
  scaling->add_option("--dims", dims, "state dimensions")->delimiter(',');
  common(scaling, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (*sweep) return cmd_sweep(opts);
  if (*oracle) return cmd_oracle(opts);
  if (*compare) return cmd_compare(a_path, b_path, opts);
  if (*gradcheck) return cmd_gradcheck(opts);
  return cmd_scaling(dims, opts);
}

}  // namespace reachsweep
