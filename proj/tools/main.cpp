// symsplit CLI: builds tomosynthesis systems, solves them directly or via
// the centrosymmetric split, and benchmarks the two paths.

#include "symsplit/centro.hpp"
#include "symsplit/geometry.hpp"
#include "symsplit/io.hpp"
#include "symsplit/matrix.hpp"
#include "symsplit/phantom.hpp"
#include "symsplit/solvers.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace symsplit;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct GlobalFlags {
  bool json = false;
  int parallelism = 0;
};

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path, path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

ScanConfig load_config(const std::string& path) {
  try {
    return parse_scan_config(read_text_file(path));
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw IoError(std::string(e.what()) + " in " + path, path);
  }
}

double rel_error(const Vector& got, const Vector& truth) {
  const double denom = truth.norm();
  return denom > 0 ? (got - truth).norm() / denom : (got - truth).norm();
}

json report_to_json(const SolveReport& rep) {
  json j{{"method", method_name(rep.method)},
         {"mode", mode_name(rep.mode)},
         {"residual_norm", rep.residual_norm},
         {"solution_norm", rep.solution_norm},
         {"iterations", rep.iterations},
         {"wall_time_seconds", rep.wall_time_seconds}};
  if (rep.mode == Mode::split) {
    j["split_seconds"] = rep.split_seconds;
    j["recombine_seconds"] = rep.recombine_seconds;
    j["branch_seconds"] = {rep.branch1_seconds, rep.branch2_seconds};
  }
  return j;
}

void print_report(const SolveReport& rep) {
  std::printf("method=%s mode=%s iterations=%d residual=%.6e |f|=%.6e time=%.4fs\n",
              method_name(rep.method).c_str(), mode_name(rep.mode).c_str(),
              rep.iterations, rep.residual_norm, rep.solution_norm,
              rep.wall_time_seconds);
}

// ---------------------------------------------------------------------------
// example1: the 4x6 worked system with published reference values.

struct Check {
  std::string name;
  double expected;
  double actual;
  double tol;
  bool pass() const { return std::abs(expected - actual) <= tol; }
};

int run_example1(const GlobalFlags& flags, bool perturb) {
  DenseStorage a(4, 6);
  a << 1, 3, 5, 7, 9, 1,  //
      2, 4, 6, 8, 3, 7,   //
      7, 3, 8, 6, 4, 2,   //
      1, 9, 7, 5, 3, 1;
  if (perturb) a(0, 0) += 0.1;  // negative-control hook
  Vector p(4);
  p << 5, 6, 8, 7;
  const CentroSystem sys{Matrix{a}, p, perturb ? 1.0 : 0.0};

  const SplitSystem split = split_system(sys);
  const Vector f1 = pseudo_solve_dense(split.a1, split.p1);
  const Vector f2 = pseudo_solve_dense(split.a2, split.p2);
  const Vector f = recombine_solution({f1, f2});
  const auto norms = norm_identity({f1, f2}, f);

  const double ref_f1[3] = {0.3512, 0.2508, 0.2475};
  const double ref_f2[3] = {0.3542, 0.3373, 0.6036};
  const double ref_f[6] = {0.3527, 0.2941, 0.4256, 0.1781, 0.0433, 0.0015};

  std::vector<Check> checks;
  for (int i = 0; i < 3; ++i) {
    checks.push_back({"f1[" + std::to_string(i + 1) + "]", ref_f1[i], f1[i], 1e-4});
    checks.push_back({"f2[" + std::to_string(i + 1) + "]", ref_f2[i], f2[i], 1e-4});
  }
  for (int i = 0; i < 6; ++i) {
    checks.push_back({"f[" + std::to_string(i + 1) + "]", ref_f[i], f[i], 1e-4});
  }
  checks.push_back({"|f1|", 0.4975, f1.norm(), 1e-4});
  checks.push_back({"|f2|", 0.7769, f2.norm(), 1e-4});
  checks.push_back({"|f|", 0.6523, std::sqrt(norms.lhs), 1e-4});
  checks.push_back({"norm_identity_rel_err", 0.0, norms.rel_err, 1e-12});

  bool all_pass = true;
  for (const Check& c : checks) all_pass = all_pass && c.pass();

  if (flags.json) {
    json doc{{"pass", all_pass}, {"checks", json::array()}};
    for (const Check& c : checks) {
      doc["checks"].push_back({{"name", c.name},
                               {"expected", c.expected},
                               {"actual", c.actual},
                               {"tol", c.tol},
                               {"pass", c.pass()}});
    }
    std::cout << doc.dump(2) << "\n";
  } else {
    std::printf("%-24s %12s %12s %9s  %s\n", "check", "expected", "actual",
                "tol", "status");
    for (const Check& c : checks) {
      std::printf("%-24s %12.4f %12.4f %9.0e  %s\n", c.name.c_str(),
                  c.expected, c.actual, c.tol, c.pass() ? "ok" : "FAIL");
    }
    std::printf("example1: %s\n", all_pass ? "PASS" : "FAIL");
  }
  return all_pass ? kExitOk : kExitCheckFailure;
}

// ---------------------------------------------------------------------------
// build: geometry -> system matrix (+ phantom projection).

int run_build(const GlobalFlags& flags, const std::string& config_path,
              const std::string& out_matrix, const std::string& out_rhs,
              const std::string& phantom_name) {
  const ScanConfig cfg = load_config(config_path);
  const GridSpec grid = make_grid(cfg);
  CentroSystem sys = build_system(cfg.geom, grid, flags.parallelism);
  const SplitSystem split = split_system(sys);

  if (!phantom_name.empty()) {
    if (phantom_name != "shepp-logan") {
      throw CLI::ValidationError("--phantom", "unknown phantom: " + phantom_name);
    }
    const PhantomImage image = rasterize(shepp_logan_ellipses(), grid);
    sys.p = forward_project(sys.a, image.values);
  }

  if (!out_matrix.empty()) write_matrix_market(sys.a, out_matrix);
  if (!out_rhs.empty()) {
    if (phantom_name.empty()) {
      throw CLI::ValidationError("--out-rhs", "requires --phantom");
    }
    write_vector_csv(sys.p, out_rhs);
  }

  const auto symmetry = verify_symmetry(sys.a, 0.0);
  if (flags.json) {
    json doc{{"rows", sys.a.rows()},
             {"cols", sys.a.cols()},
             {"nnz", sys.a.nonzeros()},
             {"fill", split.parent_fill},
             {"fill1", split.fill1},
             {"fill2", split.fill2},
             {"symmetric", symmetry.holds}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::printf("rows=%lld cols=%lld nnz=%lld\n",
                static_cast<long long>(sys.a.rows()),
                static_cast<long long>(sys.a.cols()),
                static_cast<long long>(sys.a.nonzeros()));
    std::printf("fill=%.6f fill1=%.6f fill2=%.6f symmetric=%s\n",
                split.parent_fill, split.fill1, split.fill2,
                symmetry.holds ? "yes" : "no");
  }
  return symmetry.holds ? kExitOk : kExitCheckFailure;
}

// ---------------------------------------------------------------------------
// solve: stored system -> solution.

int run_solve(const GlobalFlags& flags, const std::string& matrix_path,
              const std::string& rhs_path, const std::string& mode,
              const std::string& method, double tol, int max_iters,
              double relaxation, double sym_tol, const std::string& out_path,
              const std::string& truth_path) {
  CentroSystem sys;
  sys.a = read_matrix_market(matrix_path);
  sys.p = read_vector_csv(rhs_path);
  sys.symmetry_tol = sym_tol;
  if (sys.p.size() != sys.a.rows()) {
    throw Error("rhs length does not match the matrix rows");
  }

  SolveOptions opts;
  opts.method = method_from_name(method);
  opts.tol = tol;
  opts.max_iters = max_iters;
  opts.relaxation = relaxation;
  opts.parallelism = flags.parallelism;

  SolveReport rep;
  if (mode == "direct") {
    rep = solve_direct(sys, opts);
  } else if (mode == "split") {
    try {
      rep = solve_split(sys, opts);
    } catch (const SymmetryError& e) {
      std::ostringstream msg;
      msg << "split mode needs a centrosymmetric matrix: max violation "
          << e.report.max_violation << " at (" << e.report.worst_row << ","
          << e.report.worst_col << ") exceeds tol " << sym_tol;
      throw Error(msg.str());
    }
  } else {
    throw CLI::ValidationError("--mode", "must be direct or split");
  }

  if (!out_path.empty()) write_vector_csv(rep.f, out_path);

  std::optional<double> err;
  if (!truth_path.empty()) {
    err = rel_error(rep.f, read_vector_csv(truth_path));
  }

  if (flags.json) {
    json doc = report_to_json(rep);
    if (err) doc["rel_error"] = *err;
    std::cout << doc.dump(2) << "\n";
  } else {
    print_report(rep);
    if (err) std::printf("rel_error=%.6e\n", *err);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench: direct vs split over grid sizes.

struct BenchCase {
  int size = 0;
  CentroSystem sys;
  Vector truth;
};

BenchCase make_bench_case(int size, int parallelism) {
  BenchCase out;
  out.size = size;
  ScanConfig cfg;
  cfg.grid_nx = size;
  cfg.grid_ny = size;
  cfg.geom.k = std::max(2, 24 * size / 32 / 2 * 2);
  const GridSpec grid = make_grid(cfg);
  out.sys = build_system(cfg.geom, grid, parallelism);
  out.truth = rasterize(shepp_logan_ellipses(), grid).values;
  out.sys.p = forward_project(out.sys.a, out.truth);
  return out;
}

int run_bench(const GlobalFlags& flags, const std::string& sizes_arg,
              const std::string& modes_arg, int reps, double tol,
              int max_iters, const std::string& out_path,
              std::int64_t dense_cap) {
  std::vector<int> sizes;
  {
    std::stringstream ss(sizes_arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) sizes.push_back(std::stoi(item));
    }
  }
  std::vector<Mode> modes;
  {
    std::stringstream ss(modes_arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "direct") {
        modes.push_back(Mode::direct);
      } else if (item == "split") {
        modes.push_back(Mode::split);
      } else if (!item.empty()) {
        throw CLI::ValidationError("--modes", "unknown mode: " + item);
      }
    }
  }
  if (sizes.empty() || modes.empty()) {
    throw CLI::ValidationError("bench", "need at least one size and one mode");
  }
  if (reps < 1) throw CLI::ValidationError("--reps", "must be >= 1");

  std::vector<BenchRecord> records;
  for (const int size : sizes) {
    const BenchCase bench = make_bench_case(size, flags.parallelism);
    const std::int64_t elements =
        static_cast<std::int64_t>(bench.sys.a.rows()) * bench.sys.a.cols();

    SolveOptions opts;
    opts.tol = tol;
    opts.max_iters = max_iters;
    opts.parallelism = flags.parallelism;
    opts.dense_cap = dense_cap;
    if (elements <= dense_cap) {
      opts.method = Method::dense_minnorm;
    } else {
      // Memory guard: the dense path would need more than dense_cap entries.
      opts.method = Method::cgls;
      std::fprintf(stderr,
                   "bench: size %d is over the dense cap (%lld entries); "
                   "using cgls\n",
                   size, static_cast<long long>(elements));
    }

    double direct_time = 0.0, split_time = 0.0;
    for (const Mode mode : modes) {
      double best = std::numeric_limits<double>::infinity();
      double worst = 0.0;
      SolveReport rep;
      for (int r = 0; r < reps; ++r) {
        rep = mode == Mode::direct ? solve_direct(bench.sys, opts)
                                   : solve_split(bench.sys, opts);
        best = std::min(best, rep.wall_time_seconds);
        worst = std::max(worst, rep.wall_time_seconds);
      }
      std::fprintf(stderr,
                   "bench: size %d mode %s method %s min=%.4fs max=%.4fs\n",
                   size, mode_name(mode).c_str(),
                   method_name(opts.method).c_str(), best, worst);

      BenchRecord record;
      record.label = "grid" + std::to_string(size);
      record.rows = bench.sys.a.rows();
      record.cols = bench.sys.a.cols();
      record.nnz = bench.sys.a.nonzeros();
      record.method = opts.method;
      record.mode = mode;
      record.wall_time_seconds = best;
      record.residual_norm = rep.residual_norm;
      record.rel_error = rel_error(rep.f, bench.truth);
      record.reps = reps;
      records.push_back(record);
      if (mode == Mode::direct) direct_time = best;
      if (mode == Mode::split) split_time = best;
    }
    if (direct_time > 0 && split_time > 0) {
      std::printf("size %d: speedup t_direct/t_split = %.2f\n", size,
                  direct_time / split_time);
    }
  }

  if (!out_path.empty()) {
    const bool as_json = out_path.size() > 5 &&
                         out_path.substr(out_path.size() - 5) == ".json";
    write_bench_report(records, out_path,
                       as_json ? ReportFormat::json : ReportFormat::csv);
  }
  if (flags.json) {
    json doc = json::array();
    for (const BenchRecord& r : records) {
      doc.push_back({{"label", r.label},
                     {"rows", r.rows},
                     {"cols", r.cols},
                     {"nnz", r.nnz},
                     {"method", method_name(r.method)},
                     {"mode", mode_name(r.mode)},
                     {"wall_time_seconds", r.wall_time_seconds},
                     {"residual_norm", r.residual_norm},
                     {"rel_error", r.rel_error ? json(*r.rel_error) : json()},
                     {"reps", r.reps}});
    }
    std::cout << doc.dump(2) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// recon: config -> build -> project -> split solve -> image.

int run_recon(const GlobalFlags& flags, const std::string& config_path,
              const std::string& out_image, double tol, int max_iters,
              std::int64_t dense_cap) {
  const ScanConfig cfg = load_config(config_path);
  const GridSpec grid = make_grid(cfg);
  CentroSystem sys = build_system(cfg.geom, grid, flags.parallelism);
  const PhantomImage truth = rasterize(shepp_logan_ellipses(), grid);
  sys.p = forward_project(sys.a, truth.values);

  SolveOptions opts;
  opts.tol = tol;
  opts.max_iters = max_iters;
  opts.parallelism = flags.parallelism;
  opts.dense_cap = dense_cap;
  const std::int64_t elements =
      static_cast<std::int64_t>(sys.a.rows()) * sys.a.cols();
  opts.method =
      elements <= dense_cap ? Method::dense_minnorm : Method::cgls;

  const SolveReport rep = solve_split(sys, opts);
  if (!out_image.empty()) write_pgm(rep.f, grid, out_image);
  const double err = rel_error(rep.f, truth.values);

  if (flags.json) {
    json doc = report_to_json(rep);
    doc["rel_error"] = err;
    doc["image"] = out_image;
    std::cout << doc.dump(2) << "\n";
  } else {
    print_report(rep);
    std::printf("rel_error=%.6e image=%s\n", err, out_image.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Centrosymmetric split solver for tomographic systems"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags are accepted after the subcommand name

  GlobalFlags flags;
  app.add_flag("--json", flags.json, "machine-readable output");
  app.add_option("--parallel", flags.parallelism,
                 "worker budget (0 = all cores)")
      ->envname("SYMSPLIT_PARALLEL");

  auto* example1 = app.add_subcommand(
      "example1", "run the 4x6 worked system against its published values");
  bool perturb = false;
  example1->add_flag("--perturb", perturb, "negative-control test hook")
      ->group("");

  auto* build = app.add_subcommand("build", "build a system matrix");
  std::string config_path, out_matrix, out_rhs, phantom_name;
  build->add_option("--config", config_path, "scan configuration file")
      ->required();
  build->add_option("--out-matrix", out_matrix, "Matrix Market output path");
  build->add_option("--out-rhs", out_rhs,
                    "projection output path (needs --phantom)");
  build->add_option("--phantom", phantom_name,
                    "forward-project this phantom (shepp-logan)");

  auto* solve = app.add_subcommand("solve", "solve a stored system");
  std::string matrix_path, rhs_path, mode = "direct", method = "dense";
  std::string out_path, truth_path;
  double tol = 1e-10, relaxation = 1.0, sym_tol = 1e-12;
  int max_iters = 2000;
  solve->add_option("--matrix", matrix_path, "Matrix Market file")->required();
  solve->add_option("--rhs", rhs_path, "right-hand side csv")->required();
  solve->add_option("--mode", mode, "direct|split");
  solve->add_option("--method", method, "dense|cgls|sart");
  solve->add_option("--tol", tol, "relative residual tolerance");
  solve->add_option("--max-iters", max_iters, "iteration cap");
  solve->add_option("--relaxation", relaxation, "sart relaxation in (0,2]");
  solve->add_option("--sym-tol", sym_tol, "symmetry tolerance for split mode");
  solve->add_option("--out", out_path, "solution csv output");
  solve->add_option("--truth", truth_path, "reference solution csv");

  auto* bench = app.add_subcommand("bench", "direct vs split benchmark");
  std::string sizes = "32,64", modes = "direct,split", bench_out;
  int reps = 5, bench_iters = 3000;
  double bench_tol = 1e-10;
  std::int64_t dense_cap = 50'000'000;
  bench->add_option("--sizes", sizes, "comma-separated grid sizes");
  bench->add_option("--modes", modes, "comma-separated: direct,split");
  bench->add_option("--reps", reps, "repetitions (min wall time is kept)");
  bench->add_option("--tol", bench_tol, "iterative tolerance");
  bench->add_option("--max-iters", bench_iters, "iterative cap");
  bench->add_option("--dense-cap", dense_cap,
                    "max rows*cols for the dense path");
  bench->add_option("--out", bench_out, "report path (.csv or .json)");

  auto* recon = app.add_subcommand("recon", "end-to-end phantom reconstruction");
  std::string recon_config, recon_image;
  double recon_tol = 1e-10;
  int recon_iters = 5000;
  std::int64_t recon_cap = 50'000'000;
  recon->add_option("--config", recon_config, "scan configuration file")
      ->required();
  recon->add_option("--out-image", recon_image, "PGM output path");
  recon->add_option("--tol", recon_tol, "iterative tolerance");
  recon->add_option("--max-iters", recon_iters, "iterative cap");
  recon->add_option("--dense-cap", recon_cap,
                    "max rows*cols for the dense path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (example1->parsed()) return run_example1(flags, perturb);
    if (build->parsed()) {
      return run_build(flags, config_path, out_matrix, out_rhs, phantom_name);
    }
    if (solve->parsed()) {
      return run_solve(flags, matrix_path, rhs_path, mode, method, tol,
                       max_iters, relaxation, sym_tol, out_path, truth_path);
    }
    if (bench->parsed()) {
      return run_bench(flags, sizes, modes, reps, bench_tol, bench_iters,
                       bench_out, dense_cap);
    }
    if (recon->parsed()) {
      return run_recon(flags, recon_config, recon_image, recon_tol,
                       recon_iters, recon_cap);
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCheckFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return kExitCheckFailure;
  }
  return kExitUsage;
}
