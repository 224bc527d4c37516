#include "symsplit/solvers.hpp"

#include <Eigen/QR>

#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

namespace symsplit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int effective_parallelism(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void check_system(const Matrix& a, const Vector& p, const char* op) {
  if (p.size() != a.rows()) {
    std::ostringstream msg;
    msg << op << ": rhs length " << p.size() << " does not match rows "
        << a.rows();
    throw Error(msg.str());
  }
  if (!p.allFinite()) throw Error(std::string(op) + ": non-finite rhs");
}

SolveReport run_method(const Matrix& a, const Vector& p,
                       const SolveOptions& opts) {
  switch (opts.method) {
    case Method::dense_minnorm: {
      SolveReport rep;
      rep.method = Method::dense_minnorm;
      const auto t0 = Clock::now();
      rep.f = pseudo_solve_dense(a, p, opts.dense_cap);
      rep.wall_time_seconds = seconds_since(t0);
      rep.residual_norm = (a.apply(rep.f) - p).norm();
      rep.solution_norm = rep.f.norm();
      return rep;
    }
    case Method::cgls:
      return cgls_solve(a, p, opts);
    case Method::sart:
      return sart_solve(a, p, opts);
  }
  throw Error("unknown solve method");
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::dense_minnorm: return "dense";
    case Method::cgls: return "cgls";
    case Method::sart: return "sart";
  }
  return "unknown";
}

std::string mode_name(Mode m) {
  return m == Mode::direct ? "direct" : "split";
}

Method method_from_name(const std::string& name) {
  if (name == "dense" || name == "dense_minnorm") return Method::dense_minnorm;
  if (name == "cgls") return Method::cgls;
  if (name == "sart") return Method::sart;
  throw Error("unknown method name: " + name);
}

Vector pseudo_solve_dense(const Matrix& a, const Vector& p,
                          std::int64_t dense_cap) {
  check_system(a, p, "pseudo_solve_dense");
  const std::int64_t size =
      static_cast<std::int64_t>(a.rows()) * static_cast<std::int64_t>(a.cols());
  if (size > dense_cap) {
    std::ostringstream msg;
    msg << "pseudo_solve_dense: " << a.rows() << "x" << a.cols()
        << " exceeds the dense cap of " << dense_cap << " entries";
    throw Error(msg.str());
  }
  Eigen::CompleteOrthogonalDecomposition<DenseStorage> cod;
  cod.setThreshold(static_cast<double>(std::max(a.rows(), a.cols())) *
                   std::numeric_limits<double>::epsilon());
  cod.compute(a.to_dense());
  return cod.solve(p);
}

SolveReport cgls_solve(const Matrix& a, const Vector& p,
                       const SolveOptions& opts) {
  check_system(a, p, "cgls_solve");
  if (opts.tol <= 0) throw Error("cgls_solve: tol must be positive");
  if (opts.max_iters < 1) throw Error("cgls_solve: max_iters must be >= 1");

  SolveReport rep;
  rep.method = Method::cgls;
  const auto t0 = Clock::now();

  Vector x = Vector::Zero(a.cols());
  Vector r = p;
  Vector s = a.apply_transpose(r);
  Vector d = s;
  double gamma = s.squaredNorm();
  const double stop = opts.tol * std::sqrt(gamma);

  int it = 0;
  while (it < opts.max_iters && std::sqrt(gamma) > stop) {
    const Vector q = a.apply(d);
    const double qq = q.squaredNorm();
    if (qq == 0.0) break;  // d in the null space; cannot happen off rounding
    const double alpha = gamma / qq;
    if (!std::isfinite(alpha)) {
      throw Error("cgls_solve: diverged (non-finite step at iteration " +
                  std::to_string(it + 1) + ")");
    }
    x += alpha * d;
    r -= alpha * q;
    s = a.apply_transpose(r);
    const double gamma_new = s.squaredNorm();
    if (!std::isfinite(gamma_new)) {
      throw Error("cgls_solve: diverged (non-finite residual at iteration " +
                  std::to_string(it + 1) + ")");
    }
    d = s + (gamma_new / gamma) * d;
    gamma = gamma_new;
    ++it;
    rep.residual_history.push_back(r.norm());
  }

  rep.f = std::move(x);
  rep.iterations = it;
  rep.wall_time_seconds = seconds_since(t0);
  rep.residual_norm = (a.apply(rep.f) - p).norm();
  rep.solution_norm = rep.f.norm();
  return rep;
}

SolveReport sart_solve(const Matrix& a, const Vector& p,
                       const SolveOptions& opts) {
  check_system(a, p, "sart_solve");
  if (opts.relaxation <= 0 || opts.relaxation > 2) {
    throw Error("sart_solve: relaxation must be in (0, 2]");
  }
  if (opts.max_iters < 1) throw Error("sart_solve: max_iters must be >= 1");

  const Index m = a.rows(), n = a.cols();
  Vector row_sums = Vector::Zero(m);
  Vector col_sums = Vector::Zero(n);
  a.for_each([&](Index i, Index j, double v) {
    row_sums[i] += std::abs(v);
    col_sums[j] += std::abs(v);
  });
  if (row_sums.maxCoeff() == 0.0) {
    throw Error("sart_solve: matrix has no nonzero rows");
  }
  Vector row_inv(m), col_inv(n);
  for (Index i = 0; i < m; ++i) row_inv[i] = row_sums[i] > 0 ? 1.0 / row_sums[i] : 0.0;
  for (Index j = 0; j < n; ++j) col_inv[j] = col_sums[j] > 0 ? 1.0 / col_sums[j] : 0.0;

  SolveReport rep;
  rep.method = Method::sart;
  const auto t0 = Clock::now();

  Vector x = Vector::Zero(n);
  const double p_norm = p.norm();
  int it = 0;
  double res = std::numeric_limits<double>::infinity();
  while (it < opts.max_iters) {
    const Vector r = p - a.apply(x);
    res = r.norm();
    rep.residual_history.push_back(res);
    if (res <= opts.tol * p_norm) break;
    const Vector weighted = row_inv.cwiseProduct(r);
    const Vector update = a.apply_transpose(weighted).cwiseProduct(col_inv);
    x += opts.relaxation * update;
    if (!x.allFinite()) {
      throw Error("sart_solve: diverged (non-finite iterate at iteration " +
                  std::to_string(it + 1) + ")");
    }
    ++it;
  }

  rep.f = std::move(x);
  rep.iterations = it;
  rep.wall_time_seconds = seconds_since(t0);
  rep.residual_norm = (a.apply(rep.f) - p).norm();
  rep.solution_norm = rep.f.norm();
  return rep;
}

SolveReport solve_direct(const CentroSystem& sys, const SolveOptions& opts) {
  SolveReport rep = run_method(sys.a, sys.p, opts);
  rep.mode = Mode::direct;
  return rep;
}

SolveReport solve_split(const CentroSystem& sys, const SolveOptions& opts) {
  const auto t_split0 = Clock::now();
  SplitSystem ss = split_system(sys);
  const double split_seconds = seconds_since(t_split0);

  const bool parallel = effective_parallelism(opts.parallelism) >= 2;

  SolveReport branch[2];
  std::exception_ptr errors[2] = {nullptr, nullptr};
  const auto run_branch = [&](int which) noexcept {
    try {
      const Matrix& a = which == 0 ? ss.a1 : ss.a2;
      const Vector& p = which == 0 ? ss.p1 : ss.p2;
      branch[which] = run_method(a, p, opts);
    } catch (...) {
      errors[which] = std::current_exception();
    }
  };

  if (parallel) {
    std::thread worker(run_branch, 0);
    run_branch(1);
    worker.join();
  } else {
    run_branch(0);
    run_branch(1);
  }

  if (errors[0] || errors[1]) {
    std::ostringstream msg;
    msg << "solve_split: branch failure:";
    for (int which = 0; which < 2; ++which) {
      if (!errors[which]) continue;
      try {
        std::rethrow_exception(errors[which]);
      } catch (const std::exception& e) {
        msg << " [system " << which + 1 << "] " << e.what();
      }
    }
    throw Error(msg.str());
  }

  const auto t_rec0 = Clock::now();
  Vector f = recombine_solution({branch[0].f, branch[1].f});
  const double recombine_seconds = seconds_since(t_rec0);

  SolveReport rep;
  rep.f = std::move(f);
  rep.method = opts.method;
  rep.mode = Mode::split;
  rep.iterations = std::max(branch[0].iterations, branch[1].iterations);
  rep.split_seconds = split_seconds;
  rep.recombine_seconds = recombine_seconds;
  rep.branch1_seconds = branch[0].wall_time_seconds;
  rep.branch2_seconds = branch[1].wall_time_seconds;
  const double branch_time =
      parallel ? std::max(branch[0].wall_time_seconds, branch[1].wall_time_seconds)
               : branch[0].wall_time_seconds + branch[1].wall_time_seconds;
  rep.wall_time_seconds = split_seconds + branch_time + recombine_seconds;
  rep.residual_norm = (sys.a.apply(rep.f) - sys.p).norm();
  rep.solution_norm = rep.f.norm();
  return rep;
}

}  // namespace symsplit
