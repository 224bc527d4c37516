#pragma once

#include "symsplit/centro.hpp"
#include "symsplit/matrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace symsplit {

enum class Method { dense_minnorm, cgls, sart };
enum class Mode { direct, split };

std::string method_name(Method m);
std::string mode_name(Mode m);
Method method_from_name(const std::string& name);

struct SolveOptions {
  Method method = Method::dense_minnorm;
  int max_iters = 200;
  double tol = 1e-10;        // relative residual stopping threshold
  double relaxation = 1.0;   // SART only, in (0, 2]
  bool deterministic = true; // reserved; every built-in method is deterministic
  int parallelism = 0;       // worker budget for split solves; 0 = all cores
  std::int64_t dense_cap = 50'000'000;  // rows*cols guard for densification
};

struct SolveReport {
  Vector f;
  double residual_norm = 0.0;  // |A f - p| against the system it solved
  double solution_norm = 0.0;
  int iterations = 0;
  double wall_time_seconds = 0.0;
  Method method = Method::dense_minnorm;
  Mode mode = Mode::direct;
  // Iterative methods record |A x_k - p| after every iteration.
  std::vector<double> residual_history;
  // Split-mode accounting: wall_time_seconds = split + recombine overhead
  // plus max(branch) when run concurrently, or the branch sum otherwise.
  double split_seconds = 0.0;
  double recombine_seconds = 0.0;
  double branch1_seconds = 0.0;
  double branch2_seconds = 0.0;
};

/// Minimum-L2-norm least-squares solution via a rank-revealing complete
/// orthogonal decomposition; rank threshold max(rows,cols) * machine eps
/// relative to the leading pivot. Refuses matrices above dense_cap.
Vector pseudo_solve_dense(const Matrix& a, const Vector& p,
                          std::int64_t dense_cap = 50'000'000);

/// Conjugate gradient on the normal equations, started from zero so the
/// iterates stay in the row space and converge to the minimum-norm
/// least-squares solution. Stops when |A^T(Af-p)| <= tol * |A^T p|.
SolveReport cgls_solve(const Matrix& a, const Vector& p,
                       const SolveOptions& opts);

/// Simultaneous algebraic reconstruction with relaxation, normalized by
/// absolute row and column sums; rows or columns with zero sum are skipped.
/// Stops when |Af-p| <= tol * |p|.
SolveReport sart_solve(const Matrix& a, const Vector& p,
                       const SolveOptions& opts);

/// Solves the full system with the chosen method. Wall time covers the
/// solve only.
SolveReport solve_direct(const CentroSystem& sys, const SolveOptions& opts);

/// Splits the system, solves both halves with the same method (concurrently
/// when the parallelism budget allows), and recombines. The result does not
/// depend on scheduling.
SolveReport solve_split(const CentroSystem& sys, const SolveOptions& opts);

}  // namespace symsplit
