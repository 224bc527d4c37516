#pragma once

#include "symsplit/matrix.hpp"

namespace symsplit {

// A centrosymmetric matrix satisfies a(i,j) = a(m-i+1, n-j+1) in 1-based
// indexing: it is invariant under simultaneous row and column reversal.
// Such an m x n system (m, n even) decomposes into two independent
// (m/2) x (n/2) systems carrying the antisymmetric and symmetric solution
// components; solving both and recombining reproduces the full solution,
// including the minimum-norm least-squares one.

enum class SymmetryStatus { ok, odd_row_count, odd_col_count };

struct SymmetryReport {
  bool holds = false;
  double max_violation = 0.0;
  Index worst_row = 1;  // 1-based
  Index worst_col = 1;  // 1-based
  SymmetryStatus status = SymmetryStatus::ok;
};

/// Linear system a*f = p whose matrix claims centrosymmetry up to
/// symmetry_tol. The claim is not checked on construction; verify_symmetry
/// checks it and split_system refuses to run when it fails.
struct CentroSystem {
  Matrix a;
  Vector p;
  double symmetry_tol = 1e-12;
};

/// The pair of quarter-size systems produced by split_system. a1 carries
/// mirror-row differences (antisymmetric part), a2 mirror-row sums
/// (symmetric part). Fill ratios of the parent and both halves are kept
/// for dispersion reporting; no claim is attached to them.
struct SplitSystem {
  Matrix a1;
  Vector p1;
  Matrix a2;
  Vector p2;
  double parent_fill = 0.0;
  double fill1 = 0.0;
  double fill2 = 0.0;
};

/// Antisymmetric/symmetric solution components, each of length n/2.
struct SolutionPair {
  Vector f1;
  Vector f2;
};

struct DetIdentityReport {
  double det_a = 0.0;
  double det_a1 = 0.0;
  double det_a2 = 0.0;
  double rel_err = 0.0;
};

struct GramReport {
  bool b_symmetric = false;
  double b_violation = 0.0;  // worst centrosymmetry violation of B = A^T A
  double max_dev1 = 0.0;     // max |split(B).a1 - a1^T a1|
  double max_dev2 = 0.0;
};

struct NormIdentityReport {
  double lhs = 0.0;  // |f|^2
  double rhs = 0.0;  // (|f1|^2 + |f2|^2) / 2
  double rel_err = 0.0;
};

class SymmetryError : public Error {
 public:
  SymmetryError(const std::string& what, SymmetryReport r)
      : Error(what), report(r) {}
  SymmetryReport report;
};

/// Checks a(i,j) = a(m-i+1, n-j+1) over all positions. holds is true only
/// when both dimensions are even and the worst deviation is <= tol; odd
/// dimensions are reported through status. worst_row/worst_col locate an
/// arg-max deviation, 1-based.
SymmetryReport verify_symmetry(const Matrix& a, double tol);

/// Averages every mirror pair, returning an exactly centrosymmetric matrix.
/// Data repair is deliberately explicit: split_system never does this.
Matrix symmetrize(const Matrix& a);

/// p1_i = p_i - p_{m-i+1}, p2_i = p_i + p_{m-i+1} for i = 1..m/2.
std::pair<Vector, Vector> split_rhs(const Vector& p);

/// Splits a verified centrosymmetric system into its two quarter-size
/// systems: a1(i,j) = a(i,j) - a(m-i+1,j), a2(i,j) = a(i,j) + a(m-i+1,j).
/// Sparse inputs are processed in one pass over stored entries, each entry
/// folded half-weight into its mirror bucket; exact zeros produced by
/// cancellation in a1 are dropped. Throws SymmetryError when the symmetry
/// claim fails at sys.symmetry_tol.
SplitSystem split_system(const CentroSystem& sys);

/// f1_j = f_j - f_{n-j+1}, f2_j = f_j + f_{n-j+1}; exact inverse of
/// recombine_solution.
SolutionPair decompose_solution(const Vector& f);

/// f_j = (f2_j + f1_j)/2, f_{n-j+1} = (f2_j - f1_j)/2 for j = 1..n/2.
Vector recombine_solution(const SolutionPair& pair);

/// Inverse of the split formulas; the remaining columns are filled through
/// the centrosymmetry relation. Used as a round-trip oracle and by the
/// random system generators.
Matrix reconstruct_matrix(const Matrix& a1, const Matrix& a2);
Matrix reconstruct_matrix(const SplitSystem& split);

/// det(a) vs det(a1)*det(a2) through pivoted LU factorizations;
/// rel_err = |det(a) - det(a1)det(a2)| / max(1, |det(a)|).
DetIdentityReport check_det_identity(const Matrix& a, double tol = 1e-12);

/// Forms B = A^T A, checks that B is centrosymmetric and that the halves of
/// split(B) equal a1^T a1 and a2^T a2. sym_tol bounds b_symmetric.
GramReport gram_split_check(const Matrix& a, double tol = 1e-12,
                            double sym_tol = 1e-10);

/// |f|^2 against (|f1|^2 + |f2|^2)/2 for f = recombine(pair).
NormIdentityReport norm_identity(const SolutionPair& pair, const Vector& f);

namespace detail {
/// Split without any symmetry check; callers own the precondition.
std::pair<Matrix, Matrix> split_matrix(const Matrix& a);
}  // namespace detail

}  // namespace symsplit
