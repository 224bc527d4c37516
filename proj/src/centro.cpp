#include "symsplit/centro.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace symsplit {

namespace {

constexpr std::int64_t kDenseDiagnosticCap = 50'000'000;

DenseStorage dense_checked(const Matrix& a, const char* op) {
  const std::int64_t size =
      static_cast<std::int64_t>(a.rows()) * static_cast<std::int64_t>(a.cols());
  if (size > kDenseDiagnosticCap) {
    std::ostringstream msg;
    msg << op << ": matrix too large to densify (" << a.rows() << "x"
        << a.cols() << ")";
    throw Error(msg.str());
  }
  return a.to_dense();
}

void require_symmetric(const Matrix& a, double tol, const char* op) {
  const SymmetryReport rep = verify_symmetry(a, tol);
  if (!rep.holds) {
    std::ostringstream msg;
    msg << op << ": matrix is not centrosymmetric";
    if (rep.status == SymmetryStatus::odd_row_count) {
      msg << " (odd row count)";
    } else if (rep.status == SymmetryStatus::odd_col_count) {
      msg << " (odd column count)";
    } else {
      msg << " (max violation " << rep.max_violation << " at ("
          << rep.worst_row << "," << rep.worst_col << "), tol " << tol << ")";
    }
    throw SymmetryError(msg.str(), rep);
  }
}

}  // namespace

SymmetryReport verify_symmetry(const Matrix& a, double tol) {
  if (tol < 0) throw Error("verify_symmetry: tol must be non-negative");
  SymmetryReport rep;
  const Index m = a.rows(), n = a.cols();
  if (m % 2 != 0) {
    rep.status = SymmetryStatus::odd_row_count;
  } else if (n % 2 != 0) {
    rep.status = SymmetryStatus::odd_col_count;
  }
  rep.max_violation = 0.0;
  a.for_each([&](Index i, Index j, double v) {
    const double d = std::abs(v - a.coeff(mirror(i, m), mirror(j, n)));
    if (d > rep.max_violation) {
      rep.max_violation = d;
      rep.worst_row = i + 1;
      rep.worst_col = j + 1;
    }
  });
  rep.holds = rep.status == SymmetryStatus::ok && rep.max_violation <= tol;
  return rep;
}

Matrix symmetrize(const Matrix& a) {
  const Index m = a.rows(), n = a.cols();
  if (a.is_sparse()) {
    std::vector<Triplet> ts;
    ts.reserve(static_cast<std::size_t>(2 * a.nonzeros()));
    a.for_each([&](Index i, Index j, double v) {
      ts.emplace_back(i, j, 0.5 * v);
      ts.emplace_back(mirror(i, m), mirror(j, n), 0.5 * v);
    });
    return Matrix::from_triplets(m, n, ts);
  }
  const DenseStorage& d = a.dense();
  DenseStorage out(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) {
      out(i, j) = 0.5 * d(i, j) + 0.5 * d(mirror(i, m), mirror(j, n));
    }
  }
  return Matrix(std::move(out));
}

std::pair<Vector, Vector> split_rhs(const Vector& p) {
  const Index m = p.size();
  if (m % 2 != 0) throw Error("split_rhs: vector length must be even");
  const Index mh = m / 2;
  Vector p1(mh), p2(mh);
  for (Index i = 0; i < mh; ++i) {
    p1[i] = p[i] - p[mirror(i, m)];
    p2[i] = p[i] + p[mirror(i, m)];
  }
  return {std::move(p1), std::move(p2)};
}

namespace detail {

std::pair<Matrix, Matrix> split_matrix(const Matrix& a) {
  const Index m = a.rows(), n = a.cols();
  if (m % 2 != 0 || n % 2 != 0) {
    throw Error("split_matrix: dimensions must be even");
  }
  const Index mh = m / 2, nh = n / 2;
  if (a.is_sparse()) {
    std::vector<Triplet> t1, t2;
    t1.reserve(static_cast<std::size_t>(a.nonzeros()));
    t2.reserve(static_cast<std::size_t>(a.nonzeros()));
    a.for_each([&](Index i, Index j, double v) {
      const Index bi = i < mh ? i : mirror(i, m);
      const Index bj = j < nh ? j : mirror(j, n);
      const double h = 0.5 * v;
      // Entries in the top-left/bottom-right quadrants feed the first term
      // of both halves; the other two quadrants feed the mirror-row term,
      // which enters a1 with a minus sign.
      const bool first_term = (i < mh) == (j < nh);
      t1.emplace_back(bi, bj, first_term ? h : -h);
      t2.emplace_back(bi, bj, h);
    });
    SparseStorage s1(mh, nh), s2(mh, nh);
    s1.setFromTriplets(t1.begin(), t1.end());
    s2.setFromTriplets(t2.begin(), t2.end());
    s1.prune([](Index, Index, double v) { return v != 0.0; });
    s2.prune([](Index, Index, double v) { return v != 0.0; });
    return {Matrix(std::move(s1)), Matrix(std::move(s2))};
  }
  const DenseStorage& d = a.dense();
  DenseStorage a1(mh, nh), a2(mh, nh);
  for (Index j = 0; j < nh; ++j) {
    for (Index i = 0; i < mh; ++i) {
      a1(i, j) = d(i, j) - d(mirror(i, m), j);
      a2(i, j) = d(i, j) + d(mirror(i, m), j);
    }
  }
  return {Matrix(std::move(a1)), Matrix(std::move(a2))};
}

}  // namespace detail

SplitSystem split_system(const CentroSystem& sys) {
  if (sys.p.size() != sys.a.rows()) {
    throw Error("split_system: right-hand side length does not match rows");
  }
  require_symmetric(sys.a, sys.symmetry_tol, "split_system");
  auto [a1, a2] = detail::split_matrix(sys.a);
  auto [p1, p2] = split_rhs(sys.p);
  SplitSystem out{std::move(a1), std::move(p1), std::move(a2), std::move(p2)};
  out.parent_fill = sys.a.fill_ratio();
  out.fill1 = out.a1.fill_ratio();
  out.fill2 = out.a2.fill_ratio();
  return out;
}

SolutionPair decompose_solution(const Vector& f) {
  const Index n = f.size();
  if (n % 2 != 0) throw Error("decompose_solution: vector length must be even");
  const Index nh = n / 2;
  SolutionPair pair{Vector(nh), Vector(nh)};
  for (Index j = 0; j < nh; ++j) {
    pair.f1[j] = f[j] - f[mirror(j, n)];
    pair.f2[j] = f[j] + f[mirror(j, n)];
  }
  return pair;
}

Vector recombine_solution(const SolutionPair& pair) {
  if (pair.f1.size() != pair.f2.size()) {
    throw Error("recombine_solution: component lengths differ");
  }
  if (!pair.f1.allFinite() || !pair.f2.allFinite()) {
    throw Error("recombine_solution: non-finite component");
  }
  const Index nh = pair.f1.size();
  const Index n = 2 * nh;
  Vector f(n);
  for (Index j = 0; j < nh; ++j) {
    f[j] = 0.5 * (pair.f2[j] + pair.f1[j]);
    f[mirror(j, n)] = 0.5 * (pair.f2[j] - pair.f1[j]);
  }
  return f;
}

Matrix reconstruct_matrix(const Matrix& a1, const Matrix& a2) {
  if (a1.rows() != a2.rows() || a1.cols() != a2.cols()) {
    throw Error("reconstruct_matrix: halves have different shapes");
  }
  const Index mh = a1.rows(), nh = a1.cols();
  const Index m = 2 * mh, n = 2 * nh;
  if (a1.is_sparse() || a2.is_sparse()) {
    std::vector<Triplet> ts;
    ts.reserve(static_cast<std::size_t>(2 * (a1.nonzeros() + a2.nonzeros())));
    const auto scatter = [&](Index i, Index j, double tl, double bl) {
      ts.emplace_back(i, j, tl);
      ts.emplace_back(mirror(i, m), mirror(j, n), tl);
      ts.emplace_back(mirror(i, m), j, bl);
      ts.emplace_back(i, mirror(j, n), bl);
    };
    a1.for_each([&](Index i, Index j, double d) {
      scatter(i, j, 0.5 * d, -0.5 * d);
    });
    a2.for_each([&](Index i, Index j, double s) {
      scatter(i, j, 0.5 * s, 0.5 * s);
    });
    SparseStorage out(m, n);
    out.setFromTriplets(ts.begin(), ts.end());
    out.prune([](Index, Index, double v) { return v != 0.0; });
    return Matrix(std::move(out));
  }
  const DenseStorage& d1 = a1.dense();
  const DenseStorage& d2 = a2.dense();
  DenseStorage out(m, n);
  for (Index j = 0; j < nh; ++j) {
    for (Index i = 0; i < mh; ++i) {
      const double tl = 0.5 * (d2(i, j) + d1(i, j));
      const double bl = 0.5 * (d2(i, j) - d1(i, j));
      out(i, j) = tl;
      out(mirror(i, m), mirror(j, n)) = tl;
      out(mirror(i, m), j) = bl;
      out(i, mirror(j, n)) = bl;
    }
  }
  return Matrix(std::move(out));
}

Matrix reconstruct_matrix(const SplitSystem& split) {
  return reconstruct_matrix(split.a1, split.a2);
}

DetIdentityReport check_det_identity(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) throw Error("check_det_identity: matrix not square");
  require_symmetric(a, tol, "check_det_identity");
  const DenseStorage d = dense_checked(a, "check_det_identity");
  auto [a1, a2] = detail::split_matrix(a);
  DetIdentityReport rep;
  rep.det_a = Eigen::PartialPivLU<DenseStorage>(d).determinant();
  rep.det_a1 = Eigen::PartialPivLU<DenseStorage>(a1.to_dense()).determinant();
  rep.det_a2 = Eigen::PartialPivLU<DenseStorage>(a2.to_dense()).determinant();
  rep.rel_err = std::abs(rep.det_a - rep.det_a1 * rep.det_a2) /
                std::max(1.0, std::abs(rep.det_a));
  return rep;
}

GramReport gram_split_check(const Matrix& a, double tol, double sym_tol) {
  require_symmetric(a, tol, "gram_split_check");
  const DenseStorage d = dense_checked(a, "gram_split_check");
  const DenseStorage b = d.transpose() * d;
  auto [a1, a2] = detail::split_matrix(a);
  const DenseStorage g1 = a1.to_dense().transpose() * a1.to_dense();
  const DenseStorage g2 = a2.to_dense().transpose() * a2.to_dense();
  const Matrix bm{DenseStorage(b)};
  auto [b1, b2] = detail::split_matrix(bm);

  GramReport rep;
  rep.b_violation = verify_symmetry(bm, 0.0).max_violation;
  rep.b_symmetric = b.rows() % 2 == 0 && rep.b_violation <= sym_tol;
  rep.max_dev1 = (b1.to_dense() - g1).cwiseAbs().maxCoeff();
  rep.max_dev2 = (b2.to_dense() - g2).cwiseAbs().maxCoeff();
  return rep;
}

NormIdentityReport norm_identity(const SolutionPair& pair, const Vector& f) {
  NormIdentityReport rep;
  rep.lhs = f.squaredNorm();
  rep.rhs = 0.5 * pair.f1.squaredNorm() + 0.5 * pair.f2.squaredNorm();
  const double denom =
      std::max({rep.lhs, rep.rhs, std::numeric_limits<double>::min()});
  rep.rel_err = std::abs(rep.lhs - rep.rhs) / denom;
  return rep;
}

}  // namespace symsplit
