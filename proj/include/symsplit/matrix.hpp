#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace symsplit {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using DenseStorage = Eigen::MatrixXd;
using SparseStorage = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Base class of every exception thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 0-based mirror index: i <-> n-1-i.
inline constexpr Index mirror(Index i, Index n) { return n - 1 - i; }

/// Real matrix backed by either dense or sparse (compressed column)
/// storage. Stored values are always finite and sparse storage holds no
/// duplicate positions. Indices at this interface are 0-based; the 1-based
/// convention of reports and file formats is applied at those boundaries.
class Matrix {
 public:
  Matrix() : storage_(DenseStorage(0, 0)) {}
  explicit Matrix(DenseStorage dense);
  explicit Matrix(SparseStorage sparse);

  /// Builds a sparse matrix; duplicate (i,j) triplets are summed.
  static Matrix from_triplets(Index rows, Index cols,
                              const std::vector<Triplet>& triplets);

  Index rows() const;
  Index cols() const;
  bool is_sparse() const { return std::holds_alternative<SparseStorage>(storage_); }

  /// Count of stored nonzero values (dense storage counts values != 0).
  std::int64_t nonzeros() const;
  /// nonzeros() / (rows*cols); 0 for an empty matrix.
  double fill_ratio() const;

  double coeff(Index i, Index j) const;

  DenseStorage to_dense() const;
  const DenseStorage& dense() const;    // throws unless dense
  const SparseStorage& sparse() const;  // throws unless sparse

  Vector apply(const Vector& x) const;            // A*x
  Vector apply_transpose(const Vector& y) const;  // A^T*y

  /// Visits every stored entry as f(row, col, value). Dense storage visits
  /// all positions column by column; sparse visits compressed order.
  template <class F>
  void for_each(F&& f) const {
    if (is_sparse()) {
      const auto& s = std::get<SparseStorage>(storage_);
      for (Index k = 0; k < s.outerSize(); ++k) {
        for (SparseStorage::InnerIterator it(s, k); it; ++it) {
          f(it.row(), it.col(), it.value());
        }
      }
    } else {
      const auto& d = std::get<DenseStorage>(storage_);
      for (Index j = 0; j < d.cols(); ++j) {
        for (Index i = 0; i < d.rows(); ++i) {
          f(i, j, d(i, j));
        }
      }
    }
  }

 private:
  void check_finite() const;

  std::variant<DenseStorage, SparseStorage> storage_;
};

}  // namespace symsplit
