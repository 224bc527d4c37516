#include "symsplit/matrix.hpp"

namespace symsplit {

Matrix::Matrix(DenseStorage dense) : storage_(std::move(dense)) { check_finite(); }

Matrix::Matrix(SparseStorage sparse) : storage_(std::move(sparse)) {
  std::get<SparseStorage>(storage_).makeCompressed();
  check_finite();
}

Matrix Matrix::from_triplets(Index rows, Index cols,
                             const std::vector<Triplet>& triplets) {
  if (rows < 0 || cols < 0) throw Error("matrix shape must be non-negative");
  SparseStorage s(rows, cols);
  s.setFromTriplets(triplets.begin(), triplets.end());
  return Matrix(std::move(s));
}

Index Matrix::rows() const {
  return std::visit([](const auto& m) { return m.rows(); }, storage_);
}

Index Matrix::cols() const {
  return std::visit([](const auto& m) { return m.cols(); }, storage_);
}

std::int64_t Matrix::nonzeros() const {
  if (is_sparse()) {
    std::int64_t n = 0;
    for_each([&](Index, Index, double v) {
      if (v != 0.0) ++n;
    });
    return n;
  }
  return (dense().array() != 0.0).count();
}

double Matrix::fill_ratio() const {
  const double size = static_cast<double>(rows()) * static_cast<double>(cols());
  return size > 0 ? static_cast<double>(nonzeros()) / size : 0.0;
}

double Matrix::coeff(Index i, Index j) const {
  if (i < 0 || i >= rows() || j < 0 || j >= cols()) {
    throw Error("matrix index out of range");
  }
  if (is_sparse()) return std::get<SparseStorage>(storage_).coeff(i, j);
  return std::get<DenseStorage>(storage_)(i, j);
}

DenseStorage Matrix::to_dense() const {
  if (is_sparse()) return DenseStorage(std::get<SparseStorage>(storage_));
  return std::get<DenseStorage>(storage_);
}

const DenseStorage& Matrix::dense() const {
  if (is_sparse()) throw Error("matrix is sparse, dense storage requested");
  return std::get<DenseStorage>(storage_);
}

const SparseStorage& Matrix::sparse() const {
  if (!is_sparse()) throw Error("matrix is dense, sparse storage requested");
  return std::get<SparseStorage>(storage_);
}

Vector Matrix::apply(const Vector& x) const {
  if (x.size() != cols()) throw Error("matrix-vector size mismatch");
  return std::visit([&](const auto& m) -> Vector { return m * x; }, storage_);
}

Vector Matrix::apply_transpose(const Vector& y) const {
  if (y.size() != rows()) throw Error("matrix-vector size mismatch");
  return std::visit([&](const auto& m) -> Vector { return m.transpose() * y; },
                    storage_);
}

void Matrix::check_finite() const {
  bool ok = true;
  for_each([&](Index, Index, double v) {
    if (!std::isfinite(v)) ok = false;
  });
  if (!ok) throw Error("matrix contains non-finite values");
}

}  // namespace symsplit
