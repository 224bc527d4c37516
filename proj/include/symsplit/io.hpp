#pragma once

#include "symsplit/geometry.hpp"
#include "symsplit/matrix.hpp"
#include "symsplit/solvers.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace symsplit {

class IoError : public Error {
 public:
  IoError(const std::string& what, std::string path, long line = 0)
      : Error(what), path(std::move(path)), line(line) {}
  std::string path;
  long line = 0;  // 1-based when relevant, 0 otherwise
};

/// Matrix Market coordinate format, real general, 1-based indices on disk.
/// Entries are written in canonical (row, column) order with 17 significant
/// digits, so re-serialization is byte-stable. Reading rejects malformed
/// headers, out-of-range indices and duplicate entries, reporting the line.
Matrix read_matrix_market(const std::string& path);
void write_matrix_market(const Matrix& a, const std::string& path);

/// One value per line, 17 significant digits; lossless round-trip.
Vector read_vector_csv(const std::string& path);
void write_vector_csv(const Vector& v, const std::string& path);

/// De-snakes the image to an n_y x n_x pixel grid (row 1 on top), rescales
/// min..max to 0..255 and writes binary PGM (P5). A constant image maps to
/// all zeros.
void write_pgm(const Vector& values, const GridSpec& grid,
               const std::string& path);

/// One benchmark record per (case, mode).
struct BenchRecord {
  std::string label;
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::int64_t nnz = 0;
  Method method = Method::dense_minnorm;
  Mode mode = Mode::direct;
  double wall_time_seconds = 0.0;
  double residual_norm = 0.0;
  std::optional<double> rel_error;  // vs ground truth when known
  int reps = 0;
};

enum class ReportFormat { csv, json };

/// Columns: label, rows, cols, nnz, method, mode, wall_time_seconds,
/// residual_norm, rel_error, reps. JSON carries the same fields per record.
void write_bench_report(const std::vector<BenchRecord>& records,
                        const std::string& path, ReportFormat format);

/// Formats a double with 17 significant digits (shortest lossless form is
/// not required; this round-trips exactly).
std::string format_full(double v);

}  // namespace symsplit
