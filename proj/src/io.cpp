#include "symsplit/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace symsplit {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for reading: " + path, path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path, path);
  return out;
}

void flush_or_throw(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path, path);
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

double parse_double(const std::string& token, const std::string& path,
                    long line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw IoError("line " + std::to_string(line) + ": not a number: '" +
                      token + "' in " + path,
                  path, line);
  }
  if (used != token.size()) {
    throw IoError("line " + std::to_string(line) + ": trailing content in '" +
                      token + "' in " + path,
                  path, line);
  }
  return v;
}

long parse_index(const std::string& token, const std::string& path,
                 long line) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size()) {
    throw IoError("line " + std::to_string(line) + ": not an integer index: '" +
                      token + "' in " + path,
                  path, line);
  }
  return v;
}

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Matrix read_matrix_market(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  long line_no = 0;

  if (!std::getline(in, line)) {
    throw IoError("empty Matrix Market file: " + path, path, 1);
  }
  ++line_no;
  {
    std::istringstream header(line);
    std::string banner, object, fmt, field, symmetry;
    header >> banner >> object >> fmt >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lowercase(object) != "matrix" ||
        lowercase(fmt) != "coordinate" || lowercase(field) != "real" ||
        lowercase(symmetry) != "general") {
      throw IoError(
          "line 1: expected '%%MatrixMarket matrix coordinate real general' in " +
              path,
          path, 1);
    }
  }

  long rows = -1, cols = -1, declared_nnz = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    std::istringstream sizes(line);
    if (!(sizes >> rows >> cols >> declared_nnz)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw IoError("line " + std::to_string(line_no) +
                        ": malformed size line in " + path,
                    path, line_no);
    }
    break;
  }
  if (rows < 0 || cols < 0 || declared_nnz < 0) {
    throw IoError("missing size line in " + path, path, line_no);
  }

  struct Entry {
    long i, j;
    double v;
    long line;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(declared_nnz));
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[line.find_first_not_of(" \t")] == '%') continue;
    std::istringstream fields(line);
    std::string si, sj, sv;
    if (!(fields >> si >> sj >> sv)) {
      throw IoError("line " + std::to_string(line_no) +
                        ": malformed entry in " + path,
                    path, line_no);
    }
    Entry e;
    e.i = parse_index(si, path, line_no);
    e.j = parse_index(sj, path, line_no);
    e.v = parse_double(sv, path, line_no);
    e.line = line_no;
    if (e.i < 1 || e.i > rows || e.j < 1 || e.j > cols) {
      throw IoError("line " + std::to_string(line_no) + ": index (" +
                        std::to_string(e.i) + "," + std::to_string(e.j) +
                        ") out of range for " + std::to_string(rows) + "x" +
                        std::to_string(cols) + " in " + path,
                    path, line_no);
    }
    if (!std::isfinite(e.v)) {
      throw IoError("line " + std::to_string(line_no) +
                        ": non-finite value in " + path,
                    path, line_no);
    }
    entries.push_back(e);
  }
  if (static_cast<long>(entries.size()) != declared_nnz) {
    throw IoError("entry count " + std::to_string(entries.size()) +
                      " does not match declared " +
                      std::to_string(declared_nnz) + " in " + path,
                  path, line_no);
  }

  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (std::size_t k = 1; k < entries.size(); ++k) {
    if (entries[k].i == entries[k - 1].i && entries[k].j == entries[k - 1].j) {
      throw IoError("line " + std::to_string(entries[k].line) +
                        ": duplicate entry (" + std::to_string(entries[k].i) +
                        "," + std::to_string(entries[k].j) + ") in " + path,
                    path, entries[k].line);
    }
  }

  std::vector<Triplet> triplets;
  triplets.reserve(entries.size());
  for (const Entry& e : entries) {
    triplets.emplace_back(static_cast<Index>(e.i - 1),
                          static_cast<Index>(e.j - 1), e.v);
  }
  return Matrix::from_triplets(static_cast<Index>(rows),
                               static_cast<Index>(cols), triplets);
}

void write_matrix_market(const Matrix& a, const std::string& path) {
  struct Entry {
    Index i, j;
    double v;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(a.nonzeros()));
  a.for_each([&](Index i, Index j, double v) {
    if (v != 0.0) entries.push_back({i, j, v});
  });
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    return x.i != y.i ? x.i < y.i : x.j < y.j;
  });

  std::ofstream out = open_output(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << " " << a.cols() << " " << entries.size() << "\n";
  for (const Entry& e : entries) {
    out << e.i + 1 << " " << e.j + 1 << " " << format_full(e.v) << "\n";
  }
  flush_or_throw(out, path);
}

Vector read_vector_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<double> values;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (line.empty()) continue;
    values.push_back(parse_double(line, path, line_no));
  }
  Vector v(static_cast<Index>(values.size()));
  for (std::size_t k = 0; k < values.size(); ++k) {
    v[static_cast<Index>(k)] = values[k];
  }
  return v;
}

void write_vector_csv(const Vector& v, const std::string& path) {
  std::ofstream out = open_output(path);
  for (Index i = 0; i < v.size(); ++i) {
    out << format_full(v[i]) << "\n";
  }
  flush_or_throw(out, path);
}

void write_pgm(const Vector& values, const GridSpec& grid,
               const std::string& path) {
  grid.validate();
  if (values.size() != grid.cell_count()) {
    throw Error("write_pgm: image length does not match grid");
  }
  if (values.size() == 0) throw Error("write_pgm: empty image");
  if (!values.allFinite()) throw Error("write_pgm: non-finite image");

  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;

  std::ofstream out = open_output(path);
  out << "P5\n" << grid.n_x << " " << grid.n_y << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(grid.n_x));
  for (int r = 1; r <= grid.n_y; ++r) {
    for (int c = 1; c <= grid.n_x; ++c) {
      const double v = values[snake_index(c, r, grid) - 1];
      const double g = (v - lo) * scale;
      row[static_cast<std::size_t>(c - 1)] =
          static_cast<unsigned char>(std::clamp(std::lround(g), 0L, 255L));
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
  flush_or_throw(out, path);
}

namespace {

std::string csv_field(const std::optional<double>& v) {
  return v ? format_full(*v) : std::string();
}

}  // namespace

void write_bench_report(const std::vector<BenchRecord>& records,
                        const std::string& path, ReportFormat format) {
  std::ofstream out = open_output(path);
  if (format == ReportFormat::csv) {
    out << "label,rows,cols,nnz,method,mode,wall_time_seconds,residual_norm,"
           "rel_error,reps\n";
    for (const BenchRecord& r : records) {
      out << r.label << "," << r.rows << "," << r.cols << "," << r.nnz << ","
          << method_name(r.method) << "," << mode_name(r.mode) << ","
          << format_full(r.wall_time_seconds) << ","
          << format_full(r.residual_norm) << "," << csv_field(r.rel_error)
          << "," << r.reps << "\n";
    }
  } else {
    nlohmann::json doc = nlohmann::json::array();
    for (const BenchRecord& r : records) {
      nlohmann::json rec{
          {"label", r.label},
          {"rows", r.rows},
          {"cols", r.cols},
          {"nnz", r.nnz},
          {"method", method_name(r.method)},
          {"mode", mode_name(r.mode)},
          {"wall_time_seconds", r.wall_time_seconds},
          {"residual_norm", r.residual_norm},
          {"rel_error", nullptr},
          {"reps", r.reps},
      };
      if (r.rel_error) rec["rel_error"] = *r.rel_error;
      doc.push_back(std::move(rec));
    }
    out << doc.dump(2) << "\n";
  }
  flush_or_throw(out, path);
}

}  // namespace symsplit
