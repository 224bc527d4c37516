// Python bindings for the centrosymmetric split toolkit.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symsplit/centro.hpp"
#include "symsplit/geometry.hpp"
#include "symsplit/io.hpp"
#include "symsplit/matrix.hpp"
#include "symsplit/phantom.hpp"
#include "symsplit/solvers.hpp"

namespace py = pybind11;
using namespace symsplit;

namespace {

Matrix matrix_from_triplets(Index rows, Index cols,
                            const Eigen::VectorXi& i, const Eigen::VectorXi& j,
                            const Vector& v) {
  if (i.size() != j.size() || i.size() != v.size()) {
    throw Error("from_triplets: index and value arrays differ in length");
  }
  std::vector<Triplet> ts;
  ts.reserve(static_cast<std::size_t>(i.size()));
  for (Index k = 0; k < i.size(); ++k) {
    ts.emplace_back(i[k], j[k], v[k]);
  }
  return Matrix::from_triplets(rows, cols, ts);
}

py::tuple matrix_triplets(const Matrix& a) {
  const auto n = static_cast<Index>(a.nonzeros());
  Eigen::VectorXi is(n), js(n);
  Vector vs(n);
  Index k = 0;
  a.for_each([&](Index i, Index j, double v) {
    if (v == 0.0) return;
    is[k] = static_cast<int>(i);
    js[k] = static_cast<int>(j);
    vs[k] = v;
    ++k;
  });
  return py::make_tuple(is, js, vs);
}

}  // namespace

PYBIND11_MODULE(symsplit, m) {
  m.doc() =
      "Centrosymmetric splitting of tomographic linear systems: verify the "
      "mirror symmetry, split into two quarter-size systems, solve both and "
      "recombine exact or minimum-norm solutions.";

  py::register_exception<Error>(m, "SymsplitError");

  py::class_<Matrix>(m, "Matrix")
      .def(py::init([](const DenseStorage& d) { return Matrix(d); }),
           py::arg("dense"))
      .def_static("from_triplets", &matrix_from_triplets, py::arg("rows"),
                  py::arg("cols"), py::arg("i"), py::arg("j"), py::arg("v"))
      .def_property_readonly("rows", &Matrix::rows)
      .def_property_readonly("cols", &Matrix::cols)
      .def_property_readonly("is_sparse", &Matrix::is_sparse)
      .def_property_readonly("nnz", &Matrix::nonzeros)
      .def_property_readonly("fill_ratio", &Matrix::fill_ratio)
      .def("to_dense", &Matrix::to_dense)
      .def("triplets", &matrix_triplets)
      .def("apply", &Matrix::apply, py::arg("x"))
      .def("apply_transpose", &Matrix::apply_transpose, py::arg("y"))
      .def("__repr__", [](const Matrix& a) {
        return "<symsplit.Matrix " + std::to_string(a.rows()) + "x" +
               std::to_string(a.cols()) + (a.is_sparse() ? " sparse" : " dense") +
               ">";
      });

  py::enum_<SymmetryStatus>(m, "SymmetryStatus")
      .value("ok", SymmetryStatus::ok)
      .value("odd_row_count", SymmetryStatus::odd_row_count)
      .value("odd_col_count", SymmetryStatus::odd_col_count);

  py::class_<SymmetryReport>(m, "SymmetryReport")
      .def_readonly("holds", &SymmetryReport::holds)
      .def_readonly("max_violation", &SymmetryReport::max_violation)
      .def_readonly("worst_row", &SymmetryReport::worst_row)
      .def_readonly("worst_col", &SymmetryReport::worst_col)
      .def_readonly("status", &SymmetryReport::status);

  py::class_<CentroSystem>(m, "CentroSystem")
      .def(py::init([](const Matrix& a, const Vector& p, double tol) {
             return CentroSystem{a, p, tol};
           }),
           py::arg("a"), py::arg("p"), py::arg("symmetry_tol") = 1e-12)
      .def_readwrite("a", &CentroSystem::a)
      .def_readwrite("p", &CentroSystem::p)
      .def_readwrite("symmetry_tol", &CentroSystem::symmetry_tol);

  py::class_<SplitSystem>(m, "SplitSystem")
      .def_readonly("a1", &SplitSystem::a1)
      .def_readonly("p1", &SplitSystem::p1)
      .def_readonly("a2", &SplitSystem::a2)
      .def_readonly("p2", &SplitSystem::p2)
      .def_readonly("parent_fill", &SplitSystem::parent_fill)
      .def_readonly("fill1", &SplitSystem::fill1)
      .def_readonly("fill2", &SplitSystem::fill2);

  py::class_<SolutionPair>(m, "SolutionPair")
      .def(py::init([](const Vector& f1, const Vector& f2) {
             return SolutionPair{f1, f2};
           }),
           py::arg("f1"), py::arg("f2"))
      .def_readwrite("f1", &SolutionPair::f1)
      .def_readwrite("f2", &SolutionPair::f2);

  py::class_<DetIdentityReport>(m, "DetIdentityReport")
      .def_readonly("det_a", &DetIdentityReport::det_a)
      .def_readonly("det_a1", &DetIdentityReport::det_a1)
      .def_readonly("det_a2", &DetIdentityReport::det_a2)
      .def_readonly("rel_err", &DetIdentityReport::rel_err);

  py::class_<GramReport>(m, "GramReport")
      .def_readonly("b_symmetric", &GramReport::b_symmetric)
      .def_readonly("b_violation", &GramReport::b_violation)
      .def_readonly("max_dev1", &GramReport::max_dev1)
      .def_readonly("max_dev2", &GramReport::max_dev2);

  py::class_<NormIdentityReport>(m, "NormIdentityReport")
      .def_readonly("lhs", &NormIdentityReport::lhs)
      .def_readonly("rhs", &NormIdentityReport::rhs)
      .def_readonly("rel_err", &NormIdentityReport::rel_err);

  m.def("verify_symmetry", &verify_symmetry, py::arg("a"), py::arg("tol"));
  m.def("symmetrize", &symmetrize, py::arg("a"));
  m.def("split_rhs", &split_rhs, py::arg("p"));
  m.def("split_system", &split_system, py::arg("system"));
  m.def("decompose_solution", &decompose_solution, py::arg("f"));
  m.def("recombine_solution", &recombine_solution, py::arg("pair"));
  m.def("reconstruct_matrix",
        py::overload_cast<const Matrix&, const Matrix&>(&reconstruct_matrix),
        py::arg("a1"), py::arg("a2"));
  m.def("reconstruct_split",
        py::overload_cast<const SplitSystem&>(&reconstruct_matrix),
        py::arg("split"));
  m.def("check_det_identity", &check_det_identity, py::arg("a"),
        py::arg("tol") = 1e-12);
  m.def("gram_split_check", &gram_split_check, py::arg("a"),
        py::arg("tol") = 1e-12, py::arg("sym_tol") = 1e-10);
  m.def("norm_identity", &norm_identity, py::arg("pair"), py::arg("f"));

  py::enum_<Method>(m, "Method")
      .value("dense_minnorm", Method::dense_minnorm)
      .value("cgls", Method::cgls)
      .value("sart", Method::sart);
  py::enum_<Mode>(m, "Mode")
      .value("direct", Mode::direct)
      .value("split", Mode::split);

  py::class_<SolveOptions>(m, "SolveOptions")
      .def(py::init<>())
      .def_readwrite("method", &SolveOptions::method)
      .def_readwrite("max_iters", &SolveOptions::max_iters)
      .def_readwrite("tol", &SolveOptions::tol)
      .def_readwrite("relaxation", &SolveOptions::relaxation)
      .def_readwrite("deterministic", &SolveOptions::deterministic)
      .def_readwrite("parallelism", &SolveOptions::parallelism)
      .def_readwrite("dense_cap", &SolveOptions::dense_cap);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("f", &SolveReport::f)
      .def_readonly("residual_norm", &SolveReport::residual_norm)
      .def_readonly("solution_norm", &SolveReport::solution_norm)
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("wall_time_seconds", &SolveReport::wall_time_seconds)
      .def_readonly("method", &SolveReport::method)
      .def_readonly("mode", &SolveReport::mode)
      .def_readonly("residual_history", &SolveReport::residual_history)
      .def_readonly("split_seconds", &SolveReport::split_seconds)
      .def_readonly("recombine_seconds", &SolveReport::recombine_seconds)
      .def_readonly("branch1_seconds", &SolveReport::branch1_seconds)
      .def_readonly("branch2_seconds", &SolveReport::branch2_seconds);

  m.def("pseudo_solve_dense", &pseudo_solve_dense, py::arg("a"), py::arg("p"),
        py::arg("dense_cap") = 50'000'000);
  m.def("cgls_solve", &cgls_solve, py::arg("a"), py::arg("p"),
        py::arg("options"));
  m.def("sart_solve", &sart_solve, py::arg("a"), py::arg("p"),
        py::arg("options"));
  m.def("solve_direct", &solve_direct, py::arg("system"), py::arg("options"));
  m.def("solve_split", &solve_split, py::arg("system"), py::arg("options"));

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_readwrite("n_x", &GridSpec::n_x)
      .def_readwrite("n_y", &GridSpec::n_y)
      .def_readwrite("voxel_size", &GridSpec::voxel_size)
      .def_readwrite("center_x", &GridSpec::center_x)
      .def_readwrite("y_bottom", &GridSpec::y_bottom)
      .def_property_readonly("cell_count", &GridSpec::cell_count)
      .def("cell_center", &GridSpec::cell_center, py::arg("c"), py::arg("r"));

  py::class_<ScanGeometry>(m, "ScanGeometry")
      .def(py::init<>())
      .def_readwrite("k", &ScanGeometry::k)
      .def_readwrite("gamma", &ScanGeometry::gamma)
      .def_readwrite("h_e", &ScanGeometry::h_e)
      .def_readwrite("h_m", &ScanGeometry::h_m)
      .def_readwrite("l_m", &ScanGeometry::l_m)
      .def_readwrite("n_p", &ScanGeometry::n_p)
      .def_readwrite("a_e", &ScanGeometry::a_e)
      .def_readwrite("obj_size", &ScanGeometry::obj_size);

  py::class_<ScanConfig>(m, "ScanConfig")
      .def(py::init<>())
      .def_readwrite("geom", &ScanConfig::geom)
      .def_readwrite("grid_nx", &ScanConfig::grid_nx)
      .def_readwrite("grid_ny", &ScanConfig::grid_ny);

  py::class_<Point>(m, "Point")
      .def_readonly("x", &Point::x)
      .def_readonly("y", &Point::y);
  py::class_<Ray>(m, "Ray")
      .def(py::init([](double sx, double sy, double dx, double dy) {
             return Ray{{sx, sy}, {dx, dy}};
           }),
           py::arg("source_x"), py::arg("source_y"), py::arg("detector_x"),
           py::arg("detector_y"))
      .def_readonly("source", &Ray::source)
      .def_readonly("detector", &Ray::detector);
  py::class_<RaySet>(m, "RaySet")
      .def_readonly("rays", &RaySet::rays)
      .def_readonly("positions", &RaySet::positions)
      .def_readonly("samples_per_position", &RaySet::samples_per_position)
      .def_readonly("sample_pitch", &RaySet::sample_pitch)
      .def_property_readonly("count", &RaySet::count);

  m.def("snake_index", &snake_index, py::arg("c"), py::arg("r"),
        py::arg("grid"));
  m.def("snake_inverse", &snake_inverse, py::arg("j"), py::arg("grid"));
  m.def("emitter_angles", &emitter_angles, py::arg("geometry"));
  m.def("emitter_positions", &emitter_positions, py::arg("geometry"),
        py::arg("center_x") = 0.0);
  m.def("enumerate_rays", &enumerate_rays, py::arg("geometry"),
        py::arg("grid"));
  m.def("ray_weights", &ray_weights, py::arg("ray"), py::arg("grid"));
  m.def("build_system", &build_system, py::arg("geometry"), py::arg("grid"),
        py::arg("parallelism") = 0);
  m.def("polar_symmetric_numbering", &polar_symmetric_numbering,
        py::arg("n_rings"), py::arg("n_sectors"));
  m.def("apply_permutation", &apply_permutation, py::arg("system"),
        py::arg("row_perm"), py::arg("col_perm"));
  m.def("parse_scan_config", &parse_scan_config, py::arg("text"));
  m.def("make_grid", &make_grid, py::arg("config"));

  py::class_<Ellipse>(m, "Ellipse")
      .def(py::init([](double x0, double y0, double a, double b, double angle,
                       double density) {
             return Ellipse{x0, y0, a, b, angle, density};
           }),
           py::arg("x0"), py::arg("y0"), py::arg("a"), py::arg("b"),
           py::arg("angle"), py::arg("density"))
      .def_readwrite("x0", &Ellipse::x0)
      .def_readwrite("y0", &Ellipse::y0)
      .def_readwrite("a", &Ellipse::a)
      .def_readwrite("b", &Ellipse::b)
      .def_readwrite("angle", &Ellipse::angle)
      .def_readwrite("density", &Ellipse::density)
      .def("contains", &Ellipse::contains, py::arg("x"), py::arg("y"));

  py::class_<PhantomImage>(m, "PhantomImage")
      .def_readonly("grid", &PhantomImage::grid)
      .def_readonly("values", &PhantomImage::values)
      .def_readonly("min_value", &PhantomImage::min_value)
      .def_readonly("max_value", &PhantomImage::max_value);

  m.def("shepp_logan_ellipses", &shepp_logan_ellipses);
  m.def("rasterize", &rasterize, py::arg("ellipses"), py::arg("grid"));
  m.def("forward_project",
        py::overload_cast<const Matrix&, const Vector&>(&forward_project),
        py::arg("a"), py::arg("f"));
  m.def("forward_project",
        py::overload_cast<const Matrix&, const Vector&, double, std::uint64_t>(
            &forward_project),
        py::arg("a"), py::arg("f"), py::arg("noise_sigma"), py::arg("seed"));

  m.def("read_matrix_market", &read_matrix_market, py::arg("path"));
  m.def("write_matrix_market", &write_matrix_market, py::arg("a"),
        py::arg("path"));
  m.def("read_vector_csv", &read_vector_csv, py::arg("path"));
  m.def("write_vector_csv", &write_vector_csv, py::arg("v"), py::arg("path"));
  m.def("write_pgm", &write_pgm, py::arg("values"), py::arg("grid"),
        py::arg("path"));

  m.attr("__version__") = "0.1.0";
}
