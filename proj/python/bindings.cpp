#include "cvabiplot/biplot.hpp"
#include "cvabiplot/cva.hpp"
#include "cvabiplot/error.hpp"
#include "cvabiplot/gsvd.hpp"
#include "cvabiplot/matrix_kernels.hpp"
#include "cvabiplot/run.hpp"
#include "cvabiplot/svg.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace cvab;

namespace {

Dataset make_dataset(const Matrix& x, std::vector<std::string> names, std::vector<std::string> labels) {
  Dataset ds;
  ds.X = x;
  if (names.empty()) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) names.push_back("x" + std::to_string(j + 1));
  }
  ds.variable_names = std::move(names);
  ds.group_labels = std::move(labels);
  ds.validate();
  return ds;
}

Matrix points_array(const BiplotLayout& lay) {
  Matrix out(static_cast<Eigen::Index>(lay.points.size()), 2);
  for (std::size_t i = 0; i < lay.points.size(); ++i) {
    out(static_cast<Eigen::Index>(i), 0) = lay.points[i].x;
    out(static_cast<Eigen::Index>(i), 1) = lay.points[i].y;
  }
  return out;
}

py::dict report_dict(const Report& rep) {
  py::dict d;
  d["n"] = rep.n;
  d["p"] = rep.p;
  d["k"] = rep.k;
  d["path"] = to_string(rep.path);
  d["r"] = rep.r;
  d["s"] = rep.s;
  d["q"] = rep.q;
  d["eigenvalues"] = rep.eigenvalues;
  d["cluster_quality"] = rep.cluster_quality;
  d["eigenvalue_share"] = rep.eigenvalue_share;
  d["separating_dimensions"] = rep.separating_dimensions;
  d["rows_read"] = rep.rows_read;
  d["rows_dropped"] = rep.rows_dropped;
  d["degenerate"] = rep.degenerate;
  d["warnings"] = rep.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Canonical variate analysis biplots via the eigenproblem or the GSVD";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  auto numeric = py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<SingularScatterError>(m, "SingularScatterError", numeric.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<RankTolerance>(m, "RankTolerance")
      .def(py::init([](double rel, double floor) { return RankTolerance{rel, floor}; }),
           py::arg("relative_epsilon") = 1e-12, py::arg("absolute_floor") = 0.0)
      .def_readwrite("relative_epsilon", &RankTolerance::relative_epsilon)
      .def_readwrite("absolute_floor", &RankTolerance::absolute_floor);

  m.def(
      "svd",
      [](const Matrix& a, const RankTolerance& tol) {
        auto r = svd(a, tol);
        return py::make_tuple(r.U, r.sigma, r.V, r.rank);
      },
      py::arg("a"), py::arg("tol") = RankTolerance{}, "Thin SVD: returns (U, sigma, V, rank).");
  m.def(
      "complete_orthogonal_decomposition",
      [](const Matrix& k, const RankTolerance& tol) {
        auto r = complete_orthogonal_decomposition(k, tol);
        return py::make_tuple(r.P, r.Q, r.R, r.rank);
      },
      py::arg("k"), py::arg("tol") = RankTolerance{}, "Returns (P, Q, R, r) with P'KQ = [[R, 0], [0, 0]].");
  m.def(
      "symmetric_eigen",
      [](const Matrix& s) {
        auto r = symmetric_eigen(s);
        return py::make_tuple(r.V, r.lambda);
      },
      py::arg("s"));
  m.def("pseudoinverse", &pseudoinverse, py::arg("a"), py::arg("tol") = RankTolerance{});
  m.def("inv_sqrt_spd", &inv_sqrt_spd, py::arg("w"), py::arg("tol") = RankTolerance{});

  py::class_<GsvdFactors>(m, "GsvdFactors")
      .def_readonly("U", &GsvdFactors::U)
      .def_readonly("V", &GsvdFactors::V)
      .def_readonly("alpha", &GsvdFactors::alpha)
      .def_readonly("beta", &GsvdFactors::beta)
      .def_readonly("M", &GsvdFactors::M)
      .def_readonly("M_inv", &GsvdFactors::M_inv)
      .def_readonly("r", &GsvdFactors::r)
      .def_readonly("s", &GsvdFactors::s)
      .def_readonly("condition_R", &GsvdFactors::condition_R)
      .def_property_readonly("q", &GsvdFactors::q)
      .def("C", &GsvdFactors::c)
      .def("S", &GsvdFactors::s_matrix);
  m.def("gsvd", &gsvd, py::arg("f"), py::arg("h"), py::arg("tol") = RankTolerance{});
  m.def(
      "generalized_eigenvalues",
      [](const GsvdFactors& f) {
        auto ev = generalized_eigenvalues(f);
        return py::make_tuple(ev.values, ev.columns);
      },
      py::arg("factors"));
  m.def("discriminant_columns", &discriminant_columns, py::arg("factors"));

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&make_dataset), py::arg("X"), py::arg("variable_names") = std::vector<std::string>{},
           py::arg("group_labels"))
      .def_readonly("X", &Dataset::X)
      .def_readonly("variable_names", &Dataset::variable_names)
      .def_readonly("group_labels", &Dataset::group_labels)
      .def_readonly("sample_ids", &Dataset::sample_ids);

  py::class_<CvaModel>(m, "CvaModel")
      .def_property_readonly("path", [](const CvaModel& model) { return to_string(model.path); })
      .def_readonly("basis", &CvaModel::basis)
      .def_readonly("axis_matrix", &CvaModel::axis_matrix)
      .def_readonly("eigenvalues", &CvaModel::eigenvalues)
      .def_readonly("group_means_scores", &CvaModel::group_means_scores)
      .def_readonly("training_scores", &CvaModel::training_scores)
      .def_readonly("B_used", &CvaModel::B_used)
      .def_readonly("W_used", &CvaModel::W_used)
      .def_readonly("r", &CvaModel::r)
      .def_readonly("s", &CvaModel::s)
      .def_readonly("warnings", &CvaModel::warnings)
      .def_property_readonly("q", &CvaModel::q)
      .def_property_readonly("group_names", [](const CvaModel& model) { return model.groups.names; });

  m.def("fit_standard", &fit_standard, py::arg("dataset"), py::arg("standardize") = true,
        py::arg("tol") = RankTolerance{});
  m.def("fit_gsvd", &fit_gsvd, py::arg("dataset"), py::arg("tol") = RankTolerance{});
  m.def("scores", &scores, py::arg("model"), py::arg("X"));
  m.def("cluster_quality", &cluster_quality, py::arg("model"));

  py::class_<CalibratedAxis>(m, "CalibratedAxis")
      .def_readonly("variable", &CalibratedAxis::variable)
      .def_readonly("name", &CalibratedAxis::name)
      .def_readonly("plottable", &CalibratedAxis::plottable)
      .def_property_readonly("direction", [](const CalibratedAxis& a) { return Vector(a.direction); })
      .def_property_readonly("marker_values",
                             [](const CalibratedAxis& a) {
                               std::vector<double> v;
                               for (const auto& mk : a.markers) v.push_back(mk.value);
                               return v;
                             })
      .def_property_readonly("marker_positions", [](const CalibratedAxis& a) {
        Matrix out(static_cast<Eigen::Index>(a.markers.size()), 2);
        for (std::size_t i = 0; i < a.markers.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = a.markers[i].position;
        return out;
      });

  py::class_<BiplotLayout>(m, "BiplotLayout")
      .def_property_readonly("points", &points_array)
      .def_property_readonly("groups",
                             [](const BiplotLayout& lay) {
                               std::vector<std::size_t> g;
                               for (const auto& p : lay.points) g.push_back(p.group);
                               return g;
                             })
      .def_readonly("group_names", &BiplotLayout::group_names)
      .def_readonly("axes", &BiplotLayout::axes)
      .def_readonly("eigenvalue_share", &BiplotLayout::eigenvalue_share)
      .def_readonly("degenerate", &BiplotLayout::degenerate);

  m.def(
      "layout",
      [](const CvaModel& model, const Dataset& ds, const std::string& axes) {
        return layout(model, ds, parse_axes(axes));
      },
      py::arg("model"), py::arg("dataset"), py::arg("axes") = "all",
      "Biplot geometry; axes is 'all', 'none', 'top:<k>' or 'list:<a>,<b>'.");
  m.def("calibrate_axis", &calibrate_axis, py::arg("model"), py::arg("variable"), py::arg("values"));
  m.def("nice_markers", &nice_markers, py::arg("lo"), py::arg("hi"), py::arg("target_count") = 5);
  m.def(
      "render_svg", [](const BiplotLayout& lay, const std::string& title) {
        SvgStyle style;
        style.title = title;
        return render_svg(lay, style);
      },
      py::arg("layout"), py::arg("title") = "CVA biplot");

  m.def(
      "run_fit",
      [](const std::filesystem::path& input, const std::string& group_col, std::vector<std::string> vars,
         std::vector<std::string> drop, const std::string& path, bool standardize, std::optional<std::string> axes,
         std::optional<double> tol, std::optional<std::filesystem::path> out, const std::string& formats) {
        RunConfig config;
        config.input = input;
        config.columns.group_column = group_col;
        config.columns.include = std::move(vars);
        config.columns.exclude = std::move(drop);
        config.path = parse_path(path);
        config.standardize = standardize;
        if (axes) config.axes = parse_axes(*axes);
        config.tolerance = tol;
        config.formats = parse_formats(formats);
        RunResult result = run_fit(config);
        if (out) {
          config.output_dir = *out;
          write_outputs(result, config);
        }
        return report_dict(result.report);
      },
      py::arg("input"), py::arg("group_col"), py::arg("vars") = std::vector<std::string>{},
      py::arg("drop") = std::vector<std::string>{}, py::arg("path") = "auto", py::arg("standardize") = true,
      py::arg("axes") = py::none(), py::arg("tol") = py::none(), py::arg("out") = py::none(),
      py::arg("formats") = "svg,csv,json",
      "Full pipeline on a CSV file; writes artifacts when `out` is given and returns the report as a dict.");
}
