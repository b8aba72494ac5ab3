#include "cvabiplot/run.hpp"

#include "cvabiplot/error.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cvab {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// 10 significant digits for text artifacts.
std::string g10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

constexpr std::size_t kMaxDefaultAxes = 20;

}  // namespace

OutputFormats parse_formats(const std::string& text) {
  OutputFormats f{false, false, false};
  const auto items = split(text, ',');
  if (items.empty()) throw InputError("--formats: expected a non-empty subset of svg,csv,json");
  for (const auto& item : items) {
    if (item == "svg") {
      f.svg = true;
    } else if (item == "csv") {
      f.csv = true;
    } else if (item == "json") {
      f.json = true;
    } else {
      throw InputError("--formats: unknown format '" + item + "'");
    }
  }
  return f;
}

PathSelector parse_path(const std::string& text) {
  if (text == "auto") return PathSelector::Auto;
  if (text == "standard") return PathSelector::Standard;
  if (text == "gsvd") return PathSelector::Gsvd;
  throw InputError("--path: expected auto, standard or gsvd, got '" + text + "'");
}

AxisSelection parse_axes(const std::string& text) {
  if (text == "all") return AxisSelection::all();
  if (text == "none") return AxisSelection::none();
  if (text.rfind("top:", 0) == 0) {
    const std::string count = text.substr(4);
    std::size_t pos = 0;
    long k = 0;
    try {
      k = std::stol(count, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != count.size() || count.empty() || k < 1) {
      throw InputError("--axes: top:<k> needs a positive integer, got '" + count + "'");
    }
    return AxisSelection::top(static_cast<std::size_t>(k));
  }
  if (text.rfind("list:", 0) == 0) {
    auto names = split(text.substr(5), ',');
    if (names.empty()) throw InputError("--axes: list:<names> needs at least one name");
    return AxisSelection::list(std::move(names));
  }
  throw InputError("--axes: expected top:<k>, list:<names>, all or none, got '" + text + "'");
}

RankTolerance RunConfig::rank_tolerance() const {
  RankTolerance tol;
  if (tolerance) tol.relative_epsilon = *tolerance;
  tol.validate();
  return tol;
}

Report make_report(const CvaModel& model, const BiplotLayout& layout, std::size_t n) {
  Report rep;
  rep.n = n;
  rep.p = model.p();
  rep.k = model.groups.k();
  rep.path = model.path;
  rep.r = model.r;
  rep.s = model.s;
  rep.q = model.q();
  rep.eigenvalues.assign(model.eigenvalues.data(), model.eigenvalues.data() + model.eigenvalues.size());
  rep.cluster_quality = cluster_quality(model);
  rep.eigenvalue_share = layout.eigenvalue_share;
  rep.separating_dimensions = model.separating_dimensions();
  rep.condition_R = model.condition_R;
  rep.degenerate = layout.degenerate;
  rep.group_names = model.groups.names;
  rep.group_counts = model.groups.counts;
  rep.warnings = model.warnings;
  return rep;
}

RunResult run_fit(const LoadedData& data, const RunConfig& config) {
  const RankTolerance tol = config.rank_tolerance();
  const Dataset& ds = data.dataset;
  ds.validate();

  std::vector<std::string> warnings = data.warnings;
  RunResult result;
  result.dataset = ds;

  switch (config.path) {
    case PathSelector::Standard:
      result.model = fit_standard(ds, config.standardize, tol);
      break;
    case PathSelector::Gsvd:
      if (!config.standardize) warnings.push_back("--no-standardize ignored: the gsvd path always standardizes");
      result.model = fit_gsvd(ds, tol);
      break;
    case PathSelector::Auto:
      if (ds.n() > ds.p()) {
        try {
          result.model = fit_standard(ds, config.standardize, tol);
          break;
        } catch (const SingularScatterError&) {
          warnings.push_back("within-group scatter is singular; switched to the gsvd path");
        }
      }
      if (!config.standardize) warnings.push_back("--no-standardize ignored: the gsvd path always standardizes");
      result.model = fit_gsvd(ds, tol);
      break;
  }

  AxisSelection axes = config.axes.value_or(ds.p() <= static_cast<Eigen::Index>(kMaxDefaultAxes)
                                                ? AxisSelection::all()
                                                : AxisSelection::none());
  if (!config.axes && ds.p() > static_cast<Eigen::Index>(kMaxDefaultAxes)) {
    warnings.push_back("p = " + std::to_string(ds.p()) + " is large; axes hidden (use --axes top:<k>)");
  }
  result.layout = layout(result.model, ds, axes, &warnings);
  result.report = make_report(result.model, result.layout, static_cast<std::size_t>(ds.n()));
  result.report.rows_read = data.rows_read;
  result.report.rows_dropped = data.rows_dropped;
  warnings.insert(warnings.end(), result.report.warnings.begin(), result.report.warnings.end());
  result.report.warnings = std::move(warnings);
  return result;
}

RunResult run_fit(const RunConfig& config) {
  return run_fit(load_csv(config.input, config.columns), config);
}

std::string report_json(const Report& rep) {
  nlohmann::ordered_json j;
  j["n"] = rep.n;
  j["p"] = rep.p;
  j["k"] = rep.k;
  j["path"] = to_string(rep.path);
  j["r"] = rep.r;
  j["s"] = rep.s;
  j["q"] = rep.q;
  j["eigenvalues"] = rep.eigenvalues;
  j["cluster_quality"] = rep.cluster_quality;
  j["eigenvalue_share"] = rep.eigenvalue_share;
  j["separating_dimensions"] = rep.separating_dimensions;
  j["rows_read"] = rep.rows_read;
  j["rows_dropped"] = rep.rows_dropped;
  j["condition_R"] = rep.condition_R;
  j["degenerate"] = rep.degenerate;
  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < rep.group_names.size(); ++k) {
    groups.push_back({{"name", rep.group_names[k]}, {"count", rep.group_counts[k]}});
  }
  j["groups"] = std::move(groups);
  j["warnings"] = rep.warnings;
  return j.dump(2) + "\n";
}

std::string scores_csv(const RunResult& result) {
  const Matrix y = scores(result.model, result.dataset.X);
  std::ostringstream out;
  out << "id,group,x,y";
  for (Eigen::Index j = 0; j < y.cols(); ++j) out << ",cv" << (j + 1);
  out << "\n";
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const auto row = static_cast<std::size_t>(i);
    const std::size_t id = result.dataset.sample_ids.empty() ? row + 1 : result.dataset.sample_ids[row];
    const auto& pt = result.layout.points[row];
    out << id << "," << csv_escape(result.dataset.group_labels[row]) << "," << g10(pt.x) << "," << g10(pt.y);
    for (Eigen::Index j = 0; j < y.cols(); ++j) out << "," << g10(y(i, j));
    out << "\n";
  }
  return out.str();
}

std::string axes_csv(const BiplotLayout& layout) {
  std::ostringstream out;
  out << "variable,direction_x,direction_y,plottable,marker_value,marker_x,marker_y\n";
  for (const auto& axis : layout.axes) {
    const std::string prefix = csv_escape(axis.name) + "," + g10(axis.direction[0]) + "," + g10(axis.direction[1]) +
                               "," + (axis.plottable ? "true" : "false");
    if (axis.markers.empty()) {
      out << prefix << ",,,\n";
      continue;
    }
    for (const auto& m : axis.markers) {
      out << prefix << "," << g10(m.value) << "," << g10(m.position[0]) << "," << g10(m.position[1]) << "\n";
    }
  }
  return out.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::vector<std::filesystem::path> write_outputs(const RunResult& result, const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + config.output_dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, const std::string& content) {
    const auto path = config.output_dir / name;
    write_file(path, content);
    written.push_back(path);
  };
  if (config.formats.csv) {
    emit("scores.csv", scores_csv(result));
    emit("axes.csv", axes_csv(result.layout));
  }
  if (config.formats.json) emit("report.json", report_json(result.report));
  if (config.formats.svg) {
    SvgStyle style;
    style.title = std::string("CVA biplot (") + to_string(result.model.path) + " path)";
    emit("biplot.svg", render_svg(result.layout, style));
  }
  return written;
}

}  // namespace cvab
