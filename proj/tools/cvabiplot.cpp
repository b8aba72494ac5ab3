// cvabiplot: fit a canonical variate analysis to a CSV file and write the
// biplot artifacts.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric or singularity
// error, 4 I/O error. Failures print a single line to stderr:
//   error kind=<config|numeric|io> exit=<code> reason=<text>

#include "cvabiplot/error.hpp"
#include "cvabiplot/run.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

int fail(const char* kind, int code, const std::string& reason) {
  std::string one_line = reason;
  for (char& c : one_line) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  std::cerr << "error kind=" << kind << " exit=" << code << " reason=" << one_line << "\n";
  return code;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical variate analysis biplots via the eigenproblem or the GSVD"};
  app.require_subcommand(1);

  std::string input;
  std::string group_col;
  std::string vars;
  std::string drop;
  std::string path = "auto";
  bool no_standardize = false;
  std::string axes;
  double tol = 0.0;
  std::string out_dir = ".";
  std::string formats = "svg,csv,json";

  CLI::App* fit = app.add_subcommand("fit", "Fit a model and write scores.csv, axes.csv, report.json, biplot.svg");
  fit->add_option("--input", input, "CSV file with a header row")->required();
  fit->add_option("--group-col", group_col, "Column holding group labels")->required();
  fit->add_option("--vars", vars, "Comma-separated variable columns (default: all numeric)");
  fit->add_option("--drop", drop, "Comma-separated columns to exclude");
  fit->add_option("--path", path, "auto | standard | gsvd")->capture_default_str();
  fit->add_flag("--no-standardize", no_standardize, "Center only (standard path)");
  fit->add_option("--axes", axes, "top:<k> | list:<names> | all | none");
  auto* tol_opt = fit->add_option("--tol", tol, "Relative rank tolerance (default 1e-12)");
  fit->add_option("--out", out_dir, "Output directory")->capture_default_str();
  fit->add_option("--formats", formats, "Subset of svg,csv,json")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("config", kExitConfig, e.what());
  }

  try {
    cvab::RunConfig config;
    config.input = input;
    config.columns.group_column = group_col;
    config.columns.include = split_list(vars);
    config.columns.exclude = split_list(drop);
    config.path = cvab::parse_path(path);
    config.standardize = !no_standardize;
    if (!axes.empty()) config.axes = cvab::parse_axes(axes);
    if (tol_opt->count() > 0) config.tolerance = tol;
    config.output_dir = out_dir;
    config.formats = cvab::parse_formats(formats);

    const cvab::RunResult result = cvab::run_fit(config);
    const auto written = cvab::write_outputs(result, config);

    const auto& rep = result.report;
    std::printf("path=%s n=%zu p=%zu k=%zu r=%zu s=%zu q=%zu cluster_quality=%.10g\n", cvab::to_string(rep.path),
                rep.n, rep.p, rep.k, rep.r, rep.s, rep.q, rep.cluster_quality);
    for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    for (const auto& f : written) std::printf("wrote %s\n", f.string().c_str());
    return 0;
  } catch (const cvab::Error& e) {
    switch (e.kind()) {
      case cvab::ErrorKind::Config: return fail("config", kExitConfig, e.what());
      case cvab::ErrorKind::Numeric: return fail("numeric", kExitNumeric, e.what());
      case cvab::ErrorKind::Io: return fail("io", kExitIo, e.what());
    }
    return fail("numeric", kExitNumeric, e.what());
  } catch (const std::exception& e) {
    return fail("numeric", kExitNumeric, e.what());
  }
}
