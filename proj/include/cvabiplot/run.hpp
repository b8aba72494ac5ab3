#pragma once

// End-to-end pipeline behind the `fit` command: load, fit, lay out, report,
// write artifacts.

#include "cvabiplot/biplot.hpp"
#include "cvabiplot/csv.hpp"
#include "cvabiplot/cva.hpp"
#include "cvabiplot/svg.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cvab {

enum class PathSelector { Auto, Standard, Gsvd };

struct OutputFormats {
  bool svg = true;
  bool csv = true;
  bool json = true;
};

/// Parses "svg,csv,json" (any non-empty subset). Throws InputError.
OutputFormats parse_formats(const std::string& text);
/// Parses "auto" | "standard" | "gsvd". Throws InputError.
PathSelector parse_path(const std::string& text);
/// Parses "all" | "none" | "top:<k>" | "list:<a>,<b>". Throws InputError.
AxisSelection parse_axes(const std::string& text);

struct RunConfig {
  std::filesystem::path input;
  ColumnSelection columns;
  bool standardize = true;
  PathSelector path = PathSelector::Auto;
  /// Unset: every axis when p <= 20, otherwise none.
  std::optional<AxisSelection> axes;
  std::optional<double> tolerance;
  std::filesystem::path output_dir = ".";
  OutputFormats formats;

  RankTolerance rank_tolerance() const;
};

struct Report {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t k = 0;
  FitPath path = FitPath::Standard;
  std::size_t r = 0;
  std::size_t s = 0;
  std::size_t q = 0;
  std::vector<double> eigenvalues;
  double cluster_quality = 0.0;
  double eigenvalue_share = 0.0;
  std::size_t separating_dimensions = 0;
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
  double condition_R = 1.0;
  bool degenerate = false;
  std::vector<std::string> group_names;
  std::vector<std::size_t> group_counts;
  std::vector<std::string> warnings;
};

struct RunResult {
  Dataset dataset;
  CvaModel model;
  BiplotLayout layout;
  Report report;
};

Report make_report(const CvaModel& model, const BiplotLayout& layout, std::size_t n);

/// Runs the pipeline on an already loaded dataset.
RunResult run_fit(const LoadedData& data, const RunConfig& config);

/// Loads config.input, then runs the pipeline.
RunResult run_fit(const RunConfig& config);

/// Report as JSON text (fixed field names, full double precision).
std::string report_json(const Report& report);
/// scores.csv contents.
std::string scores_csv(const RunResult& result);
/// axes.csv contents.
std::string axes_csv(const BiplotLayout& layout);

/// Writes the artifacts named by config.formats into config.output_dir and
/// returns their paths. Throws IoError with the offending path.
std::vector<std::filesystem::path> write_outputs(const RunResult& result, const RunConfig& config);

}  // namespace cvab
