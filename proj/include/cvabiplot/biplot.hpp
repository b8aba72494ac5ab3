#pragma once

// 2-D biplot geometry from a fitted model: sample points, group means and
// calibrated prediction axes with marker points in original units.

#include "cvabiplot/cva.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace cvab {

using Point2 = Eigen::Vector2d;

struct MarkerPoint {
  double value = 0.0;  ///< original units
  Point2 position = Point2::Zero();
};

struct CalibratedAxis {
  std::size_t variable = 0;
  std::string name;
  Point2 direction = Point2::Zero();  ///< unit vector; zero when unplottable
  bool plottable = true;
  std::vector<MarkerPoint> markers;
};

struct SamplePoint {
  double x = 0.0;
  double y = 0.0;
  std::size_t group = 0;
};

struct Bounds {
  double xmin = -1.0;
  double xmax = 1.0;
  double ymin = -1.0;
  double ymax = 1.0;
};

struct BiplotLayout {
  std::vector<SamplePoint> points;
  std::vector<Point2> group_means;
  std::vector<std::string> group_names;
  std::vector<CalibratedAxis> axes;
  double eigenvalue_share = 0.0;
  /// Set when only one canonical dimension carries separation; the second
  /// coordinate is then plotted as 0.
  bool degenerate = false;
  /// Data bounding box plus a 5% margin; axes are clipped to it when drawn.
  Bounds bounds;
};

/// Which axes a layout should carry.
struct AxisSelection {
  enum class Mode { All, TopK, List, None };
  Mode mode = Mode::All;
  std::size_t k = 0;
  std::vector<std::string> names;

  static AxisSelection all() { return {}; }
  static AxisSelection none() { return {Mode::None, 0, {}}; }
  static AxisSelection top(std::size_t k) { return {Mode::TopK, k, {}}; }
  static AxisSelection list(std::vector<std::string> names) { return {Mode::List, 0, std::move(names)}; }
};

/// True when the model has q = 1, or its second eigenvalue is zero within
/// tolerance relative to the first.
bool is_degenerate(const CvaModel& model);

/// Calibration vector of variable i in the plotted plane: the first two
/// entries of column i of the axis matrix (second zeroed when degenerate).
Point2 axis_vector(const CvaModel& model, std::size_t i);

CalibratedAxis calibrate_axis(const CvaModel& model, std::size_t i, const std::vector<double>& values);

/// Round values from the 1-2-5 ladder covering [lo, hi].
std::vector<double> nice_markers(double lo, double hi, std::size_t target_count = 5);

/// Variables ordered by the length of their calibration vector, longest
/// first; k is clamped to p, with a warning appended to `warnings`.
std::vector<std::size_t> select_variables(const CvaModel& model, std::size_t k,
                                          std::vector<std::string>* warnings = nullptr);

/// Resolves explicit variable names. Throws InputError for unknown names.
std::vector<std::size_t> select_variables(const CvaModel& model, const std::vector<std::string>& names);

BiplotLayout layout(const CvaModel& model, const Dataset& ds, const AxisSelection& selection = {},
                    std::vector<std::string>* warnings = nullptr);

}  // namespace cvab
