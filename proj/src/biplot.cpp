#include "cvabiplot/biplot.hpp"

#include "cvabiplot/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace cvab {

bool is_degenerate(const CvaModel& model) {
  if (model.q() < 2) return true;
  const double l1 = model.eigenvalues[0];
  const double l2 = model.eigenvalues[1];
  return l2 <= 1e-8 * std::max(1.0, std::abs(l1));
}

Point2 axis_vector(const CvaModel& model, std::size_t i) {
  if (i >= model.p()) throw InputError("axis_vector: variable index out of range");
  const auto col = model.axis_matrix.col(static_cast<Eigen::Index>(i));
  Point2 d(col[0], 0.0);
  if (!is_degenerate(model)) d[1] = col[1];
  return d;
}

CalibratedAxis calibrate_axis(const CvaModel& model, std::size_t i, const std::vector<double>& values) {
  if (i >= model.p()) throw InputError("calibrate_axis: variable index out of range");
  CalibratedAxis axis;
  axis.variable = i;
  axis.name = i < model.variable_names.size() ? model.variable_names[i] : "x" + std::to_string(i + 1);

  const Point2 d = axis_vector(model, i);
  const double len2 = d.squaredNorm();
  const double full = model.axis_matrix.col(static_cast<Eigen::Index>(i)).norm();
  if (!(len2 > 0.0) || std::sqrt(len2) <= 1e-12 * full) {
    axis.plottable = false;
    return axis;
  }
  axis.direction = d / std::sqrt(len2);

  const auto idx = static_cast<Eigen::Index>(i);
  const double mean = model.standardization.means[idx];
  const double sd = model.standardization.sds[idx];
  axis.markers.reserve(values.size());
  for (double v : values) {
    const double mu = (v - mean) / sd;
    axis.markers.push_back({v, (mu / len2) * d});
  }
  return axis;
}

namespace {

double pow10i(int e) {
  double out = 1.0;
  for (int k = 0; k < std::abs(e); ++k) out *= 10.0;
  return out;
}

// Steps are mantissa * 10^exponent with mantissa in {1, 2, 5}.
struct LadderStep {
  int mantissa = 1;
  int exponent = 0;

  double value() const { return exponent >= 0 ? mantissa * pow10i(exponent) : mantissa / pow10i(exponent); }
  double at(long long k) const {
    return exponent >= 0 ? static_cast<double>(k * mantissa) * pow10i(exponent)
                         : static_cast<double>(k * mantissa) / pow10i(exponent);
  }
  LadderStep up() const {
    if (mantissa == 1) return {2, exponent};
    if (mantissa == 2) return {5, exponent};
    return {1, exponent + 1};
  }
  LadderStep down() const {
    if (mantissa == 5) return {2, exponent};
    if (mantissa == 2) return {1, exponent};
    return {5, exponent - 1};
  }
};

std::size_t ladder_count(const LadderStep& step, double lo, double hi, long long& kmin, long long& kmax) {
  const double st = step.value();
  kmin = static_cast<long long>(std::floor(lo / st + 1e-9));
  kmax = static_cast<long long>(std::ceil(hi / st - 1e-9));
  return static_cast<std::size_t>(kmax - kmin + 1);
}

}  // namespace

std::vector<double> nice_markers(double lo, double hi, std::size_t target_count) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw InputError("nice_markers: range must be finite");
  if (lo > hi) throw InputError("nice_markers: lo must not exceed hi");
  if (lo == hi) return {lo};
  const std::size_t target = std::max<std::size_t>(target_count, 2);

  const double raw = (hi - lo) / static_cast<double>(target);
  LadderStep step{1, static_cast<int>(std::floor(std::log10(raw)))};
  while (step.value() < raw * (1.0 - 1e-12)) step = step.up();

  long long kmin = 0;
  long long kmax = 0;
  std::size_t count = ladder_count(step, lo, hi, kmin, kmax);
  while (count < 3) {
    step = step.down();
    count = ladder_count(step, lo, hi, kmin, kmax);
  }
  while (count > 2 * target) {
    step = step.up();
    count = ladder_count(step, lo, hi, kmin, kmax);
  }

  std::vector<double> out;
  out.reserve(count);
  for (long long k = kmin; k <= kmax; ++k) out.push_back(step.at(k));
  return out;
}

std::vector<std::size_t> select_variables(const CvaModel& model, std::size_t k, std::vector<std::string>* warnings) {
  const std::size_t p = model.p();
  if (k == 0) throw InputError("select_variables: k must be at least 1");
  if (k > p) {
    if (warnings != nullptr) {
      warnings->push_back("requested " + std::to_string(k) + " axes but only " + std::to_string(p) +
                          " variables exist; showing all");
    }
    k = p;
  }
  const Eigen::Index plotted = std::min<Eigen::Index>(2, model.axis_matrix.rows());
  std::vector<double> length(p);
  for (std::size_t i = 0; i < p; ++i) {
    length[i] = model.axis_matrix.col(static_cast<Eigen::Index>(i)).head(plotted).norm();
  }
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return length[a] > length[b]; });
  order.resize(k);
  return order;
}

std::vector<std::size_t> select_variables(const CvaModel& model, const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  out.reserve(names.size());
  for (const auto& name : names) {
    auto it = std::find(model.variable_names.begin(), model.variable_names.end(), name);
    if (it == model.variable_names.end()) throw InputError("axis list: unknown variable '" + name + "'");
    out.push_back(static_cast<std::size_t>(it - model.variable_names.begin()));
  }
  return out;
}

BiplotLayout layout(const CvaModel& model, const Dataset& ds, const AxisSelection& selection,
                    std::vector<std::string>* warnings) {
  if (ds.p() != static_cast<Eigen::Index>(model.p())) {
    throw InputError("layout: dataset column count does not match the fitted model");
  }
  BiplotLayout out;
  out.degenerate = is_degenerate(model);
  const Matrix y = scores(model, ds.X);

  out.group_names = model.groups.names;
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < out.group_names.size(); ++k) index.emplace(out.group_names[k], k);

  out.points.reserve(static_cast<std::size_t>(ds.n()));
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    const auto& label = ds.group_labels[static_cast<std::size_t>(i)];
    auto [it, inserted] = index.emplace(label, out.group_names.size());
    if (inserted) out.group_names.push_back(label);
    const double second = (out.degenerate || y.cols() < 2) ? 0.0 : y(i, 1);
    out.points.push_back({y(i, 0), second, it->second});
  }

  std::vector<Point2> sums(out.group_names.size(), Point2::Zero());
  std::vector<std::size_t> counts(out.group_names.size(), 0);
  for (const auto& pt : out.points) {
    sums[pt.group] += Point2(pt.x, pt.y);
    ++counts[pt.group];
  }
  out.group_means.reserve(sums.size());
  for (std::size_t k = 0; k < sums.size(); ++k) {
    out.group_means.push_back(counts[k] > 0 ? Point2(sums[k] / static_cast<double>(counts[k])) : Point2::Zero());
  }

  const double total = model.eigenvalues.cwiseMax(0.0).sum();
  if (total > 0.0) {
    double plotted = std::max(0.0, model.eigenvalues[0]);
    if (model.q() > 1) plotted += std::max(0.0, model.eigenvalues[1]);
    out.eigenvalue_share = std::clamp(plotted / total, 0.0, 1.0);
  }

  std::vector<std::size_t> chosen;
  switch (selection.mode) {
    case AxisSelection::Mode::All:
      chosen.resize(model.p());
      std::iota(chosen.begin(), chosen.end(), 0);
      break;
    case AxisSelection::Mode::TopK:
      chosen = select_variables(model, selection.k, warnings);
      break;
    case AxisSelection::Mode::List:
      chosen = select_variables(model, selection.names);
      break;
    case AxisSelection::Mode::None:
      break;
  }
  for (std::size_t i : chosen) {
    const auto col = ds.X.col(static_cast<Eigen::Index>(i));
    CalibratedAxis axis = calibrate_axis(model, i, nice_markers(col.minCoeff(), col.maxCoeff()));
    if (!axis.plottable && warnings != nullptr) {
      warnings->push_back("axis '" + axis.name + "' is orthogonal to the plotted plane and was not calibrated");
    }
    out.axes.push_back(std::move(axis));
  }

  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  bool first = true;
  auto extend = [&](double x, double yv) {
    if (first) {
      xmin = xmax = x;
      ymin = ymax = yv;
      first = false;
      return;
    }
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, yv);
    ymax = std::max(ymax, yv);
  };
  for (const auto& pt : out.points) extend(pt.x, pt.y);
  for (const auto& m : out.group_means) extend(m[0], m[1]);
  auto pad = [](double& lo, double& hi) {
    const double span = hi - lo;
    const double margin = span > 0.0 ? 0.05 * span : std::max(1.0, std::abs(lo));
    lo -= margin;
    hi += margin;
  };
  pad(xmin, xmax);
  pad(ymin, ymax);
  out.bounds = {xmin, xmax, ymin, ymax};
  return out;
}

}  // namespace cvab
