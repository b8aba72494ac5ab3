#include "cvabiplot/csv.hpp"
#include "cvabiplot/error.hpp"
#include "cvabiplot/run.hpp"
#include "cvabiplot/svg.hpp"
#include "oracles.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cvab;
namespace fs = std::filesystem;

namespace {

const std::string kData = CVAB_DATA_DIR;

const std::vector<std::string> kPenguinVars = {"bill_length_mm", "bill_depth_mm", "flipper_length_mm",
                                               "body_mass_g"};

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cvabiplot_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::string dataset_csv(const Dataset& ds) {
  std::ostringstream out;
  out << "group";
  for (const auto& v : ds.variable_names) out << "," << v;
  out << "\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    out << ds.group_labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < ds.p(); ++j) out << "," << ds.X(i, j);
    out << "\n";
  }
  return out.str();
}

RunConfig penguin_config() {
  RunConfig config;
  config.input = kData + "/penguins.csv";
  config.columns = {"species", kPenguinVars, {}};
  return config;
}

}  // namespace

TEST_CASE("csv records") {
  const auto r = parse_csv("a,b,c\n1,\"x, y\",\"say \"\"hi\"\"\"\r\n2,\"multi\nline\",\n");
  REQUIRE(r.size() == 3);
  CHECK(r[1][1] == "x, y");
  CHECK(r[1][2] == "say \"hi\"");
  CHECK(r[2][1] == "multi\nline");
  CHECK(r[2][2].empty());

  CHECK(parse_csv("\xEF\xBB\xBFh1,h2\n1,2").at(0).at(0) == "h1");
  CHECK(parse_csv("h\n1\n\n").size() == 2);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), InputError);
  CHECK_THROWS_AS(parse_csv("a\n\"open\n"), InputError);
}

TEST_CASE("csv field helpers") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("q\"") == "\"q\"\"\"");
  for (const char* m : {"", "NA", " NA ", "N/A", "NaN", "nan", "null"}) CHECK(is_missing_cell(m));
  CHECK_FALSE(is_missing_cell("0"));
  CHECK(parse_number(" 2.5 ").value() == 2.5);
  CHECK(parse_number("-1e3").value() == -1000.0);
  CHECK_FALSE(parse_number("abc").has_value());
  CHECK_FALSE(parse_number("1.5x").has_value());
  CHECK_FALSE(parse_number("inf").has_value());
}

TEST_CASE("load a small csv") {
  const LoadedData d = load_csv_text("g,x,y\na,1,2\nb,3,4\na,5,7\n", {"g", {}, {}});
  CHECK(d.dataset.n() == 3);
  CHECK(d.dataset.p() == 2);
  CHECK(d.dataset.variable_names == std::vector<std::string>{"x", "y"});
  CHECK(d.dataset.sample_ids == std::vector<std::size_t>{1, 2, 3});
  CHECK(d.rows_dropped == 0);
}

TEST_CASE("complete-case filtering") {
  const LoadedData d = load_csv_text("g,x,y\na,1,2\nb,NA,4\na,5,7\nb,2,2\n", {"g", {}, {}});
  CHECK(d.dataset.n() == 3);
  CHECK(d.rows_read == 4);
  CHECK(d.rows_dropped == 1);
  CHECK(d.warnings.size() == 1);
  CHECK(d.dataset.sample_ids == std::vector<std::size_t>{1, 3, 4});

  const LoadedData unlabeled = load_csv_text("g,x\na,1\n,2\nb,3\n", {"g", {}, {}});
  CHECK(unlabeled.rows_dropped == 1);
}

TEST_CASE("column selection") {
  const std::string text = "id,g,x,y,z,name\n1,a,1,2,3,p\n2,b,3,4,1,q\n3,a,5,7,2,r\n";
  const LoadedData all = load_csv_text(text, {"g", {}, {}});
  CHECK(all.dataset.variable_names == std::vector<std::string>{"id", "x", "y", "z"});
  CHECK(all.warnings.size() == 1);
  CHECK(all.warnings[0].find("'name'") != std::string::npos);

  const LoadedData dropped = load_csv_text(text, {"g", {}, {"id", "name"}});
  CHECK(dropped.dataset.variable_names == std::vector<std::string>{"x", "y", "z"});

  const LoadedData chosen = load_csv_text(text, {"g", {"z", "x"}, {}});
  CHECK(chosen.dataset.variable_names == std::vector<std::string>{"z", "x"});
  CHECK(chosen.dataset.X(0, 0) == 3.0);
}

TEST_CASE("csv loading errors") {
  CHECK_THROWS_WITH_AS(load_csv_text("g,x\na,1\nb,oops\n", {"g", {"x"}, {}}), doctest::Contains("row"), InputError);
  CHECK_THROWS_AS(load_csv_text("g,x\na,1\n", {"missing", {}, {}}), InputError);
  CHECK_THROWS_AS(load_csv_text("g,x\na,1\n", {"g", {"nope"}, {}}), InputError);
  CHECK_THROWS_AS(load_csv_text("g,x\na,NA\nb,NA\n", {"g", {}, {}}), InputError);
  CHECK_THROWS_AS(load_csv_text("g,name\na,x\n", {"g", {}, {}}), InputError);
  CHECK_THROWS_AS(load_csv_text("", {"g", {}, {}}), InputError);
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", {"g", {}, {}}), IoError);
}

TEST_CASE("penguin complete cases") {
  const LoadedData four = load_csv(kData + "/penguins.csv", {"species", kPenguinVars, {}});
  CHECK(four.rows_read == 344);
  CHECK(four.dataset.n() == 342);
  CHECK(four.rows_dropped == 2);

  // Requiring every column, sex included, leaves 333 rows.
  std::vector<std::string> with_sex = kPenguinVars;
  const std::string text = slurp(kData + "/penguins.csv");
  const auto rows = parse_csv(text);
  std::size_t complete = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    bool ok = true;
    for (const auto& cell : rows[i]) ok = ok && !is_missing_cell(cell);
    if (ok) ++complete;
  }
  CHECK(complete == 333);
}

TEST_CASE("option parsing") {
  const OutputFormats f = parse_formats("json");
  CHECK(f.json);
  CHECK_FALSE(f.svg);
  CHECK_FALSE(f.csv);
  CHECK_THROWS_AS(parse_formats(""), InputError);
  CHECK_THROWS_AS(parse_formats("svg,pdf"), InputError);

  CHECK(parse_path("auto") == PathSelector::Auto);
  CHECK(parse_path("gsvd") == PathSelector::Gsvd);
  CHECK(parse_path("standard") == PathSelector::Standard);
  CHECK_THROWS_AS(parse_path("fast"), InputError);

  CHECK(parse_axes("all").mode == AxisSelection::Mode::All);
  CHECK(parse_axes("none").mode == AxisSelection::Mode::None);
  CHECK(parse_axes("top:3").k == 3);
  CHECK(parse_axes("list:a,b").names == std::vector<std::string>{"a", "b"});
  CHECK_THROWS_AS(parse_axes("top:0"), InputError);
  CHECK_THROWS_AS(parse_axes("top:x"), InputError);
  CHECK_THROWS_AS(parse_axes("list:"), InputError);
  CHECK_THROWS_AS(parse_axes("some"), InputError);
}

TEST_CASE("auto path on penguins") {
  const RunResult r = run_fit(penguin_config());
  CHECK(r.report.path == FitPath::Standard);
  CHECK(r.report.cluster_quality == doctest::Approx(17.3422).epsilon(0.01 / 17.3422));
  CHECK(r.report.n == 342);
  CHECK(r.report.rows_read == 344);
  CHECK(r.report.rows_dropped == 2);
  bool noted = false;
  for (const auto& w : r.report.warnings) noted = noted || w.find("dropped 2") != std::string::npos;
  CHECK(noted);
}

TEST_CASE("auto path on wide data uses the gsvd route") {
  oracle::Rng rng(71);
  const Dataset ds = oracle::latent_dataset(rng, 30, 200, 3, 12);
  const LoadedData loaded = load_csv_text(dataset_csv(ds), {"group", {}, {}});
  RunConfig config;
  const RunResult r = run_fit(loaded, config);
  CHECK(r.report.path == FitPath::Gsvd);
  CHECK(r.report.q == r.report.r - r.report.s);
  CHECK(r.report.eigenvalues.size() == r.report.q);
  CHECK(r.layout.axes.empty());

  config.path = PathSelector::Standard;
  CHECK_THROWS_WITH_AS(run_fit(loaded, config), doctest::Contains("singular scatter: use gsvd path"),
                       SingularScatterError);
}

TEST_CASE("auto path falls back when the within-group scatter is singular") {
  const LoadedData loaded = load_csv_text("g,x,y\na,1,2\na,2,4\na,3,6\nb,4,8\nb,6,12\nb,5,10\n", {"g", {}, {}});
  const RunResult r = run_fit(loaded, RunConfig{});
  CHECK(r.report.path == FitPath::Gsvd);
  bool noted = false;
  for (const auto& w : r.report.warnings) noted = noted || w.find("switched to the gsvd path") != std::string::npos;
  CHECK(noted);
}

TEST_CASE("report consistency") {
  oracle::Rng rng(72);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset ds = oracle::grouped_dataset(rng, 40, rng.integer(2, 6), rng.integer(2, 4));
    for (PathSelector path : {PathSelector::Standard, PathSelector::Gsvd}) {
      RunConfig config;
      config.path = path;
      LoadedData loaded;
      loaded.dataset = ds;
      const Report rep = run_fit(loaded, config).report;
      CHECK(rep.r >= rep.s);
      CHECK(rep.q == rep.r - rep.s);
      CHECK(rep.eigenvalues.size() == rep.q);
      double sum = 0.0;
      for (double v : rep.eigenvalues) sum += v;
      CHECK(std::abs(sum - rep.cluster_quality) <= 1e-8 * std::max(1.0, rep.cluster_quality));
    }
  }
}

TEST_CASE("write outputs") {
  RunConfig config = penguin_config();
  const RunResult r = run_fit(config);

  config.output_dir = scratch("json_only");
  config.formats = parse_formats("json");
  const auto only = write_outputs(r, config);
  REQUIRE(only.size() == 1);
  CHECK(only[0].filename() == "report.json");
  CHECK(std::distance(fs::directory_iterator(config.output_dir), fs::directory_iterator{}) == 1);

  const auto j = nlohmann::json::parse(slurp(only[0]));
  for (const char* key : {"n", "p", "k", "path", "r", "s", "q", "eigenvalues", "cluster_quality", "warnings"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["path"] == "standard");
  CHECK(j["cluster_quality"].get<double>() == r.report.cluster_quality);

  config.output_dir = scratch("all");
  config.formats = OutputFormats{};
  CHECK(write_outputs(r, config).size() == 4);
  const std::string scores = slurp(config.output_dir / "scores.csv");
  CHECK(count(scores, "\n") == 342 + 1);
  CHECK(scores.rfind("id,group,x,y,cv1,cv2,cv3,cv4\n", 0) == 0);
  const auto records = parse_csv(scores);
  CHECK(records[1][0] == "1");
  CHECK(records[1][1] == "Adelie");

  const std::string axes = slurp(config.output_dir / "axes.csv");
  CHECK(axes.rfind("variable,direction_x,direction_y,plottable,marker_value,marker_x,marker_y\n", 0) == 0);
  CHECK(axes.find("body_mass_g") != std::string::npos);

  config.output_dir = "/proc/forbidden_dir";
  CHECK_THROWS_AS(write_outputs(r, config), IoError);
}

TEST_CASE("svg rendering") {
  const RunResult r = run_fit(penguin_config());
  const std::string svg = render_svg(r.layout, {});
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(count(svg, "class=\"sample\"") == 342);
  CHECK(count(svg, "<g class=\"axis\">") == 4);
  CHECK(count(svg, "class=\"legend-key\"") == 3);
  CHECK(svg.find("Gentoo") != std::string::npos);
  CHECK(svg == render_svg(r.layout, {}));

  BiplotLayout bare = r.layout;
  bare.axes.clear();
  const std::string points_only = render_svg(bare, {});
  CHECK(count(points_only, "<g class=\"axis\">") == 0);
  CHECK(count(points_only, "class=\"sample\"") == 342);

  oracle::Rng rng(73);
  const Dataset two = oracle::grouped_dataset(rng, 20, 2, 2);
  LoadedData loaded;
  loaded.dataset = two;
  const RunResult d = run_fit(loaded, RunConfig{});
  const std::string degenerate = render_svg(d.layout, {});
  CHECK(degenerate.find("degeneracy-note") != std::string::npos);
  CHECK(degenerate.find(">null<") != std::string::npos);
}
