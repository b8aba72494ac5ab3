#include "cvabiplot/csv.hpp"

#include "cvabiplot/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cvab {

std::vector<CsvRecord> parse_csv(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<CsvRecord> records;
  CsvRecord record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) {
      if (!records.empty() && record.size() != records.front().size()) {
        std::ostringstream msg;
        msg << "csv: line " << line << " has " << record.size() << " fields, expected " << records.front().size();
        throw InputError(msg.str());
      }
      records.push_back(std::move(record));
    }
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started && field.empty()) {
          quoted = true;
          field_started = true;
        } else {
          field.push_back(c);
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        ++line;
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
        break;
    }
  }
  if (quoted) throw InputError("csv: unterminated quoted field");
  if (!field.empty() || !record.empty() || field_started) end_record();
  return records;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

bool is_missing_cell(std::string_view cell) {
  const auto t = trim(cell);
  return t.empty() || t == "NA" || t == "N/A" || t == "NaN" || t == "nan" || t == "null";
}

std::optional<double> parse_number(std::string_view cell) {
  auto t = trim(cell);
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  if (t.empty()) return std::nullopt;
  double value = 0.0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

LoadedData load_csv_text(std::string_view text, const ColumnSelection& columns) {
  const std::vector<CsvRecord> records = parse_csv(text);
  if (records.empty()) throw InputError("csv: no header row");
  const CsvRecord& header = records.front();

  auto find_column = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InputError("csv: column '" + name + "' not found in header");
    return static_cast<std::size_t>(it - header.begin());
  };

  LoadedData out;
  const std::size_t group_col = find_column(columns.group_column);
  std::set<std::size_t> excluded{group_col};
  for (const auto& name : columns.exclude) excluded.insert(find_column(name));

  std::vector<std::size_t> retained;
  if (!columns.include.empty()) {
    for (const auto& name : columns.include) {
      const std::size_t c = find_column(name);
      if (c == group_col) throw InputError("csv: group column '" + name + "' cannot also be a variable");
      if (excluded.count(c) == 0 && std::find(retained.begin(), retained.end(), c) == retained.end()) {
        retained.push_back(c);
      }
    }
    for (std::size_t row = 1; row < records.size(); ++row) {
      for (std::size_t c : retained) {
        const auto& cell = records[row][c];
        if (!is_missing_cell(cell) && !parse_number(cell)) {
          std::ostringstream msg;
          msg << "csv: unparseable numeric cell '" << cell << "' at row " << row << ", column '" << header[c] << "'";
          throw InputError(msg.str());
        }
      }
    }
  } else {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (excluded.count(c) != 0) continue;
      bool numeric = true;
      bool any_value = false;
      for (std::size_t row = 1; row < records.size() && numeric; ++row) {
        const auto& cell = records[row][c];
        if (is_missing_cell(cell)) continue;
        any_value = true;
        numeric = parse_number(cell).has_value();
      }
      if (numeric && any_value) {
        retained.push_back(c);
      } else {
        out.warnings.push_back("ignoring non-numeric column '" + header[c] + "'");
      }
    }
  }
  if (retained.empty()) throw InputError("csv: no numeric variable columns retained");

  std::vector<std::vector<double>> rows;
  Dataset& ds = out.dataset;
  for (std::size_t c : retained) ds.variable_names.push_back(header[c]);
  out.rows_read = records.size() - 1;
  for (std::size_t row = 1; row < records.size(); ++row) {
    const auto& rec = records[row];
    if (is_missing_cell(rec[group_col])) {
      ++out.rows_dropped;
      continue;
    }
    std::vector<double> values;
    values.reserve(retained.size());
    bool complete = true;
    for (std::size_t c : retained) {
      auto v = parse_number(rec[c]);
      if (!v) {
        complete = false;
        break;
      }
      values.push_back(*v);
    }
    if (!complete) {
      ++out.rows_dropped;
      continue;
    }
    rows.push_back(std::move(values));
    ds.group_labels.push_back(std::string(trim(rec[group_col])));
    ds.sample_ids.push_back(row);
  }
  if (out.rows_dropped > 0) {
    out.warnings.push_back("dropped " + std::to_string(out.rows_dropped) +
                           " rows with missing values (complete-case analysis)");
  }
  if (rows.empty()) throw InputError("csv: no complete rows left after filtering missing values");

  ds.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(retained.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < retained.size(); ++j) {
      ds.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return out;
}

LoadedData load_csv(const std::filesystem::path& path, const ColumnSelection& columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading input file '" + path.string() + "'");
  return load_csv_text(buffer.str(), columns);
}

}  // namespace cvab
