#pragma once

// RFC 4180 CSV reading and dataset ingestion.

#include "cvabiplot/cva.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cvab {

using CsvRecord = std::vector<std::string>;

/// Splits CSV text into records. Quoted fields may contain separators,
/// doubled quotes and line breaks; CRLF and LF endings are accepted and a
/// leading UTF-8 byte order mark is skipped. Throws InputError on an
/// unterminated quote or a record whose width differs from the first.
std::vector<CsvRecord> parse_csv(std::string_view text);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

/// Cells treated as missing: empty, NA, N/A, NaN, nan, null (surrounding
/// blanks ignored).
bool is_missing_cell(std::string_view cell);

/// Parses a finite number; nullopt when the cell is not one.
std::optional<double> parse_number(std::string_view cell);

struct ColumnSelection {
  std::string group_column;
  std::vector<std::string> include;  ///< empty: every numeric column except the group column
  std::vector<std::string> exclude;
};

struct LoadedData {
  Dataset dataset;
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
  std::vector<std::string> warnings;
};

/// Builds a dataset from CSV text. Rows missing the group label or any
/// retained variable are dropped (complete cases) and counted.
LoadedData load_csv_text(std::string_view text, const ColumnSelection& columns);

/// Reads `path` and forwards to load_csv_text. Throws IoError when the file
/// cannot be read.
LoadedData load_csv(const std::filesystem::path& path, const ColumnSelection& columns);

}  // namespace cvab
