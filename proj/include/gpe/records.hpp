#pragma once

// Tabular output: one header-bearing CSV or JSON-lines file per diagnostic.
//
// Numbers are written with 17 significant digits, so every double parses
// back to the same value. CSV uses ',' and LF line endings; fields holding
// ',', '"' or a line break are quoted RFC 4180 style. JSONL writes one
// object per row with keys in column order; non-finite numbers become null.

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace gpe {

using Cell = std::variant<std::int64_t, double, std::string>;

struct RecordTable
{
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws ValidationError when the row width does not match the header.
  void add_row(std::vector<Cell> row);
};

enum class OutputFormat
{
  csv,
  jsonl,
};

OutputFormat parse_output_format(const std::string& name);
std::string extension(OutputFormat format);

/// Shortest form that still carries 17 significant digits ("{:.17g}").
std::string format_double(double value);

std::string render_records(const RecordTable& table, OutputFormat format);

/// Writes the rendered table; throws ValidationError on an empty table and
/// IoError (carrying the path) when the file cannot be written.
void emit_records(const RecordTable& table, OutputFormat format, const std::filesystem::path& path);

}  // namespace gpe
