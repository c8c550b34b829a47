#include "gpe/records.hpp"

#include "gpe/error.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <fstream>

namespace gpe {

void RecordTable::add_row(std::vector<Cell> row)
{
  if (row.size() != columns.size())
    throw ValidationError("records", fmt::format("row has {} cells, header has {}", row.size(), columns.size()));
  rows.push_back(std::move(row));
}

OutputFormat parse_output_format(const std::string& name)
{
  if (name == "csv") return OutputFormat::csv;
  if (name == "jsonl") return OutputFormat::jsonl;
  throw ValidationError("output.format", "unknown format '" + name + "' (expected csv or jsonl)");
}

std::string extension(OutputFormat format) { return format == OutputFormat::csv ? "csv" : "jsonl"; }

std::string format_double(double value)
{
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", value);
}

namespace {

std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_cell(const Cell& cell)
{
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return csv_field(std::get<std::string>(cell));
}

std::string json_cell(const Cell& cell)
{
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return std::isfinite(*d) ? format_double(*d) : "null";
  return nlohmann::json(std::get<std::string>(cell)).dump();
}

}  // namespace

std::string render_records(const RecordTable& table, OutputFormat format)
{
  std::string out;
  if (format == OutputFormat::csv) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + csv_field(table.columns[c]);
    out += '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + csv_cell(row[c]);
      out += '\n';
    }
    return out;
  }
  for (const auto& row : table.rows) {
    out += '{';
    for (std::size_t c = 0; c < row.size(); ++c)
      out += (c ? "," : "") + nlohmann::json(table.columns[c]).dump() + ':' + json_cell(row[c]);
    out += "}\n";
  }
  return out;
}

void emit_records(const RecordTable& table, OutputFormat format, const std::filesystem::path& path)
{
  if (table.rows.empty()) throw ValidationError("records", "nothing to write");
  const std::string text = render_records(table, format);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError(path.string(), "cannot open for writing");
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  file.close();
  if (!file) throw IoError(path.string(), "write failed");
}

}  // namespace gpe
