#include "pdtab/dataio/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <unordered_map>

#include "pdtab/errors.hpp"

namespace pdtab::data {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                              : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_double(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

}  // namespace

Dataset read_csv(std::istream& in, const RecordSchema& schema, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      have_header = true;
      break;
    }
  }
  if (!have_header) throw IngestionError(source + ": file is empty");
  if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const auto header = split_commas(line);
  std::unordered_map<std::string, std::size_t> column_of;
  for (std::size_t c = 0; c < header.size(); ++c) column_of.emplace(std::string(header[c]), c);
  auto locate = [&](const std::string& name) {
    const auto it = column_of.find(name);
    if (it == column_of.end()) throw SchemaError(source + ": missing column '" + name + "'");
    return it->second;
  };
  std::vector<std::size_t> feature_cols;
  for (const auto& f : schema.feature_columns) feature_cols.push_back(locate(f));
  const std::size_t label_col = locate(schema.label_column);
  const std::optional<std::size_t> name_col =
      schema.name_column.empty() ? std::nullopt : std::optional<std::size_t>(locate(schema.name_column));

  Dataset out;
  out.feature_names = schema.feature_columns;
  std::vector<double> values;
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != header.size()) {
      throw ParseError(source + ": line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                           " cells, header has " + std::to_string(header.size()),
                       line_no, cells.size());
    }
    for (std::size_t k = 0; k < feature_cols.size(); ++k) {
      const std::size_t c = feature_cols[k];
      const auto v = parse_double(cells[c]);
      if (!v) {
        throw ParseError(source + ": line " + std::to_string(line_no) + ", column '" +
                             schema.feature_columns[k] + "': cannot parse '" + std::string(cells[c]) + "'",
                         line_no, c + 1);
      }
      values.push_back(*v);
    }
    const auto label = parse_double(cells[label_col]);
    if (!label || (*label != 0.0 && *label != 1.0)) {
      throw ParseError(source + ": line " + std::to_string(line_no) + ", column '" + schema.label_column +
                           "': expected 0 or 1, got '" + std::string(cells[label_col]) + "'",
                       line_no, label_col + 1);
    }
    out.y.push_back(static_cast<int>(*label));
    out.row_ids.push_back(data_row++);
    if (name_col) out.row_names.emplace_back(cells[*name_col]);
  }
  if (out.y.empty()) throw IngestionError(source + ": no data rows after the header");
  out.x = ad::Tensor(ad::Shape{out.y.size(), feature_cols.size()}, std::move(values));
  out.validate();
  return out;
}

Dataset load_csv(const std::filesystem::path& path, const RecordSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError(path.string() + ": cannot open file");
  return read_csv(in, schema, path.string());
}

}  // namespace pdtab::data
