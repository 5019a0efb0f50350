#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "pdtab/dataio/dataset.hpp"

namespace pdtab::data {

// Reads a comma-separated table with a header row. Rows keep file order.
//   SchemaError     a schema column is absent from the header
//   ParseError      a cell is not a number, or a label is not 0/1 (row/column are 1-based, header = row 1)
//   IngestionError  the file is missing, empty or has no data rows
Dataset load_csv(const std::filesystem::path& path, const RecordSchema& schema);
Dataset read_csv(std::istream& in, const RecordSchema& schema, const std::string& source = "<stream>");

}  // namespace pdtab::data
