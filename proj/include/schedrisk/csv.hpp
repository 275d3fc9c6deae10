#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace schedrisk {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

/// Nine significant digits, "%.9g".
std::string csv_number(double value);

/// RFC 4180 text: CRLF-free ("\n" line ends), fields quoted when they hold a
/// comma, quote or line break. Throws ShapeMismatch on ragged rows.
std::string to_csv(const CsvTable& table);

/// Inverse of to_csv; the first record is the header. Throws Syntax.
CsvTable parse_csv(std::string_view text, std::string_view source = "<input>");

void write_csv(const CsvTable& table, const std::filesystem::path& path);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace schedrisk
