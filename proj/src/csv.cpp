#include "schedrisk/csv.hpp"

#include <cstdio>

#include "schedrisk/error.hpp"
#include "schedrisk/project_file.hpp"

namespace schedrisk {

std::string csv_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

namespace {

void append_field(std::string& out, std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

void append_record(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    append_field(out, fields[i]);
  }
  out += '\n';
}

}  // namespace

std::string to_csv(const CsvTable& table) {
  std::string out;
  append_record(out, table.header);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.header.size())
      throw Error(ErrorCode::ShapeMismatch,
                  "csv row " + std::to_string(r + 1) + " has " +
                      std::to_string(table.rows[r].size()) + " fields, header has " +
                      std::to_string(table.header.size()));
    append_record(out, table.rows[r]);
  }
  return out;
}

CsvTable parse_csv(std::string_view text, std::string_view source) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
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
    records.push_back(std::move(record));
    record.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      if (field_started)
        throw Error(ErrorCode::Syntax,
                    std::string(source) + ":" + std::to_string(line) + ": stray quote in field");
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') continue;
      end_record();
      ++line;
    } else if (c == '\n') {
      end_record();
      ++line;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted)
    throw Error(ErrorCode::Syntax,
                std::string(source) + ":" + std::to_string(line) + ": unterminated quote");
  if (field_started || !record.empty()) end_record();

  CsvTable table;
  if (records.empty()) return table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) table.rows.push_back(std::move(records[r]));
  return table;
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  write_text_file(path, to_csv(table));
}

CsvTable read_csv(const std::filesystem::path& path) {
  return parse_csv(read_text_file(path), path.string());
}

}  // namespace schedrisk
