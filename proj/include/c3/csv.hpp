#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "c3/errors.hpp"

namespace c3 {

// RFC-4180 CSV. Fields containing comma, quote or newline are quoted;
// quotes are doubled. Both LF and CRLF row endings are accepted on read,
// LF is written. Quoted fields may span lines.

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  }
};

namespace detail {

inline void csv_strip_bom(std::string& s) {
  if (s.size() >= 3 && s[0] == '\xEF' && s[1] == '\xBB' && s[2] == '\xBF')
    s.erase(0, 3);
}

}  // namespace detail

// Parses full CSV content. Throws DataError on structurally broken input
// (unterminated quote). Ragged rows are preserved; callers decide whether a
// wrong field count is a row error.
inline CsvTable parse_csv(const std::string& content_in) {
  std::string content = content_in;
  detail::csv_strip_bom(content);

  CsvTable table;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_data = false;

  auto end_field = [&] {
    row.push_back(field);
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    if (table.header.empty())
      table.header = row;
    else
      table.rows.push_back(row);
    row.clear();
    row_has_data = false;
  };

  for (std::size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      row_has_data = true;
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_data = true;
        break;
      case ',':
        end_field();
        row_has_data = true;
        break;
      case '\r':
        if (i + 1 < content.size() && content[i + 1] == '\n') ++i;
        end_row();
        break;
      case '\n':
        end_row();
        break;
      default:
        field.push_back(c);
        row_has_data = true;
        break;
    }
  }
  if (in_quotes) throw DataError("csv: unterminated quoted field");
  if (row_has_data || !field.empty() || !row.empty()) end_row();
  return table;
}

inline CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  CsvTable t = parse_csv(ss.str());
  if (t.header.empty()) throw DataError("csv: empty file (header row required): " + path);
  return t;
}

inline std::string csv_escape(const std::string& field) {
  bool needs_quote = false;
  for (char c : field)
    if (c == ',' || c == '"' || c == '\n' || c == '\r') { needs_quote = true; break; }
  if (!needs_quote) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line.push_back(',');
    line += csv_escape(fields[i]);
  }
  line.push_back('\n');
  return line;
}

inline void write_csv_file(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write file: " + path);
  out << csv_row(table.header);
  for (const auto& r : table.rows) out << csv_row(r);
}

}  // namespace c3
