#include "sentaudit/csv.hpp"

#include "sentaudit/records.hpp"

namespace sentaudit::csv {

std::optional<Row> Reader::next() {
  std::string physical;
  if (!std::getline(in_, physical)) return std::nullopt;
  ++line_;

  Row row;
  row.line = line_;
  std::string field;
  bool in_quotes = false;
  bool quoted_field = false;
  std::size_t i = 0;

  for (;;) {
    if (i == physical.size()) {
      if (!in_quotes) break;
      // Quoted field spans a line break.
      std::string continuation;
      if (!std::getline(in_, continuation)) {
        throw DataError("unterminated quoted field", row.line);
      }
      ++line_;
      field += '\n';
      physical = std::move(continuation);
      i = 0;
      continue;
    }
    const char c = physical[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < physical.size() && physical[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      field += c;
      ++i;
      continue;
    }
    if (c == ',') {
      row.fields.push_back(std::move(field));
      field.clear();
      quoted_field = false;
      ++i;
      continue;
    }
    if (c == '"') {
      if (!field.empty() || quoted_field) {
        throw DataError("stray quote inside unquoted field", row.line);
      }
      in_quotes = true;
      quoted_field = true;
      ++i;
      continue;
    }
    if (c == '\r' && i + 1 == physical.size()) {
      ++i;
      continue;
    }
    if (quoted_field) throw DataError("characters after closing quote", row.line);
    field += c;
    ++i;
  }
  row.fields.push_back(std::move(field));
  return row;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out;
  out.reserve(field.size() + 2);
  out += '"';
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace sentaudit::csv
