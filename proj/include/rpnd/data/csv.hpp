#ifndef RPND_DATA_CSV_HPP
#define RPND_DATA_CSV_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rpnd/data/dataset.hpp"
#include "rpnd/error.hpp"
#include "rpnd/text.hpp"

namespace rpnd {

namespace csv_detail {

struct Row {
  std::size_t line;
  std::vector<std::string> fields;
};

// RFC 4180 style: comma separated, optional double quotes, "" escapes a
// quote, quoted fields may span lines. Blank lines are skipped.
inline std::vector<Row> split_records(std::string_view s) {
  std::vector<Row> rows;
  Row row{1, {}};
  std::string field;
  bool quoted = false, any = false;
  std::size_t line = 1;
  auto end_record = [&] {
    if (any || !field.empty() || !row.fields.empty()) {
      row.fields.push_back(std::move(field));
      rows.push_back(std::move(row));
    }
    field.clear();
    row = Row{line + 1, {}};
    any = false;
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char ch = s[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < s.size() && s[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      row.fields.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (ch == '\n') {
      end_record();
      ++line;
    } else if (ch != '\r') {
      field.push_back(ch);
      if (!std::isspace(static_cast<unsigned char>(ch))) any = true;
    }
  }
  if (quoted) throw SyntaxError(line, "unterminated quoted field");
  end_record();
  for (auto& r : rows) {
    for (auto& f : r.fields) f = std::string(text::trim(f));
  }
  return rows;
}

}  // namespace csv_detail

/// Builds a dataset from comma-separated text. A column is numeric iff every
/// value in it parses as a real number; the class column is always nominal.
/// Nominal values are ordered by first appearance.
inline Dataset parse_csv(std::string_view input, std::size_t class_column, bool header) {
  auto rows = csv_detail::split_records(input);
  std::vector<std::string> names;
  if (header) {
    if (rows.empty()) throw EmptyInput("CSV input has no header row");
    names = rows.front().fields;
    rows.erase(rows.begin());
  }
  if (rows.empty()) throw EmptyInput("CSV input has no data rows");
  const std::size_t width = header ? names.size() : rows.front().fields.size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].fields.size() != width) {
      throw SyntaxError(rows[r].line, "row " + std::to_string(r + 1) + " has " +
                                          std::to_string(rows[r].fields.size()) + " fields, expected " +
                                          std::to_string(width));
    }
  }
  if (class_column >= width) {
    throw InvalidArgument("class column " + std::to_string(class_column) + " out of range");
  }
  if (!header) {
    for (std::size_t j = 0; j < width; ++j) names.push_back("col" + std::to_string(j + 1));
  }

  std::vector<AttributeSpec> attributes;
  std::vector<std::unordered_map<std::string, std::size_t>> lookup(width);
  for (std::size_t j = 0; j < width; ++j) {
    bool numeric = j != class_column;
    for (std::size_t r = 0; numeric && r < rows.size(); ++r) {
      const std::string& f = rows[r].fields[j];
      if (f == "?") throw MissingValue(rows[r].line);
      numeric = text::parse_double(f).has_value();
    }
    if (numeric) {
      attributes.push_back(AttributeSpec::numeric(names[j]));
      continue;
    }
    std::vector<std::string> values;
    for (const auto& row : rows) {
      const std::string& f = row.fields[j];
      if (f == "?") throw MissingValue(row.line);
      if (lookup[j].emplace(f, values.size()).second) values.push_back(f);
    }
    attributes.push_back(AttributeSpec::nominal(names[j], std::move(values)));
  }

  Dataset d("csv", std::move(attributes), class_column);
  for (const auto& row : rows) {
    Instance x;
    x.values.resize(width);
    for (std::size_t j = 0; j < width; ++j) {
      x.values[j] = d.attribute(j).is_nominal() ? static_cast<double>(lookup[j].at(row.fields[j]))
                                                : *text::parse_double(row.fields[j]);
    }
    d.add(std::move(x));
  }
  return d;
}

}  // namespace rpnd

#endif  // RPND_DATA_CSV_HPP
