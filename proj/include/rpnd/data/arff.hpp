#ifndef RPND_DATA_ARFF_HPP
#define RPND_DATA_ARFF_HPP

// Reader and writer for the dense subset of ARFF:
//
//   file      := header '@data' row*
//   header    := '@relation' name  ('@attribute' name type)+
//   type      := 'numeric' | 'real' | 'integer' | '{' value (',' value)* '}'
//   row       := value (',' value)*
//
// Keywords are case-insensitive, names and values may be quoted with ' or ",
// and '%' starts a comment that runs to the end of the line. Sparse rows,
// string/date/relational attributes and missing values ('?') are rejected.
// The last declared nominal attribute becomes the class.

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rpnd/data/dataset.hpp"
#include "rpnd/error.hpp"
#include "rpnd/text.hpp"

namespace rpnd {

namespace arff_detail {

inline std::string_view strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quote) {
      if (ch == '\\') ++i;
      else if (ch == quote) quote = 0;
    } else if (ch == '\'' || ch == '"') {
      quote = ch;
    } else if (ch == '%') {
      return line.substr(0, i);
    }
  }
  return line;
}

// Reads a possibly quoted token from the front of `s`; stops at whitespace,
// or at any character in `stops` when unquoted.
inline std::string take_token(std::string_view& s, std::size_t line, std::string_view stops = "") {
  s = text::trim(s);
  std::string out;
  if (!s.empty() && (s.front() == '\'' || s.front() == '"')) {
    const char quote = s.front();
    std::size_t i = 1;
    for (; i < s.size() && s[i] != quote; ++i) {
      if (s[i] == '\\' && i + 1 < s.size()) ++i;
      out.push_back(s[i]);
    }
    if (i >= s.size()) throw SyntaxError(line, "unterminated quote");
    s.remove_prefix(i + 1);
    return out;
  }
  std::size_t i = 0;
  while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) &&
         stops.find(s[i]) == std::string_view::npos) {
    ++i;
  }
  out.assign(s.substr(0, i));
  s.remove_prefix(i);
  return out;
}

// Splits on unquoted commas; each field is trimmed and unquoted.
inline std::vector<std::string> split_fields(std::string_view s, std::size_t line) {
  std::vector<std::string> fields;
  while (true) {
    s = text::trim(s);
    std::string field;
    if (!s.empty() && (s.front() == '\'' || s.front() == '"')) {
      field = take_token(s, line);
      s = text::trim(s);
    } else {
      const std::size_t comma = s.find(',');
      field.assign(text::trim(s.substr(0, comma)));
      s = comma == std::string_view::npos ? std::string_view{} : s.substr(comma);
    }
    fields.push_back(std::move(field));
    if (s.empty()) break;
    if (s.front() != ',') throw SyntaxError(line, "expected ',' between values");
    s.remove_prefix(1);
  }
  return fields;
}

inline bool needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',' || ch == '\'' || ch == '"' ||
        ch == '%' || ch == '{' || ch == '}' || ch == '\\') {
      return true;
    }
  }
  return s == "?";
}

inline std::string quote(const std::string& s) {
  if (!needs_quotes(s)) return s;
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\'' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  out.push_back('\'');
  return out;
}

}  // namespace arff_detail

inline Dataset parse_arff(std::string_view input) {
  using namespace arff_detail;
  std::string relation;
  std::vector<AttributeSpec> attributes;
  std::optional<Dataset> data;
  const auto lines = text::split_lines(input);

  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    std::string_view line = text::trim(strip_comment(lines[n]));
    if (line.empty()) continue;

    if (!data) {
      if (line.front() != '@') throw SyntaxError(line_no, "expected a header keyword");
      std::string_view rest = line;
      const std::string keyword = take_token(rest, line_no);
      if (text::iequals(keyword, "@relation")) {
        relation = take_token(rest, line_no);
      } else if (text::iequals(keyword, "@attribute")) {
        std::string name = take_token(rest, line_no, "{");
        if (name.empty()) throw SyntaxError(line_no, "attribute without a name");
        rest = text::trim(rest);
        if (rest.empty()) throw SyntaxError(line_no, "attribute '" + name + "' has no type");
        if (rest.front() == '{') {
          const std::size_t close = rest.rfind('}');
          if (close == std::string_view::npos) throw SyntaxError(line_no, "unterminated nominal value list");
          if (!text::trim(rest.substr(close + 1)).empty()) {
            throw SyntaxError(line_no, "unexpected text after nominal value list");
          }
          std::vector<std::string> values = split_fields(rest.substr(1, close - 1), line_no);
          if (values.size() == 1 && values.front().empty()) {
            throw SyntaxError(line_no, "empty nominal value list for '" + name + "'");
          }
          for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i].empty()) throw SyntaxError(line_no, "empty nominal value in '" + name + "'");
            for (std::size_t j = 0; j < i; ++j) {
              if (values[i] == values[j]) {
                throw SyntaxError(line_no, "duplicate nominal value '" + values[i] + "' in '" + name + "'");
              }
            }
          }
          attributes.push_back(AttributeSpec::nominal(std::move(name), std::move(values)));
        } else {
          const std::string type = take_token(rest, line_no);
          if (text::iequals(type, "numeric") || text::iequals(type, "real") || text::iequals(type, "integer")) {
            if (!text::trim(rest).empty()) throw SyntaxError(line_no, "unexpected text after type");
            attributes.push_back(AttributeSpec::numeric(std::move(name)));
          } else if (text::iequals(type, "string") || text::iequals(type, "date") ||
                     text::iequals(type, "relational")) {
            throw UnsupportedFeature("line " + std::to_string(line_no) + ": " + type + " attribute '" + name +
                                     "' is not supported");
          } else {
            throw SyntaxError(line_no, "unknown attribute type '" + type + "'");
          }
        }
      } else if (text::iequals(keyword, "@data")) {
        if (attributes.empty()) throw SyntaxError(line_no, "@data before any @attribute");
        std::optional<std::size_t> class_index;
        for (std::size_t j = 0; j < attributes.size(); ++j) {
          if (attributes[j].is_nominal()) class_index = j;
        }
        if (!class_index) throw SyntaxError(line_no, "no nominal attribute to use as the class");
        data.emplace(relation, attributes, *class_index);
      } else if (text::iequals(keyword, "@end")) {
        break;
      } else {
        throw SyntaxError(line_no, "unknown keyword '" + keyword + "'");
      }
      continue;
    }

    if (line.front() == '{') {
      throw UnsupportedFeature("line " + std::to_string(line_no) + ": sparse ARFF rows are not supported");
    }
    const std::vector<std::string> fields = split_fields(line, line_no);
    if (fields.size() != attributes.size()) {
      throw SyntaxError(line_no, "expected " + std::to_string(attributes.size()) + " values, found " +
                                     std::to_string(fields.size()));
    }
    Instance x;
    x.values.resize(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const std::string& f = fields[j];
      if (f == "?") throw MissingValue(line_no);
      if (attributes[j].is_nominal()) {
        const auto idx = attributes[j].index_of(f);
        if (!idx) throw SyntaxError(line_no, "'" + f + "' is not a value of '" + attributes[j].name + "'");
        x.values[j] = static_cast<double>(*idx);
      } else {
        const auto v = text::parse_double(f);
        if (!v) throw SyntaxError(line_no, "'" + f + "' is not a number");
        x.values[j] = *v;
      }
    }
    data->add(std::move(x));
  }
  if (!data) throw SyntaxError(lines.size(), "missing @data section");
  return std::move(*data);
}

inline std::string serialize_arff(const Dataset& d) {
  using arff_detail::quote;
  std::ostringstream out;
  out << "@relation " << quote(d.relation().empty() ? std::string("data") : d.relation()) << "\n\n";
  for (const auto& a : d.attributes()) {
    out << "@attribute " << quote(a.name) << ' ';
    if (a.is_nominal()) {
      out << '{';
      for (std::size_t i = 0; i < a.values.size(); ++i) out << (i ? "," : "") << quote(a.values[i]);
      out << '}';
    } else {
      out << "numeric";
    }
    out << '\n';
  }
  out << "\n@data\n";
  for (const auto& x : d.instances()) {
    for (std::size_t j = 0; j < x.values.size(); ++j) {
      if (j) out << ',';
      const auto& a = d.attribute(j);
      if (a.is_nominal()) out << quote(a.values[static_cast<std::size_t>(x.values[j])]);
      else out << text::format_double(x.values[j]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace rpnd

#endif  // RPND_DATA_ARFF_HPP
