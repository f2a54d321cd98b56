#ifndef RPND_EVAL_REPORT_HPP
#define RPND_EVAL_REPORT_HPP

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rpnd/eval/cv.hpp"
#include "rpnd/eval/ttest.hpp"
#include "rpnd/text.hpp"

namespace rpnd {

/// cells[i][j] holds dataset i under method j; empty when the run failed.
/// Method 0 is the reference the others are tested against.
struct ResultsGrid {
  std::vector<std::string> datasets;
  std::vector<std::string> methods;
  std::vector<std::vector<std::optional<CVResult>>> cells;
};

/// "94.02 ± 2.40" for accuracy 0.94023 and std 0.024.
inline std::string format_cell(double mean, double std) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f ± %.2f", 100.0 * mean, 100.0 * std);
  return buf;
}

/// "•" when the reference is significantly better than this method, "◦"
/// when it is significantly worse, "" otherwise.
inline std::string marker(const TTestOutcome& t) {
  if (!t.significant) return "";
  return t.direction == Direction::gain ? "•" : "◦";
}

namespace report_detail {

inline std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char ch : s) n += (ch & 0xC0) != 0x80 ? 1 : 0;
  return n;
}

inline std::string pad(const std::string& s, std::size_t width, bool right) {
  const std::size_t w = display_width(s);
  const std::string fill(w < width ? width - w : 0, ' ');
  return right ? fill + s : s + fill;
}

inline std::optional<TTestOutcome> compare(const ResultsGrid& g, std::size_t i, std::size_t j) {
  if (j == 0 || !g.cells[i][0] || !g.cells[i][j]) return std::nullopt;
  return corrected_t(*g.cells[i][0], *g.cells[i][j]);
}

inline double mean_train_ms(const CVResult& r) {
  double s = 0.0;
  for (double v : r.train_ms) s += v;
  return r.train_ms.empty() ? 0.0 : s / static_cast<double>(r.train_ms.size());
}

}  // namespace report_detail

/// Datasets as rows, methods as columns, each cell "mean ± std" in percent
/// followed by its significance marker against the first column.
inline std::string format_results_table(const ResultsGrid& g) {
  using report_detail::pad;
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"dataset"});
  for (const auto& m : g.methods) rows[0].push_back(m);
  for (std::size_t i = 0; i < g.datasets.size(); ++i) {
    std::vector<std::string> row{g.datasets[i]};
    for (std::size_t j = 0; j < g.methods.size(); ++j) {
      const auto& cell = g.cells[i][j];
      if (!cell) {
        row.push_back("failed");
        continue;
      }
      std::string s = format_cell(cell->mean, cell->std);
      const auto t = report_detail::compare(g, i, j);
      s += ' ';
      s += t ? marker(*t) : "";
      row.push_back(s);
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> widths(g.methods.size() + 1, 0);
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) widths[j] = std::max(widths[j], report_detail::display_width(row[j]));
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << "  ";
      out << pad(row[j], widths[j], false);
    }
    out << '\n';
  }
  return out.str();
}

/// dataset,method,mean,std,t,significant,time_ms (t empty for the reference).
inline std::string format_results_csv(const ResultsGrid& g, bool with_timing = true) {
  std::ostringstream out;
  out << "dataset,method,mean,std,t,significant,time_ms\n";
  for (std::size_t i = 0; i < g.datasets.size(); ++i) {
    for (std::size_t j = 0; j < g.methods.size(); ++j) {
      const auto& cell = g.cells[i][j];
      out << g.datasets[i] << ',' << g.methods[j] << ',';
      if (!cell) {
        out << ",,,,\n";
        continue;
      }
      out << text::format_double(cell->mean) << ',' << text::format_double(cell->std) << ',';
      const auto t = report_detail::compare(g, i, j);
      if (t) out << text::format_double(t->t) << ',' << (t->significant ? 1 : 0);
      else out << ',';
      out << ',' << text::format_double(with_timing ? report_detail::mean_train_ms(*cell) : 0.0) << '\n';
    }
  }
  return out.str();
}

}  // namespace rpnd

#endif  // RPND_EVAL_REPORT_HPP
