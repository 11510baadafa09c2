#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "json.hpp"

#include "proxkit/dense_matrix.hpp"
#include "proxkit/errors.hpp"
#include "proxkit/oracle.hpp"

namespace proxkit {

/// A matrix together with where it came from ("stdin" or a path).
struct MatrixDocument {
  DenseMatrix matrix;
  std::string source;
};

/// Everything a CLI run reports about one operator invocation. Field
/// meanings for entry-wise operations: the sigma lists stay empty and
/// rank_out is zero; cardinality_out is always the exact nonzero count of
/// the solution.
struct RunReport {
  std::string operation;
  std::vector<std::pair<std::string, double>> params;
  double effective_lambda = 0.0;
  double objective = 0.0;
  std::vector<double> sigma_in;
  std::vector<double> sigma_out;
  std::size_t rank_out = 0;
  std::size_t cardinality_out = 0;
  std::optional<OracleReport> oracle;
};

namespace detail {

inline double parse_field(std::string_view field, std::size_t line,
                          std::size_t column) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || field.empty()) {
    throw ParseError("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": not a finite number: '" +
                         std::string(field) + "'",
                     line, column);
  }
  if (!std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": non-finite value rejected",
                     line, column);
  }
  return value;
}

/// Shortest decimal form that parses back to the same bits.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace detail

/// Parse a headerless CSV matrix: comma-separated decimal fields, newline
/// rows (\n or \r\n), a blank trailing line allowed. Ragged rows and
/// non-numeric or non-finite fields raise ParseError with 1-based positions.
inline MatrixDocument read_csv(std::istream& in, std::string source = "stdin") {
  std::vector<double> entries;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) {
      // Only acceptable as a trailing blank line.
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw ParseError("line " + std::to_string(line_no) + ": blank line",
                       line_no, 0);
    }

    std::size_t col_no = 0;
    std::string_view rest(raw);
    while (true) {
      ++col_no;
      const std::size_t comma = rest.find(',');
      const std::string_view field = rest.substr(0, comma);
      entries.push_back(detail::parse_field(field, line_no, col_no));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }

    ++rows;
    if (rows == 1) {
      cols = col_no;
    } else if (col_no != cols) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(cols) + " fields, got " +
                           std::to_string(col_no),
                       line_no, 0);
    }
  }
  if (rows == 0) {
    throw ParseError("empty input: no matrix rows", 1, 0);
  }
  return MatrixDocument{DenseMatrix(rows, cols, std::move(entries)),
                        std::move(source)};
}

/// Write a matrix as headerless CSV with shortest round-trippable entries
/// and \n line endings. read_csv(write_csv(m)) reproduces m bit-exactly.
inline void write_csv(const DenseMatrix& m, std::ostream& out) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out.put(',');
      out << detail::format_double(m(i, j));
    }
    out.put('\n');
  }
  if (!out) throw IoError("write_csv: stream failure");
}

/// Singular values, one per line, same number format as write_csv.
inline void write_values(const std::vector<double>& values, std::ostream& out) {
  for (double v : values) {
    out << detail::format_double(v) << '\n';
  }
  if (!out) throw IoError("write_values: stream failure");
}

/// Serialize a run report as a single JSON object. The key order is frozen
/// so golden files can diff bytes; numbers use round-trip precision.
inline void write_report(const RunReport& r, std::ostream& out) {
  nlohmann::ordered_json j;
  j["operation"] = r.operation;
  nlohmann::ordered_json params(nlohmann::json::value_t::object);
  for (const auto& [name, value] : r.params) params[name] = value;
  j["params"] = std::move(params);
  j["effective_lambda"] = r.effective_lambda;
  j["objective"] = r.objective;
  j["sigma_in"] = r.sigma_in;
  j["sigma_out"] = r.sigma_out;
  j["rank_out"] = r.rank_out;
  j["cardinality_out"] = r.cardinality_out;
  if (r.oracle.has_value()) {
    j["oracle"] = nlohmann::ordered_json{
        {"candidate_objective", r.oracle->candidate_objective},
        {"best_competitor_objective", r.oracle->best_competitor_objective},
        {"margin", r.oracle->margin},
        {"competitors_tested", r.oracle->competitors_tested},
        {"verdict", r.oracle->pass ? "pass" : "fail"},
        {"tolerance", r.oracle->tolerance}};
  } else {
    j["oracle"] = nullptr;
  }
  out << j.dump() << '\n';
  if (!out) throw IoError("write_report: stream failure");
}

}  // namespace proxkit
