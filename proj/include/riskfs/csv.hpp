#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace riskfs::csv {

struct Row {
    std::size_t line_no = 0; // 1-based physical line in the stream
    std::vector<std::string> cells;
};

// Splits a UTF-8 stream on newlines and commas. Cells are trimmed of
// surrounding whitespace; no quoting support (the file formats here never
// need it). Blank lines are skipped.
std::vector<Row> read_rows(std::istream& in);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

// Trim + lowercase, for case-insensitive key comparison.
std::string normalize(std::string_view s);

// Strict double parse of a full cell; throws std::invalid_argument on
// trailing garbage or empty input. Accepts "inf"/"nan" spellings (callers
// that require finite values must check).
double parse_double(std::string_view cell);

// Shortest decimal form that round-trips the exact double (std::to_chars).
std::string format_double(double v);

} // namespace riskfs::csv
