#include "riskfs/csv.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>
#include <system_error>

namespace riskfs::csv {

std::string trim(std::string_view s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return std::string(s.substr(begin, end - begin));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

std::string normalize(std::string_view s) { return to_lower(trim(s)); }

std::vector<Row> read_rows(std::istream& in) {
    std::vector<Row> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;

        Row row;
        row.line_no = line_no;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                row.cells.push_back(trim(std::string_view(line).substr(start)));
                break;
            }
            row.cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double parse_double(std::string_view cell) {
    const std::string text = trim(cell);
    if (text.empty()) throw std::invalid_argument("empty numeric cell");
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw std::invalid_argument("not a number: \"" + text + "\"");
    return value;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

} // namespace riskfs::csv
