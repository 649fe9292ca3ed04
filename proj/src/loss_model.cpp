#include "riskfs/loss_model.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "riskfs/csv.hpp"

namespace riskfs {

LossMatrix build_default_loss(std::span<const DeviceLabel> devices) {
    const std::size_t n = devices.size();
    std::vector<std::string> types(n);
    std::vector<std::string> brands(n);
    for (std::size_t i = 0; i < n; ++i) {
        types[i] = csv::normalize(devices[i].type_name);
        brands[i] = csv::normalize(devices[i].brand);
    }

    LossMatrix loss;
    loss.values = Matrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double type_miss = types[i] != types[j] ? 1.0 : 0.0;
            const double brand_miss = brands[i] != brands[j] ? 1.0 : 0.0;
            loss.values(i, j) = 2.0 * type_miss + brand_miss;
        }
    }
    return loss;
}

LossMatrix load_loss(std::istream& loss_source, std::span<const DeviceLabel> devices) {
    const auto rows = csv::read_rows(loss_source);
    const std::size_t n = devices.size();
    if (rows.size() != n + 1)
        throw std::runtime_error("loss: expected " + std::to_string(n + 1) + " rows (header + " +
                                 std::to_string(n) + " devices), got " +
                                 std::to_string(rows.size()));

    std::unordered_map<std::string, std::size_t> device_index;
    for (std::size_t d = 0; d < n; ++d)
        device_index.emplace(csv::normalize(devices[d].display_name), d);

    const auto& header = rows.front().cells;
    if (header.size() != n + 1)
        throw std::runtime_error("loss: header must have one leading cell plus " +
                                 std::to_string(n) + " device labels");

    // header[0] is a corner cell and ignored
    std::vector<std::size_t> column_device(n);
    std::vector<std::uint8_t> column_seen(n, 0);
    for (std::size_t c = 1; c <= n; ++c) {
        const auto it = device_index.find(csv::normalize(header[c]));
        if (it == device_index.end())
            throw std::runtime_error("loss: unknown device label \"" + header[c] +
                                     "\" in header");
        if (column_seen[it->second])
            throw std::runtime_error("loss: duplicate device label \"" + header[c] +
                                     "\" in header");
        column_seen[it->second] = 1;
        column_device[c - 1] = it->second;
    }

    LossMatrix loss;
    loss.values = Matrix(n, n, 0.0);
    std::vector<std::uint8_t> row_seen(n, 0);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.cells.size() != n + 1)
            throw std::runtime_error("loss: row " + std::to_string(row.line_no) + ": expected " +
                                     std::to_string(n + 1) + " cells");
        const auto it = device_index.find(csv::normalize(row.cells[0]));
        if (it == device_index.end())
            throw std::runtime_error("loss: row " + std::to_string(row.line_no) +
                                     ": unknown device label \"" + row.cells[0] + "\"");
        if (row_seen[it->second])
            throw std::runtime_error("loss: row " + std::to_string(row.line_no) +
                                     ": duplicate device label \"" + row.cells[0] + "\"");
        row_seen[it->second] = 1;
        const std::size_t i = it->second;
        for (std::size_t c = 1; c <= n; ++c) {
            const std::size_t j = column_device[c - 1];
            const double value = csv::parse_double(row.cells[c]);
            if (!std::isfinite(value) || value < 0.0)
                throw std::runtime_error("loss: row " + std::to_string(row.line_no) +
                                         ": negative or non-finite entry \"" + row.cells[c] +
                                         "\"");
            if (i == j && value != 0.0)
                throw std::runtime_error("loss: row " + std::to_string(row.line_no) +
                                         ": nonzero diagonal for device \"" + row.cells[0] +
                                         "\"");
            loss.values(i, j) = value;
        }
    }
    return loss;
}

} // namespace riskfs
