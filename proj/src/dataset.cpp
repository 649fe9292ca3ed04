#include "riskfs/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "riskfs/csv.hpp"
#include "riskfs/rng.hpp"

namespace riskfs {

namespace {

[[noreturn]] void fail(const std::string& message) { throw std::runtime_error(message); }

} // namespace

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(devices.size(), 0);
    for (int label : labels) counts[static_cast<std::size_t>(label)]++;
    return counts;
}

std::size_t SelectionVector::count() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

std::string SelectionVector::to_bitstring() const {
    std::string bits(mask.size(), '0');
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) bits[i] = '1';
    return bits;
}

SelectionVector SelectionVector::from_bitstring(std::string_view bits) {
    std::vector<std::uint8_t> mask(bits.size(), 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            mask[i] = 1;
        else if (bits[i] != '0')
            fail("bad bitstring character: " + std::string(1, bits[i]));
    }
    return SelectionVector(std::move(mask));
}

std::vector<DeviceLabel> load_devices(std::istream& devices_source) {
    const auto rows = csv::read_rows(devices_source);
    if (rows.empty()) fail("devices: empty input");

    const auto& header = rows.front().cells;
    if (header.size() != 3 || csv::normalize(header[0]) != "label" ||
        csv::normalize(header[1]) != "type" || csv::normalize(header[2]) != "brand")
        fail("devices: expected header \"label,type,brand\"");

    std::vector<DeviceLabel> devices;
    std::unordered_map<std::string, std::size_t> seen; // normalized label -> row
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.cells.size() != 3)
            fail("devices: row " + std::to_string(row.line_no) + ": expected 3 columns, got " +
                 std::to_string(row.cells.size()));
        DeviceLabel device;
        device.id = static_cast<int>(devices.size());
        device.display_name = row.cells[0];
        device.type_name = row.cells[1];
        device.brand = row.cells[2];
        if (device.display_name.empty())
            fail("devices: row " + std::to_string(row.line_no) + ": empty label");
        if (device.type_name.empty())
            fail("devices: row " + std::to_string(row.line_no) + ": empty type");
        if (device.brand.empty())
            fail("devices: row " + std::to_string(row.line_no) + ": empty brand");
        const std::string key = csv::normalize(device.display_name);
        if (!seen.emplace(key, row.line_no).second)
            fail("devices: row " + std::to_string(row.line_no) + ": duplicate label \"" +
                 device.display_name + "\"");
        devices.push_back(std::move(device));
    }
    if (devices.empty()) fail("devices: no device rows");
    return devices;
}

Dataset load_dataset(std::istream& features_source, std::vector<DeviceLabel> devices) {
    const auto rows = csv::read_rows(features_source);
    if (rows.empty()) fail("features: empty input");

    const auto& header = rows.front().cells;
    if (header.size() < 2 || csv::normalize(header.back()) != "label")
        fail("features: header must list feature names plus a final \"label\" column");
    const std::size_t m = header.size() - 1;

    Dataset dataset;
    dataset.feature_names.assign(header.begin(), header.end() - 1);
    std::unordered_map<std::string, std::size_t> name_seen;
    for (std::size_t c = 0; c < m; ++c) {
        if (dataset.feature_names[c].empty())
            fail("features: header column " + std::to_string(c + 1) + ": empty feature name");
        if (!name_seen.emplace(csv::normalize(dataset.feature_names[c]), c).second)
            fail("features: header column " + std::to_string(c + 1) + ": duplicate feature name \"" +
                 dataset.feature_names[c] + "\"");
    }
    dataset.devices = std::move(devices);

    std::unordered_map<std::string, int> label_ids;
    for (const auto& device : dataset.devices)
        label_ids.emplace(csv::normalize(device.display_name), device.id);

    const std::size_t n_data_rows = rows.size() - 1;
    dataset.features = Matrix(n_data_rows, m);
    dataset.labels.reserve(n_data_rows);

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.cells.size() != m + 1)
            fail("features: row " + std::to_string(row.line_no) + ": expected " +
                 std::to_string(m + 1) + " columns, got " + std::to_string(row.cells.size()));
        for (std::size_t c = 0; c < m; ++c) {
            double value = 0.0;
            try {
                value = csv::parse_double(row.cells[c]);
            } catch (const std::exception&) {
                fail("features: row " + std::to_string(row.line_no) + ", column " +
                     std::to_string(c + 1) + ": value \"" + row.cells[c] +
                     "\" is not a finite number");
            }
            if (!std::isfinite(value))
                fail("features: row " + std::to_string(row.line_no) + ", column " +
                     std::to_string(c + 1) + ": value \"" + row.cells[c] +
                     "\" is not a finite number");
            dataset.features(r - 1, c) = value;
        }
        const auto it = label_ids.find(csv::normalize(row.cells[m]));
        if (it == label_ids.end())
            fail("features: row " + std::to_string(row.line_no) + ": label \"" + row.cells[m] +
                 "\" has no device metadata");
        dataset.labels.push_back(it->second);
    }

    const auto counts = dataset.class_counts();
    for (std::size_t d = 0; d < counts.size(); ++d)
        if (counts[d] < 2)
            fail("features: class \"" + dataset.devices[d].display_name + "\" has " +
                 std::to_string(counts[d]) + " rows; at least 2 are required");
    return dataset;
}

Dataset load_dataset(std::istream& features_source, std::istream& devices_source) {
    return load_dataset(features_source, load_devices(devices_source));
}

Split stratified_split(const Dataset& dataset, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must be in (0, 1)");

    std::vector<std::vector<std::size_t>> per_class(dataset.n_classes());
    for (std::size_t r = 0; r < dataset.n_rows(); ++r)
        per_class[static_cast<std::size_t>(dataset.labels[r])].push_back(r);

    Split split;
    split.seed = seed;
    split.train_fraction = train_fraction;
    Rng rng(seed);
    for (std::size_t d = 0; d < per_class.size(); ++d) {
        auto& class_rows = per_class[d];
        if (class_rows.size() < 2)
            fail("stratified_split: class \"" + dataset.devices[d].display_name +
                 "\" has fewer than 2 rows");
        rng.shuffle(class_rows);
        const auto count = class_rows.size();
        auto n_train = static_cast<std::size_t>(
            std::ceil(train_fraction * static_cast<double>(count)));
        n_train = std::min(n_train, count - 1); // leave at least one test row
        n_train = std::max<std::size_t>(n_train, 1);
        split.train_rows.insert(split.train_rows.end(), class_rows.begin(),
                                class_rows.begin() + static_cast<std::ptrdiff_t>(n_train));
        split.test_rows.insert(split.test_rows.end(),
                               class_rows.begin() + static_cast<std::ptrdiff_t>(n_train),
                               class_rows.end());
    }
    return split;
}

std::pair<Matrix, std::vector<int>> project(const Dataset& dataset,
                                            std::span<const std::size_t> row_indices,
                                            const SelectionVector& selection) {
    if (selection.size() != dataset.n_features())
        throw std::invalid_argument("selection length does not match feature count");

    std::vector<std::size_t> columns;
    for (std::size_t c = 0; c < selection.size(); ++c)
        if (selection[c]) columns.push_back(c);

    Matrix projected(row_indices.size(), columns.size());
    std::vector<int> labels(row_indices.size());
    for (std::size_t i = 0; i < row_indices.size(); ++i) {
        const std::size_t r = row_indices[i];
        for (std::size_t j = 0; j < columns.size(); ++j)
            projected(i, j) = dataset.features(r, columns[j]);
        labels[i] = dataset.labels[r];
    }
    return {std::move(projected), std::move(labels)};
}

void write_features_csv(std::ostream& out, const Dataset& dataset) {
    for (const auto& name : dataset.feature_names) out << name << ',';
    out << "label\n";
    for (std::size_t r = 0; r < dataset.n_rows(); ++r) {
        for (std::size_t c = 0; c < dataset.n_features(); ++c)
            out << csv::format_double(dataset.features(r, c)) << ',';
        out << dataset.devices[static_cast<std::size_t>(dataset.labels[r])].display_name << '\n';
    }
}

void write_devices_csv(std::ostream& out, std::span<const DeviceLabel> devices) {
    out << "label,type,brand\n";
    for (const auto& device : devices)
        out << device.display_name << ',' << device.type_name << ',' << device.brand << '\n';
}

} // namespace riskfs
