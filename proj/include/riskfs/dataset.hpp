#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "riskfs/matrix.hpp"

namespace riskfs {

// One device class. display_name is the unique label string used in the
// input files; type_name and brand drive the misclassification loss rule
// and are compared case-insensitively after trimming.
struct DeviceLabel {
    int id = 0; // dense, 0-based, assigned in insertion order
    std::string type_name;
    std::string brand;
    std::string display_name;
};

// Labeled feature matrix plus device metadata. Immutable after load.
struct Dataset {
    Matrix features;                        // n_rows x m
    std::vector<int> labels;                // per-row device id
    std::vector<std::string> feature_names; // m entries, file order
    std::vector<DeviceLabel> devices;       // n entries, id order

    std::size_t n_rows() const { return features.rows(); }
    std::size_t n_features() const { return features.cols(); }
    std::size_t n_classes() const { return devices.size(); }

    std::vector<std::size_t> class_counts() const;
};

// Deterministic stratified partition of dataset rows.
struct Split {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    std::uint64_t seed = 0;
    double train_fraction = 0.0;
};

// Binary mask over the m candidate features; the optimization variable.
struct SelectionVector {
    std::vector<std::uint8_t> mask; // 0/1 per feature

    SelectionVector() = default;
    explicit SelectionVector(std::vector<std::uint8_t> bits) : mask(std::move(bits)) {}

    static SelectionVector zeros(std::size_t m) { return SelectionVector(std::vector<std::uint8_t>(m, 0)); }
    static SelectionVector ones(std::size_t m) { return SelectionVector(std::vector<std::uint8_t>(m, 1)); }

    std::size_t size() const { return mask.size(); }
    bool operator[](std::size_t i) const { return mask[i] != 0; }
    std::size_t count() const;
    std::string to_bitstring() const;
    static SelectionVector from_bitstring(std::string_view bits);

    bool operator==(const SelectionVector&) const = default;
};

// devices.csv: header "label,type,brand". Labels must be unique
// (case-insensitive), types and brands non-empty.
std::vector<DeviceLabel> load_devices(std::istream& devices_source);

// features.csv: header of feature names plus a final literal "label" column.
// Validates shape, finiteness, label references, and >= 2 rows per class.
// Errors name the 1-based file row/column.
Dataset load_dataset(std::istream& features_source, std::vector<DeviceLabel> devices);
Dataset load_dataset(std::istream& features_source, std::istream& devices_source);

// Per-class seeded shuffle; ceil(train_fraction * count) rows to train,
// floored so both sides keep at least one row per class.
Split stratified_split(const Dataset& dataset, double train_fraction, std::uint64_t seed);

// Sub-matrix of the chosen rows restricted to the selected columns. A mask
// with no features yields a 0-column matrix with labels preserved.
std::pair<Matrix, std::vector<int>> project(const Dataset& dataset,
                                            std::span<const std::size_t> row_indices,
                                            const SelectionVector& selection);

// Exact round-trip serialization of the load formats.
void write_features_csv(std::ostream& out, const Dataset& dataset);
void write_devices_csv(std::ostream& out, std::span<const DeviceLabel> devices);

} // namespace riskfs
