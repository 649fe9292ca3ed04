#pragma once

#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "riskfs/dataset.hpp"
#include "riskfs/loss_model.hpp"

namespace riskfs::testutil {

// The 15 devices from the experimental testbed: <type, brand> pairs with the
// model designation kept only in the display name.
inline std::vector<DeviceLabel> testbed_devices() {
    const struct {
        const char* display;
        const char* type;
        const char* brand;
    } table[] = {
        {"Echo Dot", "Echo Dot", "Amazon"},
        {"Smart Remote", "Smart Remote", "Broadlink"},
        {"Camera (DCS700L)", "Camera", "D-Link"},
        {"Camera (DCS5030L)", "Camera", "D-Link"},
        {"Smart Socket (DSPW215)", "Smart Socket", "D-Link"},
        {"Chromecast", "Chromecast", "Google"},
        {"Home Control", "Home Control", "Google"},
        {"Smart Socket (Oittm)", "Smart Socket", "Oittm"},
        {"Hue Light", "Hue Light", "Phillips"},
        {"Smart Things", "Smart Things", "Samsung"},
        {"Smart Bulb (LB100)", "Smart Bulb", "TP-Link"},
        {"Camera (NCS250)", "Camera", "TP-Link"},
        {"Camera (NCS450)", "Camera", "TP-Link"},
        {"Smart Socket (HS100)", "Smart Socket", "TP-Link"},
        {"Smart Socket (HS110)", "Smart Socket", "TP-Link"},
    };
    std::vector<DeviceLabel> devices;
    int id = 0;
    for (const auto& row : table)
        devices.push_back({id++, row.type, row.brand, row.display});
    return devices;
}

// In-memory dataset with anonymous device metadata: one device per distinct
// label, type "t<label>", brand "b<label>".
inline Dataset make_dataset(std::size_t m, const std::vector<std::vector<double>>& rows,
                            const std::vector<int>& labels) {
    Dataset dataset;
    for (std::size_t c = 0; c < m; ++c) dataset.feature_names.push_back("f" + std::to_string(c));
    int n_classes = 0;
    for (const int label : labels) n_classes = std::max(n_classes, label + 1);
    for (int d = 0; d < n_classes; ++d)
        dataset.devices.push_back({d, "t" + std::to_string(d), "b" + std::to_string(d),
                                   "dev" + std::to_string(d)});
    dataset.features = Matrix(rows.size(), m);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < m; ++c) dataset.features(r, c) = rows[r][c];
    dataset.labels = labels;
    return dataset;
}

// 0/1 loss over the dataset's classes (types and brands all distinct, so the
// default rule would give 3s; this gives the classic identity complement).
inline LossMatrix zero_one_loss(std::size_t n) {
    LossMatrix loss;
    loss.values = Matrix(n, n, 1.0);
    for (std::size_t i = 0; i < n; ++i) loss.values(i, i) = 0.0;
    return loss;
}

inline Split index_split(std::vector<std::size_t> train, std::vector<std::size_t> test) {
    Split split;
    split.train_rows = std::move(train);
    split.test_rows = std::move(test);
    return split;
}

inline std::istringstream stream(const std::string& text) { return std::istringstream(text); }

} // namespace riskfs::testutil
