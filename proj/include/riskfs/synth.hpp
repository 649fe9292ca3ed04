#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riskfs/cost_model.hpp"
#include "riskfs/dataset.hpp"

namespace riskfs {

// Recipe for a seeded synthetic instance. Device d draws its informative
// column c from a Gaussian with mean class_separation * ((d + c) mod
// n_devices); the remaining columns are pure noise centered at zero. Every
// column shares noise_std.
struct SynthSpec {
    std::size_t n_devices = 4;
    std::vector<std::string> types;  // per-device; empty -> cycle of 2 type names
    std::vector<std::string> brands; // per-device; empty -> cycle of 3 brand names
    std::size_t m_features = 10;
    std::size_t n_informative = 4;   // always the leading columns
    std::size_t rows_per_device = 40;
    double class_separation = 3.0;
    double noise_std = 1.0;
    std::uint64_t seed = 0;
    std::vector<double> cost_cycle = {1.0, 2.0, 3.0}; // assigned round-robin

    void validate() const; // throws std::invalid_argument
};

struct SynthData {
    Dataset dataset;
    CostVector costs;
};

// Deterministic in spec.seed; the result always passes dataset validation.
SynthData generate(const SynthSpec& spec);

} // namespace riskfs
