#include "riskfs/synth.hpp"

#include <stdexcept>

#include "riskfs/rng.hpp"

namespace riskfs {

void SynthSpec::validate() const {
    if (n_devices < 2) throw std::invalid_argument("synth: need at least 2 devices");
    if (m_features == 0) throw std::invalid_argument("synth: need at least 1 feature");
    if (n_informative > m_features)
        throw std::invalid_argument("synth: n_informative exceeds m_features");
    if (rows_per_device < 4) throw std::invalid_argument("synth: need at least 4 rows per device");
    if (!(class_separation > 0.0)) throw std::invalid_argument("synth: separation must be > 0");
    if (!(noise_std > 0.0)) throw std::invalid_argument("synth: noise_std must be > 0");
    if (!types.empty() && types.size() != n_devices)
        throw std::invalid_argument("synth: types list must have one entry per device");
    if (!brands.empty() && brands.size() != n_devices)
        throw std::invalid_argument("synth: brands list must have one entry per device");
    if (cost_cycle.empty()) throw std::invalid_argument("synth: cost cycle must be nonempty");
    for (const double c : cost_cycle)
        if (!(c > 0.0)) throw std::invalid_argument("synth: cost cycle entries must be > 0");
}

SynthData generate(const SynthSpec& spec) {
    spec.validate();

    SynthData out;
    auto& dataset = out.dataset;

    // Default type/brand cycles of coprime lengths, so device pairs cover the
    // full range of the default loss rule once n_devices is large enough.
    static const char* const kTypeCycle[] = {"camera", "socket"};
    static const char* const kBrandCycle[] = {"acme", "bolt", "corda"};
    for (std::size_t d = 0; d < spec.n_devices; ++d) {
        DeviceLabel device;
        device.id = static_cast<int>(d);
        device.display_name = "dev" + std::to_string(d);
        device.type_name = spec.types.empty() ? kTypeCycle[d % 2] : spec.types[d];
        device.brand = spec.brands.empty() ? kBrandCycle[d % 3] : spec.brands[d];
        dataset.devices.push_back(std::move(device));
    }

    dataset.feature_names.reserve(spec.m_features);
    for (std::size_t c = 0; c < spec.m_features; ++c) {
        const bool informative = c < spec.n_informative;
        dataset.feature_names.push_back((informative ? "sig" : "noise") + std::to_string(c));
    }

    const std::size_t n_rows = spec.n_devices * spec.rows_per_device;
    dataset.features = Matrix(n_rows, spec.m_features);
    dataset.labels.reserve(n_rows);

    Rng rng(spec.seed);
    std::size_t r = 0;
    for (std::size_t d = 0; d < spec.n_devices; ++d) {
        for (std::size_t i = 0; i < spec.rows_per_device; ++i, ++r) {
            dataset.labels.push_back(static_cast<int>(d));
            for (std::size_t c = 0; c < spec.m_features; ++c) {
                double mean = 0.0;
                if (c < spec.n_informative)
                    mean = spec.class_separation *
                           static_cast<double>((d + c) % spec.n_devices);
                dataset.features(r, c) = mean + spec.noise_std * rng.gaussian();
            }
        }
    }

    out.costs.costs.reserve(spec.m_features);
    for (std::size_t c = 0; c < spec.m_features; ++c)
        out.costs.costs.push_back(spec.cost_cycle[c % spec.cost_cycle.size()]);
    return out;
}

} // namespace riskfs
