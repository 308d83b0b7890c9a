#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <vector>

#include "gstbn/field.hpp"
#include "gstbn/ingest.hpp"
#include "gstbn/network.hpp"

namespace gstbn {

// Gaussian bump (sigma = radius_deg / 2, cut off beyond radius_deg) that is
// added once more to the field at the end of every active interval.
struct Hotspot {
    GeoCoord center;
    double amplitude = 1.0;
    double radius_deg = 0.5;
    std::optional<std::set<std::size_t>> active_intervals;  // nullopt: every interval
    std::optional<ObservationSet> variables;                // nullopt: every scenario variable
};

struct ScenarioSpec {
    GridSpec grid;
    std::vector<Timestamp> timestamps;
    std::vector<ObservationKind> variables{ObservationKind::temperature};
    double background = 20.0;
    std::vector<Hotspot> hotspots;
    double background_noise_amplitude = 0.0;  // uniform in [-a, a] per cell per timestamp
    std::vector<GeoCoord> sensors;
    std::vector<std::size_t> land_cells;  // missing in every frame
    double threshold = RoIThreshold::kDefault;
    std::uint64_t seed = 0;
};

struct ManifestInterval {
    Timestamp t_begin = 0;
    Timestamp t_end = 0;
    std::vector<std::size_t> roi_cells;  // ascending
};

struct Scenario {
    SnapshotSeries series;
    std::vector<SensorNode> sensors;
    std::vector<ManifestInterval> manifest;
};

/// Throws ParameterError unless every hotspot satisfies amplitude^2 >= 2 * threshold,
/// noise^2 < threshold / 4, and the rest of the spec is well formed.
void validate(const ScenarioSpec& spec);

/// Builds the fields, a catalog (ids 1..n, active, observing the scenario
/// variables), and the manifest of cells whose thresholded residual sum is
/// positive, computed directly from the generated values.
Scenario generate_scenario(const ScenarioSpec& spec);

ScenarioSpec scenario_spec_from_json(const Json& doc);
Json manifest_to_json(const ScenarioSpec& spec, const Scenario& scenario);

// Writes grids/<variable>_<timestamp>.grid, sensors.csv and manifest.json under `dir`.
void write_scenario(const ScenarioSpec& spec, const Scenario& scenario, const std::filesystem::path& dir);

}  // namespace gstbn
