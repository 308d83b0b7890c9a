#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "gstbn/field.hpp"
#include "gstbn/metrics.hpp"
#include "gstbn/network.hpp"
#include "gstbn/placement.hpp"

namespace gstbn {

using Json = nlohmann::ordered_json;

// ---- sensor catalog (CSV) --------------------------------------------------
//
// Header row required. Columns (any order, each exactly once):
//   id, membership, data_source, platform, mobility, lat, lon, status, observations
// `observations` holds pipe-separated kinds, e.g. "temperature|salinity".
// Fields may be double-quoted; "" escapes a quote inside a quoted field.

std::vector<SensorNode> parse_sensor_catalog(const std::filesystem::path& path);
std::vector<SensorNode> parse_sensor_catalog(std::istream& in, const std::string& source_name);
std::string format_sensor_catalog(std::span<const SensorNode> sensors);
void write_sensor_catalog(const std::filesystem::path& path, std::span<const SensorNode> sensors);

// ---- grid snapshots (GSTBN-GRID v1) ---------------------------------------
//
//   GSTBN-GRID v1
//   variable=<kind> timestamp=<epoch-seconds>
//   nlat=<n> nlon=<n> lat0=<f> dlat=<f> lon0=<f> dlon=<f>
//   <nlat rows of nlon space-separated values, NaN for missing>
//
// Rows run from lat0 upwards; numbers are written in shortest round-trip form.

FieldSnapshot parse_grid(std::istream& in, const std::string& source_name);
FieldSnapshot parse_grid_file(const std::filesystem::path& path);
std::string format_grid(const FieldSnapshot& snapshot);
void write_grid_file(const std::filesystem::path& path, const FieldSnapshot& snapshot);

// Groups files by variable and sorts each series by timestamp.
SnapshotSeries parse_grid_series(std::span<const std::filesystem::path> paths);

// Expands directories to their *.grid files (sorted by name); files pass through.
std::vector<std::filesystem::path> collect_grid_files(std::span<const std::filesystem::path> inputs);

// ---- GeoJSON ---------------------------------------------------------------

/// FeatureCollection for one snapshot: every catalog sensor (by id), then
/// RoIs (by id), then edges (by roi_id). Throws NotFoundError for an unknown timestamp.
Json export_geojson(const TemporalGstbn& net, Timestamp timestamp);

// Empty when `doc` is a structurally valid FeatureCollection of Point/LineString features.
std::vector<std::string> geojson_problems(const Json& doc);

// ---- reports ---------------------------------------------------------------

struct InputDigest {
    std::string path;
    std::string sha256;
};

struct ReportMeta {
    std::optional<std::uint64_t> seed;
    double threshold = RoIThreshold::kDefault;
    std::vector<InputDigest> inputs;
    std::optional<double> fragile_label_threshold;
};

inline constexpr const char* kToolName = "gstbn";
inline constexpr const char* kToolVersion = "1.0.0";

Json to_json(const CoverageReport& report);
Json to_json(const CentralityReport& report);
Json to_json(const RobustnessReport& report, std::optional<double> fragile_label_threshold = std::nullopt);
Json to_json(const PlacementResult& result);

Json make_report(const CoverageReport& coverage, const CentralityReport& centrality,
                 const RobustnessReport* robustness, const PlacementResult* placement, const ReportMeta& meta);

// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

// CSV with columns sensor,trial_index,lon,lat,score.
std::string format_trace_csv(const PlacementResult& result);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace gstbn
