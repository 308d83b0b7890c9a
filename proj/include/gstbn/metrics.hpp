#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "gstbn/network.hpp"

namespace gstbn {

struct SnapshotCoverage {
    Timestamp timestamp = 0;
    double static_coverage_km = 0.0;
};

struct CoverageReport {
    std::vector<SnapshotCoverage> per_snapshot;
    double total_temporal_coverage_km = 0.0;
    double average_temporal_coverage_km = 0.0;
    std::size_t n_timesteps = 0;
};

struct CentralityReport {
    std::map<Timestamp, std::map<SensorId, std::size_t>> static_per_snapshot;
    std::map<SensorId, std::size_t> overall;
    // degree -> number of active sensors with that overall degree
    std::map<std::size_t, std::size_t> distribution;
};

struct RobustnessReport {
    std::vector<SensorId> removed_sensor_ids;
    double coverage_before_km = 0.0;
    double coverage_after_km = 0.0;
    // coverage_after / coverage_before - 1. Zero when both are zero and
    // +infinity when only the baseline is zero.
    double relative_increase = 0.0;
};

// Sum of edge weights, in edge order. Lower is better.
double static_coverage(const GstbnSnapshot& snapshot) noexcept;

// Both throw StructuralError on a network with no snapshots.
double total_temporal_coverage(const TemporalGstbn& net);
double average_temporal_coverage(const TemporalGstbn& net);

CoverageReport coverage_report(const TemporalGstbn& net);

/// Per-snapshot and overall degree of every active sensor (zero-degree
/// sensors included) plus the histogram of overall degrees.
CentralityReport degree_centrality(const TemporalGstbn& net);

/// Removes the sensor with the highest overall degree (ties: lowest id) k
/// times, relinking after each removal, and compares average temporal
/// coverage before and after. Requires 1 <= k < active sensor count.
RobustnessReport evaluate_robustness(const TemporalGstbn& net, std::size_t k);

}  // namespace gstbn
