#include "gstbn/metrics.hpp"

#include <limits>

#include "gstbn/error.hpp"

namespace gstbn {

double static_coverage(const GstbnSnapshot& snapshot) noexcept {
    double sum = 0.0;
    for (const auto& e : snapshot.edges) sum += e.weight_km;
    return sum;
}

double total_temporal_coverage(const TemporalGstbn& net) {
    if (net.snapshots().empty()) throw StructuralError("network has no snapshots");
    double total = 0.0;
    for (const auto& snap : net.snapshots()) total += static_coverage(snap);
    return total;
}

double average_temporal_coverage(const TemporalGstbn& net) {
    return total_temporal_coverage(net) / static_cast<double>(net.snapshots().size());
}

CoverageReport coverage_report(const TemporalGstbn& net) {
    CoverageReport report;
    report.total_temporal_coverage_km = total_temporal_coverage(net);
    report.n_timesteps = net.snapshots().size();
    report.average_temporal_coverage_km = average_temporal_coverage(net);
    for (const auto& snap : net.snapshots()) {
        report.per_snapshot.push_back({snap.timestamp, static_coverage(snap)});
    }
    return report;
}

CentralityReport degree_centrality(const TemporalGstbn& net) {
    CentralityReport report;
    for (const auto& s : net.sensor_catalog()) {
        if (s.active()) report.overall[s.id] = 0;
    }
    for (const auto& snap : net.snapshots()) {
        auto& degrees = report.static_per_snapshot[snap.timestamp];
        for (SensorId id : snap.sensor_ids) degrees[id] = 0;
        for (const auto& e : snap.edges) {
            ++degrees[e.sensor_id];
            ++report.overall[e.sensor_id];
        }
    }
    for (const auto& [id, degree] : report.overall) ++report.distribution[degree];
    return report;
}

RobustnessReport evaluate_robustness(const TemporalGstbn& net, std::size_t k) {
    std::size_t active = 0;
    for (const auto& s : net.sensor_catalog()) {
        if (s.active()) ++active;
    }
    if (k < 1 || k >= active) {
        throw ParameterError("robustness removal count must be in [1, " + std::to_string(active) +
                             ") but was " + std::to_string(k));
    }

    RobustnessReport report;
    report.coverage_before_km = average_temporal_coverage(net);

    TemporalGstbn current = net;
    for (std::size_t round = 0; round < k; ++round) {
        const auto centrality = degree_centrality(current);
        SensorId victim = centrality.overall.begin()->first;
        std::size_t best = centrality.overall.begin()->second;
        // std::map iterates ids in ascending order; strict > keeps the lowest id on ties.
        for (const auto& [id, degree] : centrality.overall) {
            if (degree > best) {
                best = degree;
                victim = id;
            }
        }
        current = remove_sensor(current, victim);
        report.removed_sensor_ids.push_back(victim);
    }

    report.coverage_after_km = average_temporal_coverage(current);
    if (report.coverage_before_km > 0.0) {
        report.relative_increase = report.coverage_after_km / report.coverage_before_km - 1.0;
    } else {
        report.relative_increase =
            report.coverage_after_km > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return report;
}

}  // namespace gstbn
