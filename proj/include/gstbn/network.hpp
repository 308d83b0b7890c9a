#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gstbn/field.hpp"
#include "gstbn/geo.hpp"

namespace gstbn {

using SensorId = std::int64_t;
using RoIId = std::int64_t;
using Timestamp = std::int64_t;

enum class Membership : std::uint8_t { federal, ldn };
enum class Mobility : std::uint8_t { stationary, mobile };
enum class OperationalStatus : std::uint8_t { active, inactive };

std::string_view to_string(Membership m) noexcept;
std::string_view to_string(Mobility m) noexcept;
std::string_view to_string(OperationalStatus s) noexcept;

// Observer node. Mobile platforms are placed at their catalog coordinate.
struct SensorNode {
    SensorId id = 0;
    Membership membership = Membership::federal;
    std::string data_source;
    std::string platform;
    Mobility mobility = Mobility::stationary;
    GeoCoord geolocation;
    OperationalStatus status = OperationalStatus::active;
    ObservationSet observations;

    bool active() const noexcept { return status == OperationalStatus::active; }

    friend bool operator==(const SensorNode&, const SensorNode&) = default;
};

// Observable node: one grid location with its residual payload per interval end.
struct RoIEventNode {
    RoIId id = 0;
    GeoCoord geolocation;
    std::map<Timestamp, std::vector<VariableResidual>> snapshots;

    // Sum of stored residuals at `t` (0 when absent).
    double roi_value(Timestamp t) const;
    ObservationSet variables(Timestamp t) const;
};

struct GstbnEdge {
    RoIId roi_id = 0;
    SensorId sensor_id = 0;
    double weight_km = 0.0;

    friend bool operator==(const GstbnEdge&, const GstbnEdge&) = default;
};

struct GstbnSnapshot {
    Timestamp timestamp = 0;
    std::vector<SensorId> sensor_ids;  // ascending
    std::vector<RoIId> roi_ids;        // ascending
    std::vector<GstbnEdge> edges;      // one per RoI, ordered by roi_id

    friend bool operator==(const GstbnSnapshot&, const GstbnSnapshot&) = default;
};

struct EdgePolicy {
    EarthModel earth;
    // When set, an RoI may only link to sensors observing one of its contributing variables.
    bool strict_observation_matching = false;
};

// RoI position plus the variables that made it an event.
struct EdgeQuery {
    RoIId roi_id = 0;
    GeoCoord location;
    ObservationSet variables = ObservationSet::all();
};

/// Links every query to its nearest eligible active sensor (ties: lowest id).
/// Output order follows the query order. Throws NoObserversError when some
/// query has no eligible sensor.
std::vector<GstbnEdge> build_edges(std::span<const EdgeQuery> rois, std::span<const SensorNode> sensors,
                                   const EdgePolicy& policy);

std::vector<GstbnEdge> build_edges(std::span<const RoIEventNode> rois, std::span<const SensorNode> sensors,
                                   const EarthModel& earth);

/// Ordered sequence of bipartite snapshots sharing one sensor catalog and
/// one RoI registry. Immutable; add_sensor/remove_sensor return new values.
class TemporalGstbn {
public:
    // Builds every snapshot's edges. `timestamps` must be strictly increasing
    // and must include every timestamp referenced by an RoI.
    TemporalGstbn(std::vector<SensorNode> catalog, std::vector<RoIEventNode> rois,
                  std::vector<Timestamp> timestamps, EdgePolicy policy = {});

    const std::vector<GstbnSnapshot>& snapshots() const noexcept { return snapshots_; }
    const std::vector<SensorNode>& sensor_catalog() const noexcept { return catalog_; }
    const std::vector<RoIEventNode>& roi_registry() const noexcept { return rois_; }
    const EdgePolicy& policy() const noexcept { return policy_; }

    std::vector<SensorNode> active_sensors() const;
    const SensorNode* find_sensor(SensorId id) const noexcept;
    const RoIEventNode* find_roi(RoIId id) const noexcept;
    const GstbnSnapshot* find_snapshot(Timestamp t) const noexcept;

    friend TemporalGstbn add_sensor(const TemporalGstbn& net, const GeoCoord& candidate);

private:
    TemporalGstbn() = default;
    void rebuild_edges();

    std::vector<SensorNode> catalog_;  // ascending id
    std::vector<RoIEventNode> rois_;   // ascending id
    std::vector<GstbnSnapshot> snapshots_;
    EdgePolicy policy_;
};

struct RoIOptions {
    RoIThreshold threshold;
    ResidualScales scales;
};

using SnapshotSeries = std::map<ObservationKind, std::vector<FieldSnapshot>>;

/// Residuals for every consecutive timestamp pair, RoI extraction, and edge
/// construction. RoI ids are grid cell indices, so a cell that is an event in
/// several intervals keeps one node with several snapshot entries.
TemporalGstbn build_temporal_gstbn(const SnapshotSeries& series, std::vector<SensorNode> catalog,
                                   const RoIOptions& options = {}, const EdgePolicy& policy = {});

/// Inserts an active sensor observing every variable at `candidate`, with id
/// one above the largest catalog id, and relinks RoIs that are now closer to it.
TemporalGstbn add_sensor(const TemporalGstbn& net, const GeoCoord& candidate);

/// Marks an active sensor inactive and relinks every snapshot without it.
TemporalGstbn remove_sensor(const TemporalGstbn& net, SensorId id);

}  // namespace gstbn
