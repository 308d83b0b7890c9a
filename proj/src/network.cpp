#include "gstbn/network.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <optional>
#include <set>

#include "gstbn/error.hpp"
#include "gstbn/parallel.hpp"
#include "nearest_sensor_index.hpp"

namespace gstbn {

std::string_view to_string(Membership m) noexcept { return m == Membership::federal ? "federal" : "ldn"; }

std::string_view to_string(Mobility m) noexcept {
    return m == Mobility::stationary ? "stationary" : "mobile";
}

std::string_view to_string(OperationalStatus s) noexcept {
    return s == OperationalStatus::active ? "active" : "inactive";
}

double RoIEventNode::roi_value(Timestamp t) const {
    const auto it = snapshots.find(t);
    if (it == snapshots.end()) return 0.0;
    double sum = 0.0;
    for (const auto& r : it->second) sum += r.residual;
    return sum;
}

ObservationSet RoIEventNode::variables(Timestamp t) const {
    ObservationSet out;
    const auto it = snapshots.find(t);
    if (it == snapshots.end()) return out;
    for (const auto& r : it->second) out.insert(r.variable);
    return out;
}

namespace {

// Below this many sensors a linear scan beats building a tree.
constexpr std::size_t kIndexThreshold = 8;

// Nearest-sensor lookup over one eligible sensor subset.
class SensorSubset {
public:
    SensorSubset(std::vector<const SensorNode*> sensors, const EarthModel& earth)
        : sensors_(std::move(sensors)), earth_(earth) {
        if (sensors_.size() > kIndexThreshold) {
            index_.emplace(std::span<const SensorNode* const>(sensors_), earth_);
        }
    }

    bool empty() const noexcept { return sensors_.empty(); }

    GstbnEdge link(RoIId roi, const GeoCoord& location) const {
        if (index_) {
            const auto hit = index_->nearest(location);
            return {roi, hit.id, hit.distance_km};
        }
        const SensorNode* best = nullptr;
        double best_km = 0.0;
        for (const SensorNode* s : sensors_) {
            const double d = great_circle_distance(location, s->geolocation, earth_);
            if (best == nullptr || d < best_km || (d == best_km && s->id < best->id)) {
                best = s;
                best_km = d;
            }
        }
        return {roi, best->id, best_km};
    }

private:
    std::vector<const SensorNode*> sensors_;
    EarthModel earth_;
    std::optional<detail::NearestSensorIndex> index_;
};

// Lazily builds one SensorSubset per distinct RoI variable mask.
class EdgeBuilder {
public:
    EdgeBuilder(std::span<const SensorNode> sensors, const EdgePolicy& policy) : policy_(policy) {
        for (const auto& s : sensors) {
            if (s.active()) active_.push_back(&s);
        }
        if (active_.empty()) throw NoObserversError("no active sensors available to observe RoIs");
        if (!policy_.strict_observation_matching) {
            subsets_[0] = std::make_unique<SensorSubset>(active_, policy_.earth);
        }
    }

    GstbnEdge link(const EdgeQuery& q) {
        const SensorSubset& subset = subset_for(q.variables);
        if (subset.empty()) {
            throw NoObserversError("no active sensor observes the variables of RoI " +
                                   std::to_string(q.roi_id));
        }
        return subset.link(q.roi_id, q.location);
    }

private:
    const SensorSubset& subset_for(ObservationSet vars) {
        if (!policy_.strict_observation_matching) return *subsets_[0];
        auto& slot = subsets_[vars.bits()];
        if (!slot) {
            std::vector<const SensorNode*> eligible;
            for (const SensorNode* s : active_) {
                if (s->observations.intersects(vars)) eligible.push_back(s);
            }
            slot = std::make_unique<SensorSubset>(std::move(eligible), policy_.earth);
        }
        return *slot;
    }

    EdgePolicy policy_;
    std::vector<const SensorNode*> active_;
    std::array<std::unique_ptr<SensorSubset>, 16> subsets_;
};

void validate_sensor(const SensorNode& s) {
    if (!is_valid(s.geolocation)) {
        throw ParameterError("sensor " + std::to_string(s.id) + " has an invalid coordinate");
    }
    if (s.active() && s.observations.empty()) {
        throw StructuralError("active sensor " + std::to_string(s.id) + " observes nothing");
    }
}

}  // namespace

std::vector<GstbnEdge> build_edges(std::span<const EdgeQuery> rois, std::span<const SensorNode> sensors,
                                   const EdgePolicy& policy) {
    for (const auto& s : sensors) validate_sensor(s);
    for (const auto& q : rois) {
        if (!is_valid(q.location)) {
            throw ParameterError("RoI " + std::to_string(q.roi_id) + " has an invalid coordinate");
        }
    }
    EdgeBuilder builder(sensors, policy);
    std::vector<GstbnEdge> edges;
    edges.reserve(rois.size());
    for (const auto& q : rois) edges.push_back(builder.link(q));
    return edges;
}

std::vector<GstbnEdge> build_edges(std::span<const RoIEventNode> rois, std::span<const SensorNode> sensors,
                                   const EarthModel& earth) {
    std::vector<EdgeQuery> queries;
    queries.reserve(rois.size());
    for (const auto& r : rois) queries.push_back({r.id, r.geolocation, ObservationSet::all()});
    return build_edges(queries, sensors, EdgePolicy{earth, false});
}

TemporalGstbn::TemporalGstbn(std::vector<SensorNode> catalog, std::vector<RoIEventNode> rois,
                             std::vector<Timestamp> timestamps, EdgePolicy policy)
    : catalog_(std::move(catalog)), rois_(std::move(rois)), policy_(policy) {
    validate(policy_.earth);
    for (std::size_t i = 1; i < timestamps.size(); ++i) {
        if (timestamps[i] <= timestamps[i - 1]) {
            throw OrderingError("snapshot timestamps must be strictly increasing");
        }
    }

    std::sort(catalog_.begin(), catalog_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < catalog_.size(); ++i) {
        validate_sensor(catalog_[i]);
        if (i > 0 && catalog_[i].id == catalog_[i - 1].id) {
            throw StructuralError("duplicate sensor id " + std::to_string(catalog_[i].id));
        }
    }

    std::sort(rois_.begin(), rois_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < rois_.size(); ++i) {
        const auto& r = rois_[i];
        if (i > 0 && r.id == rois_[i - 1].id) {
            throw StructuralError("duplicate RoI id " + std::to_string(r.id));
        }
        if (!is_valid(r.geolocation)) {
            throw ParameterError("RoI " + std::to_string(r.id) + " has an invalid coordinate");
        }
        for (const auto& [t, residuals] : r.snapshots) {
            if (!std::binary_search(timestamps.begin(), timestamps.end(), t)) {
                throw StructuralError("RoI " + std::to_string(r.id) + " references unknown timestamp " +
                                      std::to_string(t));
            }
            for (const auto& v : residuals) {
                if (!(v.residual >= 0.0)) {
                    throw StructuralError("RoI " + std::to_string(r.id) + " stores a negative residual");
                }
            }
        }
    }

    std::vector<SensorId> active_ids;
    for (const auto& s : catalog_) {
        if (s.active()) active_ids.push_back(s.id);
    }
    if (active_ids.empty()) throw NoObserversError("sensor catalog has no active sensors");

    snapshots_.resize(timestamps.size());
    for (std::size_t k = 0; k < timestamps.size(); ++k) {
        snapshots_[k].timestamp = timestamps[k];
        snapshots_[k].sensor_ids = active_ids;
    }
    for (const auto& r : rois_) {
        for (const auto& entry : r.snapshots) {
            const auto k = static_cast<std::size_t>(
                std::lower_bound(timestamps.begin(), timestamps.end(), entry.first) - timestamps.begin());
            snapshots_[k].roi_ids.push_back(r.id);
        }
    }
    rebuild_edges();
}

void TemporalGstbn::rebuild_edges() {
    parallel_for_chunks(snapshots_.size(), [this](std::size_t begin, std::size_t end) {
        EdgeBuilder builder(catalog_, policy_);
        for (std::size_t k = begin; k < end; ++k) {
            auto& snap = snapshots_[k];
            snap.edges.clear();
            snap.edges.reserve(snap.roi_ids.size());
            for (RoIId id : snap.roi_ids) {
                const RoIEventNode* roi = find_roi(id);
                snap.edges.push_back(builder.link({id, roi->geolocation, roi->variables(snap.timestamp)}));
            }
        }
    });
}

std::vector<SensorNode> TemporalGstbn::active_sensors() const {
    std::vector<SensorNode> out;
    for (const auto& s : catalog_) {
        if (s.active()) out.push_back(s);
    }
    return out;
}

const SensorNode* TemporalGstbn::find_sensor(SensorId id) const noexcept {
    const auto it = std::lower_bound(catalog_.begin(), catalog_.end(), id,
                                     [](const SensorNode& s, SensorId v) { return s.id < v; });
    return it != catalog_.end() && it->id == id ? &*it : nullptr;
}

const RoIEventNode* TemporalGstbn::find_roi(RoIId id) const noexcept {
    const auto it = std::lower_bound(rois_.begin(), rois_.end(), id,
                                     [](const RoIEventNode& r, RoIId v) { return r.id < v; });
    return it != rois_.end() && it->id == id ? &*it : nullptr;
}

const GstbnSnapshot* TemporalGstbn::find_snapshot(Timestamp t) const noexcept {
    const auto it = std::lower_bound(snapshots_.begin(), snapshots_.end(), t,
                                     [](const GstbnSnapshot& s, Timestamp v) { return s.timestamp < v; });
    return it != snapshots_.end() && it->timestamp == t ? &*it : nullptr;
}

TemporalGstbn build_temporal_gstbn(const SnapshotSeries& series, std::vector<SensorNode> catalog,
                                   const RoIOptions& options, const EdgePolicy& policy) {
    if (series.empty()) throw StructuralError("no field series supplied");
    if (catalog.empty()) throw NoObserversError("sensor catalog is empty");

    const auto& reference = series.begin()->second;
    if (reference.size() < 2) throw StructuralError("each field series needs at least two timestamps");
    const GridSpec grid = reference.front().grid;
    validate(grid);

    for (const auto& [kind, snaps] : series) {
        if (snaps.size() != reference.size()) {
            throw StructuralError("field series disagree on their timestamp sets");
        }
        for (std::size_t k = 0; k < snaps.size(); ++k) {
            const auto& s = snaps[k];
            if (s.variable != kind) throw StructuralError("snapshot filed under the wrong variable");
            if (!(s.grid == grid)) throw StructuralError("field series use different grids");
            if (s.timestamp != reference[k].timestamp) {
                throw StructuralError("field series disagree on their timestamp sets");
            }
            if (k > 0 && s.timestamp <= snaps[k - 1].timestamp) {
                throw OrderingError("field series timestamps must be strictly increasing");
            }
        }
    }

    const std::size_t intervals = reference.size() - 1;
    std::vector<std::vector<RoIEvent>> events(intervals);
    parallel_for_chunks(intervals, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            std::vector<ResidualField> stack;
            stack.reserve(series.size());
            for (const auto& entry : series) {
                stack.push_back(compute_residual_field(entry.second[k], entry.second[k + 1]));
            }
            events[k] = extract_roi_events(stack, options.threshold, options.scales);
        }
    });

    std::map<std::size_t, RoIEventNode> registry;
    std::vector<Timestamp> timestamps;
    timestamps.reserve(intervals);
    for (std::size_t k = 0; k < intervals; ++k) {
        const Timestamp t_end = reference[k + 1].timestamp;
        timestamps.push_back(t_end);
        for (auto& ev : events[k]) {
            auto [it, inserted] = registry.try_emplace(ev.cell);
            if (inserted) {
                it->second.id = static_cast<RoIId>(ev.cell);
                it->second.geolocation = ev.location;
            }
            it->second.snapshots.emplace(t_end, std::move(ev.residuals));
        }
    }

    std::vector<RoIEventNode> rois;
    rois.reserve(registry.size());
    for (auto& entry : registry) rois.push_back(std::move(entry.second));
    return TemporalGstbn(std::move(catalog), std::move(rois), std::move(timestamps), policy);
}

TemporalGstbn add_sensor(const TemporalGstbn& net, const GeoCoord& candidate) {
    if (!is_valid(candidate)) throw ParameterError("candidate sensor coordinate is invalid");

    TemporalGstbn out = net;
    const SensorId id = out.catalog_.empty() ? 1 : out.catalog_.back().id + 1;
    SensorNode sensor;
    sensor.id = id;
    sensor.membership = Membership::ldn;
    sensor.data_source = "candidate";
    sensor.platform = "candidate-" + std::to_string(id);
    sensor.mobility = Mobility::stationary;
    sensor.geolocation = candidate;
    sensor.status = OperationalStatus::active;
    sensor.observations = ObservationSet::all();
    out.catalog_.push_back(sensor);

    // The new sensor has the largest id, so it only wins strictly shorter links,
    // and it observes every variable, so it is eligible under either policy.
    for (auto& snap : out.snapshots_) {
        snap.sensor_ids.push_back(id);
        for (auto& edge : snap.edges) {
            const double d = great_circle_distance(out.find_roi(edge.roi_id)->geolocation, candidate,
                                                   out.policy_.earth);
            if (d < edge.weight_km) {
                edge.sensor_id = id;
                edge.weight_km = d;
            }
        }
    }
    return out;
}

TemporalGstbn remove_sensor(const TemporalGstbn& net, SensorId id) {
    const SensorNode* target = net.find_sensor(id);
    if (target == nullptr || !target->active()) {
        throw NotFoundError("no active sensor with id " + std::to_string(id));
    }
    std::vector<SensorNode> catalog = net.sensor_catalog();
    std::size_t active = 0;
    for (auto& s : catalog) {
        if (s.active()) ++active;
        if (s.id == id) s.status = OperationalStatus::inactive;
    }
    if (active <= 1) throw NoObserversError("cannot remove the last active sensor");

    std::vector<Timestamp> timestamps;
    for (const auto& snap : net.snapshots()) timestamps.push_back(snap.timestamp);
    return TemporalGstbn(std::move(catalog), net.roi_registry(), std::move(timestamps), net.policy());
}

}  // namespace gstbn
