#pragma once

// Reference implementations used only by tests. Each one is written without
// going through the library code path it checks.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "gstbn/field.hpp"
#include "gstbn/geo.hpp"
#include "gstbn/network.hpp"

namespace gstbn::oracles {

// Spherical distance via the atan2 (Vincenty sphere) form in long double.
inline long double reference_distance_km(const GeoCoord& a, const GeoCoord& b,
                                         long double radius = EarthModel::kMeanRadiusKm) {
    constexpr long double kPi = 3.141592653589793238462643383279502884L;
    const long double p1 = static_cast<long double>(a.lat) * kPi / 180.0L;
    const long double p2 = static_cast<long double>(b.lat) * kPi / 180.0L;
    const long double dl = (static_cast<long double>(b.lon) - static_cast<long double>(a.lon)) * kPi / 180.0L;
    const long double y = std::sqrt(std::pow(std::cos(p2) * std::sin(dl), 2) +
                                    std::pow(std::cos(p1) * std::sin(p2) - std::sin(p1) * std::cos(p2) * std::cos(dl), 2));
    const long double x = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
    return radius * std::atan2(y, x);
}

// Double loop over every RoI x sensor pair.
inline std::vector<GstbnEdge> brute_force_edges(const std::vector<EdgeQuery>& rois,
                                                const std::vector<SensorNode>& sensors, const EdgePolicy& policy) {
    std::vector<GstbnEdge> out;
    for (const auto& r : rois) {
        bool found = false;
        GstbnEdge best{};
        for (const auto& s : sensors) {
            if (!s.active()) continue;
            if (policy.strict_observation_matching && !s.observations.intersects(r.variables)) continue;
            const double d = great_circle_distance(r.location, s.geolocation, policy.earth);
            if (!found || d < best.weight_km || (d == best.weight_km && s.id < best.sensor_id)) {
                best = {r.roi_id, s.id, d};
                found = true;
            }
        }
        out.push_back(best);
    }
    return out;
}

struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine); }
    GeoCoord coord(double lon_lo = -180, double lon_hi = 180, double lat_lo = -90, double lat_hi = 90) {
        return GeoCoord{uniform(lon_lo, lon_hi), uniform(lat_lo, lat_hi)};
    }
};

inline SensorNode simple_sensor(SensorId id, GeoCoord where, ObservationSet obs = ObservationSet::all()) {
    SensorNode s;
    s.id = id;
    s.data_source = "test";
    s.platform = "p" + std::to_string(id);
    s.geolocation = where;
    s.observations = obs;
    return s;
}

inline RoIEventNode simple_roi(RoIId id, GeoCoord where, std::initializer_list<Timestamp> times, double residual = 1.0) {
    RoIEventNode r;
    r.id = id;
    r.geolocation = where;
    for (auto t : times) r.snapshots[t] = {{ObservationKind::temperature, residual}};
    return r;
}

// Random network over a regional box: `n_sensors` sensors with shuffled ids,
// `n_rois` RoIs each present in a random subset of `n_times` snapshots.
inline TemporalGstbn random_network(Rng& rng, std::size_t n_sensors, std::size_t n_rois, std::size_t n_times,
                                    bool strict = false) {
    std::vector<SensorNode> sensors;
    std::set<SensorId> used;
    for (std::size_t i = 0; i < n_sensors; ++i) {
        SensorId id = 0;
        do {
            id = static_cast<SensorId>(rng.index(1000)) + 1;
        } while (!used.insert(id).second);
        ObservationSet obs;
        for (auto k : kAllObservationKinds) {
            if (rng.coin()) obs.insert(k);
        }
        if (obs.empty() || !strict || i == 0) obs = ObservationSet::all();
        sensors.push_back(simple_sensor(id, rng.coord(-98, -80, 18, 31), obs));
    }
    std::vector<Timestamp> times;
    for (std::size_t k = 0; k < n_times; ++k) times.push_back(static_cast<Timestamp>(86400 * (k + 1)));
    std::vector<RoIEventNode> rois;
    for (std::size_t i = 0; i < n_rois; ++i) {
        RoIEventNode r;
        r.id = static_cast<RoIId>(i * 7 + 3);
        r.geolocation = rng.coord(-98, -80, 18, 31);
        for (auto t : times) {
            if (rng.coin(0.6)) r.snapshots[t] = {{ObservationKind::temperature, rng.uniform(0.5, 4.0)}};
        }
        rois.push_back(std::move(r));
    }
    return TemporalGstbn(std::move(sensors), std::move(rois), std::move(times), EdgePolicy{EarthModel{}, strict});
}

// Per-cell RoI decision straight from raw values: sum over variables of
// (b - a)^2 where that square reaches the threshold.
inline std::set<std::size_t> naive_roi_cells(const std::vector<std::pair<const FieldSnapshot*, const FieldSnapshot*>>& pairs,
                                             double threshold) {
    std::set<std::size_t> cells;
    if (pairs.empty()) return cells;
    const auto n = pairs.front().first->values.size();
    for (std::size_t c = 0; c < n; ++c) {
        double total = 0.0;
        for (const auto& [a, b] : pairs) {
            if (std::isnan(a->values[c]) || std::isnan(b->values[c]) || !a->valid[c] || !b->valid[c]) continue;
            const double r = (b->values[c] - a->values[c]) * (b->values[c] - a->values[c]);
            if (r >= threshold) total += r;
        }
        if (total > 0.0) cells.insert(c);
    }
    return cells;
}

}  // namespace gstbn::oracles
