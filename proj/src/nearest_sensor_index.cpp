#include "nearest_sensor_index.hpp"

#include <algorithm>
#include <cmath>

namespace gstbn::detail {

namespace {

// Absolute slack on squared chord length (unit sphere). Rounding in either
// metric is around 1e-16, so this only ever admits extra candidates.
constexpr double kChordSlack = 1e-12;

double chord2(const std::array<double, 3>& a, const std::array<double, 3>& b) noexcept {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return dx * dx + dy * dy + dz * dz;
}

}  // namespace

std::array<double, 3> unit_vector(const GeoCoord& c) noexcept {
    const double lat = deg_to_rad(c.lat);
    const double lon = deg_to_rad(c.lon);
    return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

struct NearestSensorIndex::Search {
    std::array<double, 3> q;
    GeoCoord coord;
    SensorId best_id = 0;
    double best_km = 0.0;
    double best_chord2 = 0.0;
    bool found = false;
};

NearestSensorIndex::NearestSensorIndex(std::span<const SensorNode* const> sensors, const EarthModel& earth)
    : earth_(earth) {
    points_.reserve(sensors.size());
    for (const SensorNode* s : sensors) {
        points_.push_back({unit_vector(s->geolocation), s->geolocation, s->id});
    }
    std::vector<std::size_t> order(points_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    nodes_.reserve(points_.size());
    root_ = build(order, 0, order.size());
}

std::size_t NearestSensorIndex::build(std::vector<std::size_t>& order, std::size_t lo, std::size_t hi) {
    if (lo >= hi) return npos;

    std::array<double, 3> mn{1e300, 1e300, 1e300};
    std::array<double, 3> mx{-1e300, -1e300, -1e300};
    for (std::size_t i = lo; i < hi; ++i) {
        for (int a = 0; a < 3; ++a) {
            mn[a] = std::min(mn[a], points_[order[i]].xyz[a]);
            mx[a] = std::max(mx[a], points_[order[i]].xyz[a]);
        }
    }
    int axis = 0;
    for (int a = 1; a < 3; ++a) {
        if (mx[a] - mn[a] > mx[axis] - mn[axis]) axis = a;
    }

    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(order.begin() + static_cast<std::ptrdiff_t>(lo),
                     order.begin() + static_cast<std::ptrdiff_t>(mid),
                     order.begin() + static_cast<std::ptrdiff_t>(hi), [&](std::size_t x, std::size_t y) {
                         return points_[x].xyz[axis] < points_[y].xyz[axis];
                     });

    const std::size_t node = nodes_.size();
    nodes_.push_back({order[mid], axis, npos, npos});
    const std::size_t left = build(order, lo, mid);
    const std::size_t right = build(order, mid + 1, hi);
    nodes_[node].left = left;
    nodes_[node].right = right;
    return node;
}

void NearestSensorIndex::visit(std::size_t node_index, Search& s) const {
    if (node_index == npos) return;
    const Node& node = nodes_[node_index];
    const Point& p = points_[node.point];

    const double c2 = chord2(s.q, p.xyz);
    if (!s.found || c2 <= s.best_chord2 + kChordSlack) {
        const double d = great_circle_distance(s.coord, p.coord, earth_);
        if (!s.found || d < s.best_km || (d == s.best_km && p.id < s.best_id)) {
            s.found = true;
            s.best_km = d;
            s.best_id = p.id;
            s.best_chord2 = c2;
        }
    }

    const double diff = s.q[node.axis] - p.xyz[node.axis];
    const std::size_t near_side = diff < 0.0 ? node.left : node.right;
    const std::size_t far_side = diff < 0.0 ? node.right : node.left;
    visit(near_side, s);
    // Points on the split plane may sit in either subtree, hence <=.
    if (diff * diff <= s.best_chord2 + kChordSlack) visit(far_side, s);
}

NearestSensorIndex::Hit NearestSensorIndex::nearest(const GeoCoord& query) const {
    Search s;
    s.q = unit_vector(query);
    s.coord = query;
    visit(root_, s);
    return {s.best_id, s.best_km};
}

}  // namespace gstbn::detail
