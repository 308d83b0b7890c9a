#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "gstbn/geo.hpp"
#include "gstbn/network.hpp"

namespace gstbn::detail {

// k-d tree over sensor positions embedded on the unit sphere. Chord length is
// monotone in great-circle distance, so the tree prunes on chord length and
// the surviving candidates are ranked with great_circle_distance itself. The
// answer is therefore identical to a brute-force scan, tie-break included.
class NearestSensorIndex {
public:
    struct Hit {
        SensorId id;
        double distance_km;
    };

    NearestSensorIndex(std::span<const SensorNode* const> sensors, const EarthModel& earth);

    bool empty() const noexcept { return points_.empty(); }
    Hit nearest(const GeoCoord& query) const;

private:
    struct Point {
        std::array<double, 3> xyz;
        GeoCoord coord;
        SensorId id;
    };
    struct Node {
        std::size_t point;
        int axis;
        std::size_t left;   // npos when absent
        std::size_t right;  // npos when absent
    };
    struct Search;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t build(std::vector<std::size_t>& order, std::size_t lo, std::size_t hi);
    void visit(std::size_t node, Search& s) const;

    std::vector<Point> points_;
    std::vector<Node> nodes_;
    std::size_t root_ = npos;
    EarthModel earth_;
};

std::array<double, 3> unit_vector(const GeoCoord& c) noexcept;

}  // namespace gstbn::detail
