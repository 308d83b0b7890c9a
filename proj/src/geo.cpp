#include "gstbn/geo.hpp"

#include <algorithm>
#include <sstream>

#include "gstbn/error.hpp"

namespace gstbn {

GeoCoord make_coord(double lon, double lat) {
    GeoCoord c{lon, lat};
    if (!is_valid(c)) {
        std::ostringstream msg;
        msg << "invalid coordinate (lon=" << lon << ", lat=" << lat << ")";
        throw ParameterError(msg.str());
    }
    return c;
}

void validate(const EarthModel& earth) {
    if (!std::isfinite(earth.radius_km) || earth.radius_km <= 0.0) {
        throw ParameterError("earth radius must be positive");
    }
}

double great_circle_distance(const GeoCoord& a, const GeoCoord& b, const EarthModel& earth) noexcept {
    const double phi1 = deg_to_rad(a.lat);
    const double phi2 = deg_to_rad(b.lat);
    // abs() keeps the expression identical under argument swap.
    const double half_dphi = std::abs(phi2 - phi1) * 0.5;
    const double half_dlambda = std::abs(deg_to_rad(b.lon) - deg_to_rad(a.lon)) * 0.5;

    const double s_phi = std::sin(half_dphi);
    const double s_lambda = std::sin(half_dlambda);
    double h = s_phi * s_phi + (std::cos(phi1) * std::cos(phi2)) * (s_lambda * s_lambda);
    h = std::clamp(h, 0.0, 1.0);
    return 2.0 * std::asin(std::sqrt(h)) * earth.radius_km;
}

double great_circle_distance_cosines(const GeoCoord& a, const GeoCoord& b,
                                     const EarthModel& earth) noexcept {
    const double phi1 = deg_to_rad(a.lat);
    const double phi2 = deg_to_rad(b.lat);
    const double dlambda = deg_to_rad(a.lon) - deg_to_rad(b.lon);
    const double dx = std::sin(phi1) * std::sin(phi2);
    const double dy = std::cos(phi1) * std::cos(phi2) * std::cos(dlambda);
    return std::acos(std::clamp(dx + dy, -1.0, 1.0)) * earth.radius_km;
}

}  // namespace gstbn
