#pragma once

#include <cmath>
#include <numbers>

namespace gstbn {

// Longitude/latitude in degrees. Use make_coord() for checked construction.
struct GeoCoord {
    double lon = 0.0;
    double lat = 0.0;

    friend bool operator==(const GeoCoord&, const GeoCoord&) = default;
};

inline bool is_valid(const GeoCoord& c) noexcept {
    return std::isfinite(c.lon) && std::isfinite(c.lat) && c.lon >= -180.0 && c.lon <= 180.0 &&
           c.lat >= -90.0 && c.lat <= 90.0;
}

// Throws ParameterError when the pair is out of range or not finite.
GeoCoord make_coord(double lon, double lat);

struct EarthModel {
    static constexpr double kMeanRadiusKm = 6371.0090667;

    double radius_km = kMeanRadiusKm;
};

// Throws ParameterError unless radius_km is finite and positive.
void validate(const EarthModel& earth);

/// Great-circle distance in kilometers (haversine form).
///
/// The haversine term is clamped into [0, 1] before asin so rounding can
/// never produce NaN. The expression is symmetric in its arguments bit for
/// bit, and the result lies in [0, pi * R].
double great_circle_distance(const GeoCoord& a, const GeoCoord& b, const EarthModel& earth = {}) noexcept;

/// Spherical law of cosines form of the same distance. Loses precision for
/// points closer than a few meters; kept as a cross-check.
double great_circle_distance_cosines(const GeoCoord& a, const GeoCoord& b,
                                     const EarthModel& earth = {}) noexcept;

constexpr double deg_to_rad(double deg) noexcept { return deg * (std::numbers::pi / 180.0); }

}  // namespace gstbn
