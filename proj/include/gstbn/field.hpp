#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gstbn/geo.hpp"

namespace gstbn {

enum class ObservationKind : std::uint8_t { temperature, salinity, current_u, current_v };

inline constexpr std::array<ObservationKind, 4> kAllObservationKinds = {
    ObservationKind::temperature, ObservationKind::salinity, ObservationKind::current_u,
    ObservationKind::current_v};

std::string_view to_string(ObservationKind kind) noexcept;
std::optional<ObservationKind> parse_observation_kind(std::string_view token) noexcept;

// Small bit set over ObservationKind.
class ObservationSet {
public:
    constexpr ObservationSet() = default;
    ObservationSet(std::initializer_list<ObservationKind> kinds) {
        for (auto k : kinds) insert(k);
    }

    static constexpr ObservationSet all() { return ObservationSet(0x0F); }

    constexpr void insert(ObservationKind k) { bits_ |= bit(k); }
    constexpr bool contains(ObservationKind k) const { return (bits_ & bit(k)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr bool intersects(ObservationSet other) const { return (bits_ & other.bits_) != 0; }
    constexpr std::uint8_t bits() const { return bits_; }

    std::vector<ObservationKind> kinds() const;

    friend constexpr bool operator==(ObservationSet, ObservationSet) = default;

private:
    explicit constexpr ObservationSet(std::uint8_t bits) : bits_(bits) {}
    static constexpr std::uint8_t bit(ObservationKind k) {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(k));
    }

    std::uint8_t bits_ = 0;
};

// Regular lat/lon grid; cell (i, j) is centered at (lon0 + j*d_lon, lat0 + i*d_lat).
struct GridSpec {
    std::size_t n_lat = 1;
    std::size_t n_lon = 1;
    double lat0 = 0.0;
    double d_lat = 1.0;
    double lon0 = 0.0;
    double d_lon = 1.0;

    std::size_t cell_count() const noexcept { return n_lat * n_lon; }
    GeoCoord cell_center(std::size_t cell) const noexcept;
    // Nearest cell to a coordinate, or nullopt when it lies outside the grid's cells.
    std::optional<std::size_t> locate(const GeoCoord& c) const noexcept;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Throws StructuralError when the spec is degenerate or centers fall off the globe.
void validate(const GridSpec& grid);

/// One timestamped grid of a single variable. Missing (land) cells are
/// tracked by `valid`; their entry in `values` is ignored.
struct FieldSnapshot {
    std::int64_t timestamp = 0;
    ObservationKind variable = ObservationKind::temperature;
    GridSpec grid;
    std::vector<double> values;
    std::vector<std::uint8_t> valid;

    bool is_valid(std::size_t cell) const { return valid[cell] != 0; }
};

// Builds a snapshot treating NaN entries as missing. Validates shape and finiteness.
FieldSnapshot make_snapshot(std::int64_t timestamp, ObservationKind variable, GridSpec grid,
                            std::vector<double> values_with_nan);

void validate(const FieldSnapshot& snapshot);

struct ResidualField {
    std::int64_t t_begin = 0;
    std::int64_t t_end = 0;
    ObservationKind variable = ObservationKind::temperature;
    GridSpec grid;
    std::vector<double> residuals;
    std::vector<std::uint8_t> valid;
};

struct RoIThreshold {
    static constexpr double kDefault = 0.5;

    double value = kDefault;
};

// Per-variable multiplier applied to residuals before thresholding.
struct ResidualScales {
    std::array<double, 4> factor{1.0, 1.0, 1.0, 1.0};

    double operator[](ObservationKind k) const { return factor[static_cast<std::size_t>(k)]; }
    double& operator[](ObservationKind k) { return factor[static_cast<std::size_t>(k)]; }
};

struct VariableResidual {
    ObservationKind variable;
    double residual;

    friend bool operator==(const VariableResidual&, const VariableResidual&) = default;
};

struct RoIEvent {
    std::size_t cell = 0;
    GeoCoord location;
    double roi_value = 0.0;
    // Contributing (post-threshold) residuals in ObservationKind order.
    std::vector<VariableResidual> residuals;
};

/// residual = (later - earlier)^2 per cell; missing where either input is missing.
ResidualField compute_residual_field(const FieldSnapshot& earlier, const FieldSnapshot& later);

/// Sums thresholded residuals per cell across variables and emits every cell
/// whose sum is positive. A residual contributes iff scale * residual >= threshold.
std::vector<RoIEvent> extract_roi_events(std::span<const ResidualField> stack, RoIThreshold threshold,
                                         const ResidualScales& scales = {});

}  // namespace gstbn
