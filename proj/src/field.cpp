#include "gstbn/field.hpp"

#include <cmath>

#include "gstbn/error.hpp"

namespace gstbn {

namespace {

constexpr std::array<std::string_view, 4> kKindNames = {"temperature", "salinity", "current_u",
                                                        "current_v"};

}  // namespace

std::string_view to_string(ObservationKind kind) noexcept {
    return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<ObservationKind> parse_observation_kind(std::string_view token) noexcept {
    for (auto k : kAllObservationKinds) {
        if (kKindNames[static_cast<std::size_t>(k)] == token) return k;
    }
    return std::nullopt;
}

std::vector<ObservationKind> ObservationSet::kinds() const {
    std::vector<ObservationKind> out;
    for (auto k : kAllObservationKinds) {
        if (contains(k)) out.push_back(k);
    }
    return out;
}

GeoCoord GridSpec::cell_center(std::size_t cell) const noexcept {
    const auto i = cell / n_lon;
    const auto j = cell % n_lon;
    return GeoCoord{lon0 + static_cast<double>(j) * d_lon, lat0 + static_cast<double>(i) * d_lat};
}

std::optional<std::size_t> GridSpec::locate(const GeoCoord& c) const noexcept {
    const double fi = std::round((c.lat - lat0) / d_lat);
    const double fj = std::round((c.lon - lon0) / d_lon);
    if (!(fi >= 0.0) || !(fj >= 0.0) || fi >= static_cast<double>(n_lat) ||
        fj >= static_cast<double>(n_lon)) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(fi) * n_lon + static_cast<std::size_t>(fj);
}

void validate(const GridSpec& grid) {
    if (grid.n_lat == 0 || grid.n_lon == 0) throw StructuralError("grid must have at least one cell");
    if (!std::isfinite(grid.d_lat) || !std::isfinite(grid.d_lon) || grid.d_lat <= 0.0 ||
        grid.d_lon <= 0.0) {
        throw StructuralError("grid spacing must be positive");
    }
    const GeoCoord first = grid.cell_center(0);
    const GeoCoord last = grid.cell_center(grid.cell_count() - 1);
    if (!is_valid(first) || !is_valid(last)) {
        throw StructuralError("grid cell centers fall outside valid coordinates");
    }
}

FieldSnapshot make_snapshot(std::int64_t timestamp, ObservationKind variable, GridSpec grid,
                            std::vector<double> values_with_nan) {
    FieldSnapshot s{timestamp, variable, grid, std::move(values_with_nan), {}};
    s.valid.resize(s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        s.valid[i] = std::isnan(s.values[i]) ? 0 : 1;
    }
    validate(s);
    return s;
}

void validate(const FieldSnapshot& snapshot) {
    validate(snapshot.grid);
    const auto n = snapshot.grid.cell_count();
    if (snapshot.values.size() != n || snapshot.valid.size() != n) {
        throw StructuralError("snapshot value count does not match grid dimensions");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (snapshot.valid[i] && !std::isfinite(snapshot.values[i])) {
            throw StructuralError("non-finite value in a valid cell");
        }
    }
}

ResidualField compute_residual_field(const FieldSnapshot& earlier, const FieldSnapshot& later) {
    if (earlier.variable != later.variable) {
        throw StructuralError("residual inputs observe different variables");
    }
    if (!(earlier.grid == later.grid)) throw StructuralError("residual inputs use different grids");
    if (earlier.values.size() != earlier.grid.cell_count() ||
        later.values.size() != later.grid.cell_count() ||
        earlier.valid.size() != earlier.values.size() || later.valid.size() != later.values.size()) {
        throw StructuralError("snapshot value count does not match grid dimensions");
    }
    if (earlier.timestamp >= later.timestamp) {
        throw OrderingError("residual requires earlier.timestamp < later.timestamp");
    }

    const auto n = earlier.grid.cell_count();
    ResidualField out{earlier.timestamp, later.timestamp, earlier.variable, earlier.grid,
                      std::vector<double>(n, 0.0), std::vector<std::uint8_t>(n, 0)};
    for (std::size_t i = 0; i < n; ++i) {
        if (earlier.valid[i] && later.valid[i]) {
            const double diff = later.values[i] - earlier.values[i];
            out.residuals[i] = diff * diff;
            out.valid[i] = 1;
        }
    }
    return out;
}

std::vector<RoIEvent> extract_roi_events(std::span<const ResidualField> stack, RoIThreshold threshold,
                                         const ResidualScales& scales) {
    if (!std::isfinite(threshold.value) || threshold.value < 0.0) {
        throw ParameterError("RoI threshold must be finite and non-negative");
    }
    if (stack.empty()) return {};

    const auto& head = stack.front();
    ObservationSet seen;
    for (const auto& r : stack) {
        if (!(r.grid == head.grid)) throw StructuralError("residual stack mixes grids");
        if (r.t_begin != head.t_begin || r.t_end != head.t_end) {
            throw StructuralError("residual stack mixes intervals");
        }
        if (seen.contains(r.variable)) {
            throw StructuralError("residual stack repeats variable " + std::string(to_string(r.variable)));
        }
        if (r.residuals.size() != head.grid.cell_count() || r.valid.size() != r.residuals.size()) {
            throw StructuralError("residual field size does not match grid");
        }
        seen.insert(r.variable);
    }

    // Visit variables in enum order so sums do not depend on stack order.
    std::array<const ResidualField*, 4> by_kind{};
    for (const auto& r : stack) by_kind[static_cast<std::size_t>(r.variable)] = &r;

    std::vector<RoIEvent> events;
    const auto n = head.grid.cell_count();
    for (std::size_t cell = 0; cell < n; ++cell) {
        double roi = 0.0;
        std::vector<VariableResidual> contributing;
        for (auto kind : kAllObservationKinds) {
            const ResidualField* field = by_kind[static_cast<std::size_t>(kind)];
            if (field == nullptr || !field->valid[cell]) continue;
            const double value = scales[kind] * field->residuals[cell];
            if (value >= threshold.value && value > 0.0) {
                roi += value;
                contributing.push_back({kind, value});
            }
        }
        if (roi > 0.0) {
            events.push_back({cell, head.grid.cell_center(cell), roi, std::move(contributing)});
        }
    }
    return events;
}

}  // namespace gstbn
