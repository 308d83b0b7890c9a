#include "gstbn/synth.hpp"

#include <cmath>
#include <random>
#include <string>

#include "gstbn/error.hpp"

namespace gstbn {

namespace fs = std::filesystem;

void validate(const ScenarioSpec& spec) {
    try {
        validate(spec.grid);
    } catch (const StructuralError& e) {
        throw ParameterError(e.what());
    }
    if (spec.timestamps.size() < 2) throw ParameterError("scenario needs at least two timestamps");
    for (std::size_t i = 1; i < spec.timestamps.size(); ++i) {
        if (spec.timestamps[i] <= spec.timestamps[i - 1]) {
            throw ParameterError("scenario timestamps must be strictly increasing");
        }
    }
    if (spec.variables.empty()) throw ParameterError("scenario needs at least one variable");
    ObservationSet seen;
    for (auto v : spec.variables) {
        if (seen.contains(v)) throw ParameterError("scenario lists a variable twice");
        seen.insert(v);
    }
    if (!std::isfinite(spec.threshold) || spec.threshold < 0.0) throw ParameterError("threshold must be >= 0");
    if (!std::isfinite(spec.background)) throw ParameterError("background must be finite");
    const double a = spec.background_noise_amplitude;
    if (!std::isfinite(a) || a < 0.0) throw ParameterError("noise amplitude must be >= 0");
    if (a * a >= spec.threshold / 4.0 && a > 0.0) {
        throw ParameterError("noise amplitude squared must stay below threshold / 4");
    }
    const std::size_t intervals = spec.timestamps.size() - 1;
    for (const auto& h : spec.hotspots) {
        if (!is_valid(h.center)) throw ParameterError("hotspot center is not a valid coordinate");
        if (!std::isfinite(h.amplitude) || h.amplitude * h.amplitude < 2.0 * spec.threshold) {
            throw ParameterError("hotspot amplitude squared must be at least twice the threshold");
        }
        if (!std::isfinite(h.radius_deg) || h.radius_deg <= 0.0) {
            throw ParameterError("hotspot radius must be positive");
        }
        if (h.active_intervals) {
            for (auto k : *h.active_intervals) {
                if (k >= intervals) throw ParameterError("hotspot interval index out of range");
            }
        }
    }
    if (spec.sensors.empty()) throw ParameterError("scenario needs at least one sensor");
    for (const auto& s : spec.sensors) {
        if (!is_valid(s)) throw ParameterError("sensor coordinate is not valid");
    }
    for (auto cell : spec.land_cells) {
        if (cell >= spec.grid.cell_count()) throw ParameterError("land cell index out of range");
    }
}

Scenario generate_scenario(const ScenarioSpec& spec) {
    validate(spec);
    const std::size_t n_cells = spec.grid.cell_count();
    const std::size_t n_times = spec.timestamps.size();
    const std::size_t intervals = n_times - 1;

    std::vector<std::uint8_t> land(n_cells, 0);
    for (auto cell : spec.land_cells) land[cell] = 1;

    // bump[h][cell]: hotspot footprint.
    std::vector<std::vector<double>> bump(spec.hotspots.size(), std::vector<double>(n_cells, 0.0));
    for (std::size_t h = 0; h < spec.hotspots.size(); ++h) {
        const auto& hs = spec.hotspots[h];
        const double sigma = hs.radius_deg / 2.0;
        for (std::size_t cell = 0; cell < n_cells; ++cell) {
            const GeoCoord c = spec.grid.cell_center(cell);
            const double dx = c.lon - hs.center.lon;
            const double dy = c.lat - hs.center.lat;
            const double d2 = dx * dx + dy * dy;
            if (d2 <= hs.radius_deg * hs.radius_deg) bump[h][cell] = hs.amplitude * std::exp(-d2 / (2 * sigma * sigma));
        }
    }

    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32)};
    std::mt19937_64 engine(seq);
    const double a = spec.background_noise_amplitude;

    // values[v][k][cell]
    std::vector<std::vector<std::vector<double>>> values(
        spec.variables.size(), std::vector<std::vector<double>>(n_times, std::vector<double>(n_cells)));
    for (std::size_t k = 0; k < n_times; ++k) {
        for (std::size_t v = 0; v < spec.variables.size(); ++v) {
            for (std::size_t cell = 0; cell < n_cells; ++cell) {
                const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
                double value = spec.background + a * (2.0 * u - 1.0);
                for (std::size_t h = 0; h < spec.hotspots.size(); ++h) {
                    const auto& hs = spec.hotspots[h];
                    if (hs.variables && !hs.variables->contains(spec.variables[v])) continue;
                    std::size_t level = 0;
                    for (std::size_t i = 0; i < k; ++i) {
                        if (!hs.active_intervals || hs.active_intervals->count(i)) ++level;
                    }
                    value += static_cast<double>(level) * bump[h][cell];
                }
                values[v][k][cell] = land[cell] ? std::nan("") : value;
            }
        }
    }

    Scenario out;
    for (std::size_t v = 0; v < spec.variables.size(); ++v) {
        auto& series = out.series[spec.variables[v]];
        for (std::size_t k = 0; k < n_times; ++k) {
            series.push_back(make_snapshot(spec.timestamps[k], spec.variables[v], spec.grid, values[v][k]));
        }
    }

    ObservationSet observed;
    for (auto v : spec.variables) observed.insert(v);
    for (std::size_t i = 0; i < spec.sensors.size(); ++i) {
        SensorNode s;
        s.id = static_cast<SensorId>(i + 1);
        s.membership = Membership::federal;
        s.data_source = "synthetic";
        s.platform = "synthetic-" + std::to_string(i + 1);
        s.mobility = Mobility::stationary;
        s.geolocation = spec.sensors[i];
        s.status = OperationalStatus::active;
        s.observations = observed;
        out.sensors.push_back(std::move(s));
    }

    for (std::size_t k = 0; k < intervals; ++k) {
        ManifestInterval m{spec.timestamps[k], spec.timestamps[k + 1], {}};
        for (std::size_t cell = 0; cell < n_cells; ++cell) {
            if (land[cell]) continue;
            double sum = 0.0;
            for (std::size_t v = 0; v < spec.variables.size(); ++v) {
                const double step = values[v][k + 1][cell] - values[v][k][cell];
                const double residual = step * step;
                if (residual >= spec.threshold) sum += residual;
            }
            if (sum > 0.0) m.roi_cells.push_back(cell);
        }
        out.manifest.push_back(std::move(m));
    }
    return out;
}

namespace {

std::vector<ObservationKind> kinds_from_json(const Json& arr) {
    std::vector<ObservationKind> out;
    for (const auto& item : arr) {
        const auto kind = parse_observation_kind(item.get<std::string>());
        if (!kind) throw ParameterError("unknown variable '" + item.get<std::string>() + "'");
        out.push_back(*kind);
    }
    return out;
}

}  // namespace

ScenarioSpec scenario_spec_from_json(const Json& doc) {
    try {
        ScenarioSpec spec;
        const auto& g = doc.at("grid");
        spec.grid = GridSpec{g.at("nlat").get<std::size_t>(), g.at("nlon").get<std::size_t>(),
                             g.at("lat0").get<double>(),      g.at("dlat").get<double>(),
                             g.at("lon0").get<double>(),      g.at("dlon").get<double>()};
        spec.timestamps = doc.at("timestamps").get<std::vector<Timestamp>>();
        if (doc.contains("variables")) spec.variables = kinds_from_json(doc["variables"]);
        spec.background = doc.value("background", spec.background);
        spec.background_noise_amplitude = doc.value("background_noise_amplitude", 0.0);
        spec.threshold = doc.value("threshold", RoIThreshold::kDefault);
        spec.seed = doc.value("seed", std::uint64_t{0});
        if (doc.contains("land_cells")) spec.land_cells = doc["land_cells"].get<std::vector<std::size_t>>();
        for (const auto& h : doc.value("hotspots", Json::array())) {
            Hotspot hs;
            hs.center = GeoCoord{h.at("lon").get<double>(), h.at("lat").get<double>()};
            hs.amplitude = h.at("amplitude").get<double>();
            hs.radius_deg = h.at("radius_deg").get<double>();
            if (h.contains("active_intervals")) {
                const auto list = h["active_intervals"].get<std::vector<std::size_t>>();
                hs.active_intervals = std::set<std::size_t>(list.begin(), list.end());
            }
            if (h.contains("variables")) {
                ObservationSet set;
                for (auto k : kinds_from_json(h["variables"])) set.insert(k);
                hs.variables = set;
            }
            spec.hotspots.push_back(std::move(hs));
        }
        for (const auto& s : doc.at("sensors")) {
            spec.sensors.push_back(GeoCoord{s.at("lon").get<double>(), s.at("lat").get<double>()});
        }
        return spec;
    } catch (const Json::exception& e) {
        throw ParameterError(std::string("malformed scenario spec: ") + e.what());
    }
}

Json manifest_to_json(const ScenarioSpec& spec, const Scenario& scenario) {
    Json intervals = Json::array();
    for (const auto& m : scenario.manifest) {
        Json coords = Json::array();
        for (auto cell : m.roi_cells) {
            const auto c = spec.grid.cell_center(cell);
            coords.push_back(Json::array({c.lon, c.lat}));
        }
        intervals.push_back(Json{{"t_begin", m.t_begin},
                                 {"t_end", m.t_end},
                                 {"roi_cells", m.roi_cells},
                                 {"roi_coordinates", std::move(coords)}});
    }
    return Json{{"threshold", spec.threshold}, {"seed", spec.seed}, {"intervals", std::move(intervals)}};
}

void write_scenario(const ScenarioSpec& spec, const Scenario& scenario, const fs::path& dir) {
    const fs::path grids = dir / "grids";
    fs::create_directories(grids);
    for (const auto& [kind, snaps] : scenario.series) {
        for (const auto& s : snaps) {
            write_grid_file(grids / (std::string(to_string(kind)) + "_" + std::to_string(s.timestamp) + ".grid"), s);
        }
    }
    write_sensor_catalog(dir / "sensors.csv", scenario.sensors);
    write_text_file(dir / "manifest.json", manifest_to_json(spec, scenario).dump(2) + "\n");
}

}  // namespace gstbn
