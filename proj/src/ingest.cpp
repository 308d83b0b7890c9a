#include "gstbn/ingest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string_view>

#include "gstbn/error.hpp"

namespace gstbn {

namespace fs = std::filesystem;

namespace {

// ---- small text helpers ----------------------------------------------------

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t'; });
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last) return std::nullopt;
    return value;
}

std::optional<double> parse_finite(std::string_view text) {
    auto v = parse_number<double>(text);
    if (!v || !std::isfinite(*v)) return std::nullopt;
    return v;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    return in;
}

// ---- CSV -------------------------------------------------------------------

std::vector<std::string> split_csv(std::string_view line, const std::string& source, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
            was_quoted = false;
        } else if (c == '"') {
            if (!current.empty() || was_quoted) throw ParseError(source, line_no, "stray quote in field");
            quoted = true;
            was_quoted = true;
        } else {
            if (was_quoted) throw ParseError(source, line_no, "text after closing quote");
            current.push_back(c);
        }
    }
    if (quoted) throw ParseError(source, line_no, "unterminated quoted field");
    fields.push_back(std::move(current));
    return fields;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of("\n\r") != std::string::npos) {
        throw ParameterError("catalog text fields cannot contain line breaks");
    }
    if (field.find_first_of(",\"") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

constexpr std::array<std::string_view, 9> kCatalogColumns = {
    "id", "membership", "data_source", "platform", "mobility", "lat", "lon", "status", "observations"};

enum Column : std::size_t { kId, kMembership, kDataSource, kPlatform, kMobility, kLat, kLon, kStatus, kObs };

std::string observations_text(ObservationSet set) {
    std::string out;
    for (auto k : set.kinds()) {
        if (!out.empty()) out.push_back('|');
        out += to_string(k);
    }
    return out;
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    (void)ec;
    return std::string(buf.data(), ptr);
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("failed writing " + path.string());
}

std::vector<SensorNode> parse_sensor_catalog(std::istream& in, const std::string& source) {
    std::string raw;
    std::size_t line_no = 0;

    std::array<std::size_t, kCatalogColumns.size()> position{};
    position.fill(static_cast<std::size_t>(-1));
    std::size_t width = 0;
    bool have_header = false;
    while (!have_header && std::getline(in, raw)) {
        ++line_no;
        const auto line = strip_cr(raw);
        if (is_blank(line)) continue;
        const auto names = split_csv(line, source, line_no);
        width = names.size();
        for (std::size_t i = 0; i < names.size(); ++i) {
            const auto it = std::find(kCatalogColumns.begin(), kCatalogColumns.end(), names[i]);
            if (it == kCatalogColumns.end()) throw ParseError(source, line_no, "unknown column '" + names[i] + "'");
            auto& slot = position[static_cast<std::size_t>(it - kCatalogColumns.begin())];
            if (slot != static_cast<std::size_t>(-1)) {
                throw ParseError(source, line_no, "duplicate column '" + names[i] + "'");
            }
            slot = i;
        }
        for (std::size_t c = 0; c < kCatalogColumns.size(); ++c) {
            if (position[c] == static_cast<std::size_t>(-1)) {
                throw ParseError(source, line_no, "missing column '" + std::string(kCatalogColumns[c]) + "'");
            }
        }
        have_header = true;
    }
    if (!have_header) throw ParseError(source, line_no == 0 ? 1 : line_no, "missing header row");

    std::vector<SensorNode> sensors;
    std::set<SensorId> ids;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = strip_cr(raw);
        if (is_blank(line)) continue;
        const auto fields = split_csv(line, source, line_no);
        if (fields.size() != width) {
            throw ParseError(source, line_no,
                             "expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()));
        }
        const auto field = [&](Column c) -> const std::string& { return fields[position[c]]; };
        const auto fail = [&](const std::string& msg) { throw ParseError(source, line_no, msg); };

        SensorNode s;
        const auto id = parse_number<SensorId>(field(kId));
        if (!id) fail("malformed id '" + field(kId) + "'");
        s.id = *id;
        if (!ids.insert(s.id).second) fail("duplicate sensor id " + field(kId));

        if (field(kMembership) == "federal") {
            s.membership = Membership::federal;
        } else if (field(kMembership) == "ldn") {
            s.membership = Membership::ldn;
        } else {
            fail("membership must be federal or ldn, got '" + field(kMembership) + "'");
        }
        s.data_source = field(kDataSource);
        s.platform = field(kPlatform);
        if (field(kMobility) == "stationary") {
            s.mobility = Mobility::stationary;
        } else if (field(kMobility) == "mobile") {
            s.mobility = Mobility::mobile;
        } else {
            fail("mobility must be stationary or mobile, got '" + field(kMobility) + "'");
        }

        const auto lat = parse_finite(field(kLat));
        const auto lon = parse_finite(field(kLon));
        if (!lat) fail("malformed lat '" + field(kLat) + "'");
        if (!lon) fail("malformed lon '" + field(kLon) + "'");
        s.geolocation = GeoCoord{*lon, *lat};
        if (!is_valid(s.geolocation)) fail("coordinate out of range (lat=" + field(kLat) + ", lon=" + field(kLon) + ")");

        if (field(kStatus) == "active") {
            s.status = OperationalStatus::active;
        } else if (field(kStatus) == "inactive") {
            s.status = OperationalStatus::inactive;
        } else {
            fail("status must be active or inactive, got '" + field(kStatus) + "'");
        }

        std::string_view obs = field(kObs);
        while (!obs.empty()) {
            const auto bar = obs.find('|');
            const auto token = obs.substr(0, bar);
            const auto kind = parse_observation_kind(token);
            if (!kind) fail("unknown observation kind '" + std::string(token) + "'");
            if (s.observations.contains(*kind)) fail("observation kind listed twice");
            s.observations.insert(*kind);
            if (bar == std::string_view::npos) break;
            obs.remove_prefix(bar + 1);
            if (obs.empty()) fail("trailing '|' in observations");
        }
        if (s.active() && s.observations.empty()) fail("active sensor lists no observations");

        sensors.push_back(std::move(s));
    }
    return sensors;
}

std::vector<SensorNode> parse_sensor_catalog(const fs::path& path) {
    auto in = open_input(path);
    return parse_sensor_catalog(in, path.string());
}

std::string format_sensor_catalog(std::span<const SensorNode> sensors) {
    std::string out;
    for (std::size_t c = 0; c < kCatalogColumns.size(); ++c) {
        if (c > 0) out.push_back(',');
        out += kCatalogColumns[c];
    }
    out.push_back('\n');
    for (const auto& s : sensors) {
        out += std::to_string(s.id);
        out += ',';
        out += to_string(s.membership);
        out += ',';
        out += csv_escape(s.data_source);
        out += ',';
        out += csv_escape(s.platform);
        out += ',';
        out += to_string(s.mobility);
        out += ',';
        out += format_double(s.geolocation.lat);
        out += ',';
        out += format_double(s.geolocation.lon);
        out += ',';
        out += to_string(s.status);
        out += ',';
        out += observations_text(s.observations);
        out.push_back('\n');
    }
    return out;
}

void write_sensor_catalog(const fs::path& path, std::span<const SensorNode> sensors) {
    write_text_file(path, format_sensor_catalog(sensors));
}

// ---- grid files ------------------------------------------------------------

FieldSnapshot parse_grid(std::istream& in, const std::string& source) {
    std::string raw;
    std::size_t line_no = 0;
    const auto next_line = [&](const char* what) -> std::string_view {
        if (!std::getline(in, raw)) throw ParseError(source, line_no + 1, std::string("missing ") + what);
        ++line_no;
        return strip_cr(raw);
    };

    if (next_line("format line") != "GSTBN-GRID v1") {
        throw ParseError(source, line_no, "expected 'GSTBN-GRID v1'");
    }

    // Parses "key=value" tokens; every expected key exactly once, nothing else.
    const auto parse_keys = [&](std::string_view line, std::span<const std::string_view> keys) {
        std::vector<std::optional<std::string_view>> values(keys.size());
        for (auto token : split_whitespace(line)) {
            const auto eq = token.find('=');
            if (eq == std::string_view::npos) {
                throw ParseError(source, line_no, "expected key=value, got '" + std::string(token) + "'");
            }
            const auto key = token.substr(0, eq);
            const auto it = std::find(keys.begin(), keys.end(), key);
            if (it == keys.end()) throw ParseError(source, line_no, "unknown key '" + std::string(key) + "'");
            auto& slot = values[static_cast<std::size_t>(it - keys.begin())];
            if (slot) throw ParseError(source, line_no, "duplicate key '" + std::string(key) + "'");
            slot = token.substr(eq + 1);
        }
        std::vector<std::string_view> out;
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (!values[i]) throw ParseError(source, line_no, "missing key '" + std::string(keys[i]) + "'");
            out.push_back(*values[i]);
        }
        return out;
    };

    FieldSnapshot snap;
    {
        static constexpr std::array<std::string_view, 2> keys{"variable", "timestamp"};
        const auto v = parse_keys(next_line("variable line"), keys);
        const auto kind = parse_observation_kind(v[0]);
        if (!kind) throw ParseError(source, line_no, "unknown variable '" + std::string(v[0]) + "'");
        const auto ts = parse_number<std::int64_t>(v[1]);
        if (!ts) throw ParseError(source, line_no, "malformed timestamp '" + std::string(v[1]) + "'");
        snap.variable = *kind;
        snap.timestamp = *ts;
    }
    {
        static constexpr std::array<std::string_view, 6> keys{"nlat", "nlon", "lat0", "dlat", "lon0", "dlon"};
        const auto v = parse_keys(next_line("grid line"), keys);
        const auto n_lat = parse_number<std::size_t>(v[0]);
        const auto n_lon = parse_number<std::size_t>(v[1]);
        const auto lat0 = parse_finite(v[2]);
        const auto dlat = parse_finite(v[3]);
        const auto lon0 = parse_finite(v[4]);
        const auto dlon = parse_finite(v[5]);
        if (!n_lat || !n_lon || !lat0 || !dlat || !lon0 || !dlon) {
            throw ParseError(source, line_no, "malformed grid dimensions");
        }
        snap.grid = GridSpec{*n_lat, *n_lon, *lat0, *dlat, *lon0, *dlon};
        try {
            validate(snap.grid);
        } catch (const StructuralError& e) {
            throw ParseError(source, line_no, e.what());
        }
        if (snap.grid.n_lat > (std::size_t{1} << 24) || snap.grid.n_lon > (std::size_t{1} << 24)) {
            throw ParseError(source, line_no, "grid dimensions are implausibly large");
        }
    }

    const auto n = snap.grid.cell_count();
    snap.values.assign(n, 0.0);
    snap.valid.assign(n, 0);
    for (std::size_t i = 0; i < snap.grid.n_lat; ++i) {
        if (!std::getline(in, raw)) {
            throw ParseError(source, line_no + 1,
                             "expected " + std::to_string(snap.grid.n_lat) + " value rows, found " + std::to_string(i));
        }
        ++line_no;
        const auto tokens = split_whitespace(strip_cr(raw));
        if (tokens.size() != snap.grid.n_lon) {
            throw ParseError(source, line_no,
                             "expected " + std::to_string(snap.grid.n_lon) + " values, found " +
                                 std::to_string(tokens.size()));
        }
        for (std::size_t j = 0; j < tokens.size(); ++j) {
            const auto cell = i * snap.grid.n_lon + j;
            if (tokens[j] == "NaN") continue;
            const auto v = parse_finite(tokens[j]);
            if (!v) throw ParseError(source, line_no, "malformed value '" + std::string(tokens[j]) + "'");
            snap.values[cell] = *v;
            snap.valid[cell] = 1;
        }
    }
    while (std::getline(in, raw)) {
        ++line_no;
        if (!is_blank(strip_cr(raw))) {
            throw ParseError(source, line_no, "more value rows than nlat=" + std::to_string(snap.grid.n_lat));
        }
    }
    return snap;
}

FieldSnapshot parse_grid_file(const fs::path& path) {
    auto in = open_input(path);
    return parse_grid(in, path.string());
}

std::string format_grid(const FieldSnapshot& s) {
    validate(s);
    std::string out = "GSTBN-GRID v1\n";
    out += "variable=" + std::string(to_string(s.variable)) + " timestamp=" + std::to_string(s.timestamp) + "\n";
    out += "nlat=" + std::to_string(s.grid.n_lat) + " nlon=" + std::to_string(s.grid.n_lon) +
           " lat0=" + format_double(s.grid.lat0) + " dlat=" + format_double(s.grid.d_lat) +
           " lon0=" + format_double(s.grid.lon0) + " dlon=" + format_double(s.grid.d_lon) + "\n";
    for (std::size_t i = 0; i < s.grid.n_lat; ++i) {
        for (std::size_t j = 0; j < s.grid.n_lon; ++j) {
            const auto cell = i * s.grid.n_lon + j;
            if (j > 0) out.push_back(' ');
            out += s.valid[cell] ? format_double(s.values[cell]) : std::string("NaN");
        }
        out.push_back('\n');
    }
    return out;
}

void write_grid_file(const fs::path& path, const FieldSnapshot& snapshot) {
    write_text_file(path, format_grid(snapshot));
}

SnapshotSeries parse_grid_series(std::span<const fs::path> paths) {
    struct Loaded {
        FieldSnapshot snap;
        std::string source;
    };
    std::map<ObservationKind, std::vector<Loaded>> grouped;
    for (const auto& p : paths) {
        auto snap = parse_grid_file(p);
        grouped[snap.variable].push_back({std::move(snap), p.string()});
    }

    SnapshotSeries series;
    for (auto& [kind, files] : grouped) {
        std::stable_sort(files.begin(), files.end(),
                         [](const Loaded& a, const Loaded& b) { return a.snap.timestamp < b.snap.timestamp; });
        for (std::size_t i = 1; i < files.size(); ++i) {
            if (files[i].snap.timestamp == files[i - 1].snap.timestamp) {
                throw ParseError(files[i].source, 2,
                                 "duplicate " + std::string(to_string(kind)) + " snapshot at timestamp " +
                                     std::to_string(files[i].snap.timestamp) + " (also in " + files[i - 1].source + ")");
            }
            if (!(files[i].snap.grid == files[0].snap.grid)) {
                throw ParseError(files[i].source, 3, "grid differs from " + files[0].source);
            }
        }
        auto& out = series[kind];
        for (auto& f : files) out.push_back(std::move(f.snap));
    }
    return series;
}

std::vector<fs::path> collect_grid_files(std::span<const fs::path> inputs) {
    std::vector<fs::path> out;
    for (const auto& input : inputs) {
        if (fs::is_directory(input)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(input)) {
                if (entry.is_regular_file() && entry.path().extension() == ".grid") found.push_back(entry.path());
            }
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(input);
        }
    }
    return out;
}

// ---- GeoJSON ---------------------------------------------------------------

namespace {

Json point(const GeoCoord& c) {
    return Json{{"type", "Point"}, {"coordinates", Json::array({c.lon, c.lat})}};
}

Json feature(Json geometry, Json properties) {
    return Json{{"type", "Feature"}, {"geometry", std::move(geometry)}, {"properties", std::move(properties)}};
}

bool is_position(const Json& p) {
    return p.is_array() && p.size() >= 2 && p[0].is_number() && p[1].is_number() &&
           is_valid(GeoCoord{p[0].get<double>(), p[1].get<double>()});
}

}  // namespace

Json export_geojson(const TemporalGstbn& net, Timestamp timestamp) {
    const GstbnSnapshot* snap = net.find_snapshot(timestamp);
    if (snap == nullptr) throw NotFoundError("no snapshot at timestamp " + std::to_string(timestamp));

    std::map<SensorId, std::size_t> degree;
    for (const auto& e : snap->edges) ++degree[e.sensor_id];

    Json features = Json::array();
    for (const auto& s : net.sensor_catalog()) {
        const auto it = degree.find(s.id);
        features.push_back(feature(point(s.geolocation), Json{{"node_type", "sensor"},
                                                              {"id", s.id},
                                                              {"membership", to_string(s.membership)},
                                                              {"status", to_string(s.status)},
                                                              {"degree", it == degree.end() ? 0 : it->second}}));
    }
    for (RoIId id : snap->roi_ids) {
        const RoIEventNode* roi = net.find_roi(id);
        Json residuals = Json::object();
        for (const auto& r : roi->snapshots.at(timestamp)) residuals[std::string(to_string(r.variable))] = r.residual;
        features.push_back(feature(point(roi->geolocation), Json{{"node_type", "roi"},
                                                                {"id", id},
                                                                {"roi_value", roi->roi_value(timestamp)},
                                                                {"residuals", std::move(residuals)}}));
    }
    for (const auto& e : snap->edges) {
        const GeoCoord a = net.find_roi(e.roi_id)->geolocation;
        const GeoCoord b = net.find_sensor(e.sensor_id)->geolocation;
        Json line{{"type", "LineString"},
                  {"coordinates", Json::array({Json::array({a.lon, a.lat}), Json::array({b.lon, b.lat})})}};
        features.push_back(feature(std::move(line), Json{{"roi_id", e.roi_id},
                                                         {"sensor_id", e.sensor_id},
                                                         {"weight_km", e.weight_km}}));
    }
    return Json{{"type", "FeatureCollection"}, {"timestamp", timestamp}, {"features", std::move(features)}};
}

std::vector<std::string> geojson_problems(const Json& doc) {
    std::vector<std::string> problems;
    if (!doc.is_object() || !doc.contains("type") || doc["type"] != "FeatureCollection") {
        problems.emplace_back("root is not a FeatureCollection");
        return problems;
    }
    if (!doc.contains("features") || !doc["features"].is_array()) {
        problems.emplace_back("features is not an array");
        return problems;
    }
    const auto& features = doc["features"];
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto& f = features[i];
        const std::string where = "feature " + std::to_string(i) + ": ";
        if (!f.is_object() || !f.contains("type") || f["type"] != "Feature") {
            problems.push_back(where + "type is not Feature");
            continue;
        }
        if (!f.contains("properties") || !(f["properties"].is_object() || f["properties"].is_null())) {
            problems.push_back(where + "properties must be an object or null");
        }
        if (!f.contains("geometry") || !f["geometry"].is_object()) {
            problems.push_back(where + "missing geometry");
            continue;
        }
        const auto& g = f["geometry"];
        if (!g.contains("type") || !g.contains("coordinates")) {
            problems.push_back(where + "geometry lacks type or coordinates");
            continue;
        }
        if (g["type"] == "Point") {
            if (!is_position(g["coordinates"])) problems.push_back(where + "invalid Point position");
        } else if (g["type"] == "LineString") {
            const auto& c = g["coordinates"];
            if (!c.is_array() || c.size() < 2 || !std::all_of(c.begin(), c.end(), is_position)) {
                problems.push_back(where + "LineString needs two or more valid positions");
            }
        } else {
            problems.push_back(where + "unsupported geometry type");
        }
    }
    return problems;
}

// ---- reports ---------------------------------------------------------------

Json to_json(const CoverageReport& r) {
    Json per = Json::array();
    for (const auto& s : r.per_snapshot) {
        per.push_back(Json{{"timestamp", s.timestamp}, {"static_coverage_km", s.static_coverage_km}});
    }
    return Json{{"per_snapshot", std::move(per)},
                {"total_temporal_coverage_km", r.total_temporal_coverage_km},
                {"average_temporal_coverage_km", r.average_temporal_coverage_km},
                {"n_timesteps", r.n_timesteps}};
}

Json to_json(const CentralityReport& r) {
    const auto degree_list = [](const std::map<SensorId, std::size_t>& m) {
        Json out = Json::array();
        for (const auto& [id, d] : m) out.push_back(Json{{"sensor_id", id}, {"degree", d}});
        return out;
    };
    Json per = Json::array();
    for (const auto& [t, m] : r.static_per_snapshot) {
        per.push_back(Json{{"timestamp", t}, {"degrees", degree_list(m)}});
    }
    Json dist = Json::array();
    for (const auto& [d, count] : r.distribution) dist.push_back(Json{{"degree", d}, {"count", count}});
    return Json{{"static_per_snapshot", std::move(per)},
                {"overall", degree_list(r.overall)},
                {"distribution", std::move(dist)}};
}

Json to_json(const RobustnessReport& r, std::optional<double> fragile_label_threshold) {
    Json out{{"removed_sensor_ids", r.removed_sensor_ids},
             {"coverage_before_km", r.coverage_before_km},
             {"coverage_after_km", r.coverage_after_km},
             // JSON has no infinity; null marks a zero baseline that grew.
             {"relative_increase", std::isfinite(r.relative_increase) ? Json(r.relative_increase) : Json(nullptr)}};
    if (fragile_label_threshold) {
        out["label_threshold"] = *fragile_label_threshold;
        out["label"] = r.relative_increase > *fragile_label_threshold ? "fragile" : "robust";
    }
    return out;
}

Json to_json(const PlacementResult& r) {
    Json placed = Json::array();
    for (const auto& p : r.placed) {
        placed.push_back(Json{{"lon", p.location.lon},
                              {"lat", p.location.lat},
                              {"coverage_after_km", p.coverage_after_km},
                              {"seed", p.seed},
                              {"trial_index", p.trial_index}});
    }
    return Json{{"placed", std::move(placed)},
                {"trials_per_sensor", r.trials_per_sensor},
                {"seed", r.seed},
                {"baseline_coverage_km", r.baseline_coverage_km}};
}

Json make_report(const CoverageReport& coverage, const CentralityReport& centrality,
                 const RobustnessReport* robustness, const PlacementResult* placement, const ReportMeta& meta) {
    Json report{{"coverage", to_json(coverage)}, {"centrality", to_json(centrality)}};
    if (robustness != nullptr) report["robustness"] = to_json(*robustness, meta.fragile_label_threshold);
    if (placement != nullptr) report["placement"] = to_json(*placement);

    Json inputs = Json::array();
    for (const auto& in : meta.inputs) inputs.push_back(Json{{"path", in.path}, {"sha256", in.sha256}});
    report["meta"] = Json{{"tool", kToolName},
                          {"version", kToolVersion},
                          {"seed", meta.seed ? Json(*meta.seed) : Json(nullptr)},
                          {"threshold", meta.threshold},
                          {"inputs", std::move(inputs)}};
    return report;
}

std::string sha256_file(const fs::path& path) {
    auto in = open_input(path);
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 init failed");
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        const auto got = in.gcount();
        if (got > 0 && EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(got)) != 1) {
            throw Error("sha256 update failed");
        }
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) throw Error("sha256 final failed");
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return hex.str();
}

std::string format_trace_csv(const PlacementResult& result) {
    std::string out = "sensor,trial_index,lon,lat,score\n";
    for (std::size_t s = 0; s < result.traces.size(); ++s) {
        for (const auto& t : result.traces[s]) {
            out += std::to_string(s) + "," + std::to_string(t.trial_index) + "," + format_double(t.candidate.lon) +
                   "," + format_double(t.candidate.lat) + "," + format_double(t.score) + "\n";
        }
    }
    return out;
}

}  // namespace gstbn
