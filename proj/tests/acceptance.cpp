// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "gstbn/cli.hpp"
#include "gstbn/error.hpp"
#include "gstbn/ingest.hpp"
#include "gstbn/metrics.hpp"
#include "gstbn/parallel.hpp"
#include "gstbn/placement.hpp"
#include "gstbn/synth.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace gstbn;
namespace gt = gstbn::oracles;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

int failures = 0;

void criterion(int number, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome result;
    try {
        result = body();
    } catch (const std::exception& e) {
        result.ok = false;
        result.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (result.ok && elapsed >= budget_s) {
        result.ok = false;
        result.detail = "over time budget of " + format_double(budget_s) + " s";
    }
    if (!result.ok) ++failures;
    std::printf("[%s] %2d. %s (%.2f s)%s%s\n", result.ok ? "PASS" : "FAIL", number, name.c_str(), elapsed,
                result.detail.empty() ? "" : ": ", result.detail.c_str());
    std::fflush(stdout);
}

Outcome geodesy() {
    Outcome o;
    gt::Rng rng(1001);
    for (int i = 0; i < 1000; ++i) {
        const GeoCoord a = rng.coord();
        const GeoCoord b = rng.coord();
        const long double ref = gt::reference_distance_km(a, b);
        const double got = great_circle_distance(a, b);
        const long double rel = ref == 0 ? std::fabs(static_cast<long double>(got))
                                         : std::fabs((static_cast<long double>(got) - ref) / ref);
        o.require(rel <= 1e-6L, "pair " + std::to_string(i) + " relative error too large");
    }
    const GeoCoord p{-90.07, 29.95};
    o.require(great_circle_distance(p, p) == 0.0, "identity is not exactly zero");
    const double half = M_PI * EarthModel::kMeanRadiusKm;
    o.require(std::fabs(great_circle_distance({0, 0}, {180, 0}) - half) <= 1e-9 * half, "antipodal on equator");
    o.require(std::fabs(great_circle_distance({10, 90}, {-40, -90}) - half) <= 1e-9 * half, "pole to pole");
    return o;
}

Outcome field_oracle() {
    Outcome o;
    gt::Rng rng(2002);
    for (int round = 0; round < 200; ++round) {
        const GridSpec g{1 + rng.index(10), 1 + rng.index(10), rng.uniform(-60, 50), rng.uniform(0.1, 1),
                         rng.uniform(-170, 100), rng.uniform(0.1, 1)};
        const double threshold = rng.uniform(0.0, 2.0);
        std::vector<FieldSnapshot> earlier, later;
        std::vector<ResidualField> stack;
        for (auto kind : kAllObservationKinds) {
            if (!rng.coin(0.6) && !(kind == ObservationKind::current_v && stack.empty())) continue;
            std::vector<double> a(g.cell_count()), b(g.cell_count());
            for (std::size_t c = 0; c < g.cell_count(); ++c) {
                a[c] = rng.coin(0.1) ? std::nan("") : rng.uniform(-3, 3);
                b[c] = rng.coin(0.1) ? std::nan("") : a[c] + rng.uniform(-2, 2);
            }
            earlier.push_back(make_snapshot(0, kind, g, a));
            later.push_back(make_snapshot(1, kind, g, b));
            stack.push_back(compute_residual_field(earlier.back(), later.back()));
        }
        std::vector<std::pair<const FieldSnapshot*, const FieldSnapshot*>> pairs;
        for (std::size_t v = 0; v < stack.size(); ++v) {
            pairs.emplace_back(&earlier[v], &later[v]);
            for (std::size_t c = 0; c < g.cell_count(); ++c) {
                const bool present = earlier[v].valid[c] && later[v].valid[c];
                o.require(static_cast<bool>(stack[v].valid[c]) == present, "residual validity differs");
                if (!present) continue;
                const double d = later[v].values[c] - earlier[v].values[c];
                o.require(stack[v].residuals[c] == d * d, "residual not bit-equal");
            }
        }
        const auto events = extract_roi_events(stack, RoIThreshold{threshold});
        std::set<std::size_t> cells;
        for (const auto& e : events) cells.insert(e.cell);
        o.require(cells == gt::naive_roi_cells(pairs, threshold), "RoI cell set differs on round " + std::to_string(round));
    }
    return o;
}

Outcome edge_oracle() {
    Outcome o;
    gt::Rng rng(3003);
    for (int round = 0; round < 100; ++round) {
        const std::size_t n_sensors = 1 + rng.index(20);
        const std::size_t n_rois = rng.index(201);
        std::vector<SensorNode> sensors;
        for (std::size_t i = 0; i < n_sensors; ++i) {
            auto s = gt::simple_sensor(static_cast<SensorId>(n_sensors - i), rng.coord(-98, -80, 18, 31));
            // Duplicate positions force tie-breaks.
            if (i > 0 && rng.coin(0.2)) s.geolocation = sensors[rng.index(i)].geolocation;
            if (i > 0 && rng.coin(0.1)) s.status = OperationalStatus::inactive;
            sensors.push_back(s);
        }
        std::vector<EdgeQuery> queries;
        for (std::size_t r = 0; r < n_rois; ++r) {
            GeoCoord where = rng.coord(-98, -80, 18, 31);
            if (rng.coin(0.1)) where = sensors[rng.index(n_sensors)].geolocation;
            ObservationSet vars;
            vars.insert(ObservationKind::temperature);
            queries.push_back(EdgeQuery{static_cast<RoIId>(r), where, vars});
        }
        const EdgePolicy policy{};
        const auto got = build_edges(queries, sensors, policy);
        const auto want = gt::brute_force_edges(queries, sensors, policy);
        o.require(got == want, "edges differ on instance " + std::to_string(round));
    }
    return o;
}

Outcome metric_identities() {
    Outcome o;
    gt::Rng rng(4004);
    for (int round = 0; round < 60; ++round) {
        const auto net = gt::random_network(rng, 1 + rng.index(10), rng.index(120), 1 + rng.index(6), rng.coin());
        const double total = total_temporal_coverage(net);
        const double avg = average_temporal_coverage(net);
        const double n = static_cast<double>(net.snapshots().size());
        const double product = avg * n;
        o.require(product == total || std::nextafter(product, total) == total, "average * count != total");
        const auto centrality = degree_centrality(net);
        for (const auto& snap : net.snapshots()) {
            std::size_t sum = 0;
            for (const auto& [id, d] : centrality.static_per_snapshot.at(snap.timestamp)) sum += d;
            o.require(sum == snap.roi_ids.size(), "degree sum != RoI count");
        }
        const GeoCoord candidate = rng.coord(-98, -80, 18, 31);
        o.require(average_temporal_coverage(add_sensor(net, candidate)) <= avg, "add_sensor increased coverage");
        const auto active = net.active_sensors();
        if (active.size() > 1) {
            const SensorId victim = active[rng.index(active.size())].id;
            try {
                o.require(average_temporal_coverage(remove_sensor(net, victim)) >= avg,
                          "remove_sensor decreased coverage");
            } catch (const NoObserversError&) {
                // Strict matching: the victim was the last observer of some RoI.
            }
        }
    }
    return o;
}

Outcome incremental_trials() {
    Outcome o;
    gt::Rng rng(5005);
    const auto net = gt::random_network(rng, 8, 150, 4);
    const TrialEvaluator evaluator(net);
    for (int i = 0; i < 100; ++i) {
        const GeoCoord c = rng.coord(-98, -80, 18, 31);
        o.require(evaluator.score(c) == average_temporal_coverage(add_sensor(net, c)),
                  "fast score differs from rebuild for candidate " + std::to_string(i));
    }
    return o;
}

ScenarioSpec gulf_spec(std::vector<GeoCoord> hotspots, std::vector<GeoCoord> sensors) {
    ScenarioSpec spec;
    spec.grid = GridSpec{53, 73, 18.0, 0.25, -98.0, 0.25};
    spec.timestamps = {0, 86400, 172800, 259200};
    for (const auto& h : hotspots) spec.hotspots.push_back(Hotspot{h, 2.0, 0.1, std::nullopt, std::nullopt});
    spec.sensors = std::move(sensors);
    spec.seed = 7;
    return spec;
}

Outcome single_hotspot() {
    Outcome o;
    const GeoCoord p{-88.0, 25.0};
    const auto spec = gulf_spec({p}, {{-70.0, 40.0}, {-110.0, 8.0}});
    const auto scenario = generate_scenario(spec);
    const auto net = build_temporal_gstbn(scenario.series, scenario.sensors);
    o.require(net.snapshots().size() == 3, "expected three snapshots");
    for (const auto& s : net.snapshots()) {
        o.require(s.roi_ids.size() == 1 && net.find_roi(s.roi_ids[0])->geolocation == p, "RoIs not all at p");
    }
    for (const auto& s : net.active_sensors()) {
        o.require(great_circle_distance(s.geolocation, p) >= 1000.0, "existing sensor closer than 1000 km");
    }
    const auto domain = domain_from_series(scenario.series);
    const double baseline = average_temporal_coverage(net);
    const auto result = monte_carlo_place(net, domain, 10000, 42);
    const double miss = great_circle_distance(result.location, p);
    const double reduction = 1.0 - result.coverage_after_km / baseline;
    o.require(miss < 50.0, "placement " + format_double(miss) + " km from p");
    o.require(reduction >= 0.95, "reduction " + format_double(reduction));

    // Dense scan over the same box: the best lattice point must also sit at p.
    double best = std::numeric_limits<double>::infinity();
    GeoCoord best_at{};
    double existing = std::numeric_limits<double>::infinity();
    for (const auto& s : net.active_sensors()) {
        existing = std::min(existing, static_cast<double>(gt::reference_distance_km(p, s.geolocation)));
    }
    for (double lon = domain.lon_min; lon <= domain.lon_max; lon += 0.05) {
        for (double lat = domain.lat_min; lat <= domain.lat_max; lat += 0.05) {
            const double d = std::min(existing, static_cast<double>(gt::reference_distance_km(p, {lon, lat})));
            if (d < best) {
                best = d;
                best_at = {lon, lat};
            }
        }
    }
    o.require(great_circle_distance(best_at, p) < 5.0, "scan oracle minimum is not at p");
    o.require(result.coverage_after_km - best < 50.0, "Monte Carlo result trails the scan oracle by over 50 km");
    std::ostringstream d;
    d.precision(6);
    d << "miss " << miss << " km, reduction " << reduction * 100 << "%";
    o.detail = d.str();
    return o;
}

Outcome two_hotspots() {
    Outcome o;
    const GeoCoord p1{-95.0, 27.0};
    const GeoCoord p2{-81.0, 27.0};
    // The existing sensor sits halfway, so parking a new sensor between the
    // hotspots buys nothing and each placement must go to a hotspot.
    const auto spec = gulf_spec({p1, p2}, {{-88.0, 27.0}});
    const auto scenario = generate_scenario(spec);
    const auto net = build_temporal_gstbn(scenario.series, scenario.sensors);
    const auto result = place_sequential(net, domain_from_series(scenario.series), 2, 10000, 42);
    o.require(result.placed.size() == 2, "expected two placements");
    if (!o.ok) return o;
    const auto& a = result.placed[0].location;
    const auto& b = result.placed[1].location;
    const bool straight = great_circle_distance(a, p1) < 50.0 && great_circle_distance(b, p2) < 50.0;
    const bool swapped = great_circle_distance(a, p2) < 50.0 && great_circle_distance(b, p1) < 50.0;
    o.require(straight || swapped, "placements not within 50 km of distinct hotspots");
    return o;
}

Outcome robustness_direction() {
    Outcome o;
    std::vector<RoIEventNode> rois;
    for (RoIId i = 0; i < 100; ++i) {
        const GeoCoord where = i < 90 ? GeoCoord{-90.0 + 0.01 * static_cast<double>(i % 10), 25.0 + 0.01 * static_cast<double>(i / 10)}
                                      : GeoCoord{-82.0, 25.0 + 0.1 * static_cast<double>(i - 90)};
        rois.push_back(gt::simple_roi(i, where, {1, 2}));
    }
    const TemporalGstbn dominant({gt::simple_sensor(1, {-90.0, 25.0}), gt::simple_sensor(2, {-82.0, 25.0})}, rois,
                                 {1, 2});
    const auto overall = degree_centrality(dominant).overall;
    o.require(overall.at(1) == 180, "dominant sensor does not hold 90% of links");
    const auto r = evaluate_robustness(dominant, 1);
    o.require(r.removed_sensor_ids == std::vector<SensorId>{1}, "dominant sensor not removed first");
    o.require(r.relative_increase > 0.0, "relative increase not positive");

    const TemporalGstbn twins({gt::simple_sensor(1, {-88.0, 25.0}), gt::simple_sensor(2, {-88.0, 25.0})}, rois, {1, 2});
    o.require(evaluate_robustness(twins, 1).relative_increase == 0.0, "co-located removal changed coverage");
    return o;
}

std::string tree_bytes(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::string out;
    for (const auto& f : files) out += fs::relative(f, dir).generic_string() + "\n" + gt::read_file(f);
    return out;
}

Outcome determinism() {
    Outcome o;
    gt::TempDir dir;
    gt::write_file(dir / "spec.json", R"({
      "grid": {"nlat": 20, "nlon": 24, "lat0": 20, "dlat": 0.5, "lon0": -96, "dlon": 0.5},
      "timestamps": [0, 86400, 172800, 259200],
      "variables": ["temperature", "salinity"],
      "background_noise_amplitude": 0.2,
      "hotspots": [{"lon": -93, "lat": 23, "amplitude": 2, "radius_deg": 1.5},
                   {"lon": -87, "lat": 27, "amplitude": 1.5, "radius_deg": 2, "active_intervals": [1, 2]}],
      "sensors": [{"lon": -96, "lat": 20}, {"lon": -90, "lat": 29}, {"lon": -85, "lat": 21}],
      "land_cells": [0, 1, 2, 24, 25],
      "seed": 3
    })");
    const auto run = [&](std::vector<std::string> args) {
        args.insert(args.begin(), "gstbn");
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        if (code != 0) throw Error("command failed: " + err.str());
        return out.str();
    };
    const auto spec = (dir / "spec.json").string();
    for (const char* name : {"s1", "s2"}) run({"synth", "--spec", spec, "--out-dir", (dir / name).string()});
    o.require(tree_bytes(dir / "s1") == tree_bytes(dir / "s2"), "synth output differs");

    const std::vector<std::string> inputs{"--sensors", (dir / "s1/sensors.csv").string(), "--grids",
                                          (dir / "s1/grids").string()};
    const auto with = [&](std::vector<std::string> head, std::vector<std::string> tail) {
        head.insert(head.end(), inputs.begin(), inputs.end());
        head.insert(head.end(), tail.begin(), tail.end());
        return head;
    };
    for (const char* name : {"b1", "b2"}) run(with({"build"}, {"--out-dir", (dir / name).string()}));
    o.require(tree_bytes(dir / "b1") == tree_bytes(dir / "b2"), "build output differs");
    o.require(run(with({"score"}, {})) == run(with({"score"}, {})), "score output differs");
    const auto robust = with({"robustness"}, {"--remove", "2", "--fragile-threshold", "0.2"});
    o.require(run(robust) == run(robust), "robustness output differs");

    std::vector<std::string> reports;
    for (const char* threads : {"4", "4", "1"}) {
        const auto trace = dir / ("trace_" + std::to_string(reports.size()) + ".csv");
        reports.push_back(run(with({"optimize"}, {"--trials", "2000", "--new-sensors", "2", "--seed", "11",
                                                  "--threads", threads, "--trace", trace.string()})) +
                          gt::read_file(trace));
    }
    set_thread_count(0);
    o.require(reports[0] == reports[1], "multi-threaded optimize output differs between runs");
    o.require(reports[0] == reports[2], "optimize output depends on thread count");
    return o;
}

Outcome round_trips() {
    Outcome o;
    gt::Rng rng(1010);
    for (int round = 0; round < 100; ++round) {
        std::vector<SensorNode> sensors;
        for (std::size_t i = 0, n = rng.index(25); i < n; ++i) {
            auto s = gt::simple_sensor(static_cast<SensorId>(rng.index(1u << 20) * 25 + i), rng.coord());
            s.membership = rng.coin() ? Membership::federal : Membership::ldn;
            s.mobility = rng.coin() ? Mobility::stationary : Mobility::mobile;
            s.status = rng.coin(0.8) ? OperationalStatus::active : OperationalStatus::inactive;
            s.data_source = rng.coin() ? "GCOOS" : "a,\"b\"";
            ObservationSet obs;
            for (auto k : kAllObservationKinds) {
                if (rng.coin()) obs.insert(k);
            }
            if (obs.empty() && s.active()) obs.insert(ObservationKind::current_u);
            s.observations = obs;
            sensors.push_back(s);
        }
        std::istringstream catalog(format_sensor_catalog(sensors));
        o.require(parse_sensor_catalog(catalog, "catalog") == sensors, "catalog round-trip differs");

        const GridSpec g{1 + rng.index(12), 1 + rng.index(12), rng.uniform(-80, 0), rng.uniform(0.01, 3),
                         rng.uniform(-179, 0), rng.uniform(0.01, 3)};
        std::vector<double> values(g.cell_count());
        for (auto& v : values) v = rng.coin(0.15) ? std::nan("") : rng.uniform(-1e4, 1e4) / rng.uniform(1e-3, 1e3);
        const auto snap = make_snapshot(static_cast<Timestamp>(rng.index(1u << 31)) - (1 << 30),
                                        kAllObservationKinds[rng.index(4)], g, values);
        std::istringstream grid(format_grid(snap));
        const auto back = parse_grid(grid, "grid");
        bool same = back.timestamp == snap.timestamp && back.variable == snap.variable && back.grid == snap.grid &&
                    back.valid == snap.valid;
        for (std::size_t c = 0; same && c < values.size(); ++c) same = !snap.valid[c] || back.values[c] == snap.values[c];
        o.require(same, "grid round-trip differs");

        const auto net = gt::random_network(rng, 1 + rng.index(6), rng.index(40), 1 + rng.index(3));
        for (const auto& s : net.snapshots()) {
            const auto doc = export_geojson(net, s.timestamp);
            const auto problems = geojson_problems(doc);
            o.require(problems.empty(), problems.empty() ? "" : problems.front());
            o.require(doc["features"].size() == net.sensor_catalog().size() + 2 * s.roi_ids.size(),
                      "GeoJSON feature count");
        }
    }
    return o;
}

}  // namespace

int main() {
    criterion(1, "geodesy matches independent reference", 1.0, geodesy);
    criterion(2, "residual and RoI extraction match naive per-cell oracle", 5.0, field_oracle);
    criterion(3, "accelerated edges match brute force", 10.0, edge_oracle);
    criterion(4, "metric identities and add/remove monotonicity", 60.0, metric_identities);
    criterion(5, "fast trial score equals full rebuild", 60.0, incremental_trials);
    criterion(6, "single hotspot placement", 60.0, single_hotspot);
    criterion(7, "sequential placement covers both hotspots", 120.0, two_hotspots);
    criterion(8, "robustness direction", 60.0, robustness_direction);
    criterion(9, "CLI output is deterministic", 120.0, determinism);
    criterion(10, "format round-trips and GeoJSON validity", 60.0, round_trips);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
