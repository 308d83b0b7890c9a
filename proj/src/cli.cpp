#include "gstbn/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "gstbn/error.hpp"
#include "gstbn/ingest.hpp"
#include "gstbn/metrics.hpp"
#include "gstbn/network.hpp"
#include "gstbn/parallel.hpp"
#include "gstbn/placement.hpp"
#include "gstbn/synth.hpp"

namespace gstbn::cli {

namespace fs = std::filesystem;

namespace {

struct PipelineFlags {
    std::string sensors;
    std::vector<std::string> grids;
    double threshold = RoIThreshold::kDefault;
    std::vector<std::string> scales;
    bool strict = false;
    std::uint64_t seed = 42;
    unsigned threads = 0;
    std::string out;
};

struct Loaded {
    SnapshotSeries series;
    TemporalGstbn net;
    ReportMeta meta;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f) {
    cmd->add_option("--sensors", f.sensors, "Sensor catalog CSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--grids", f.grids, "Grid files or directories of *.grid files")->required();
    cmd->add_option("--threshold", f.threshold, "RoI residual threshold")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--scale", f.scales, "Residual scale factor, e.g. salinity=0.5 (repeatable)");
    cmd->add_flag("--strict-observations", f.strict, "Link RoIs only to sensors observing a contributing variable");
    cmd->add_option("--seed", f.seed, "Master random seed")->capture_default_str();
    cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)")->capture_default_str();
}

ResidualScales parse_scales(const std::vector<std::string>& items) {
    ResidualScales scales;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        const auto kind = eq == std::string::npos ? std::nullopt : parse_observation_kind(item.substr(0, eq));
        if (!kind) throw ParameterError("--scale expects <variable>=<factor>, got '" + item + "'");
        double factor = 0.0;
        std::istringstream in(item.substr(eq + 1));
        if (!(in >> factor) || !in.eof() || !std::isfinite(factor) || factor < 0.0) {
            throw ParameterError("--scale factor must be a non-negative number, got '" + item + "'");
        }
        scales[*kind] = factor;
    }
    return scales;
}

Loaded load(const PipelineFlags& f) {
    set_thread_count(f.threads);

    std::vector<fs::path> inputs(f.grids.begin(), f.grids.end());
    const auto grid_files = collect_grid_files(inputs);
    if (grid_files.empty()) throw StructuralError("no grid files found");

    ReportMeta meta;
    meta.seed = f.seed;
    meta.threshold = f.threshold;
    meta.inputs.push_back({f.sensors, sha256_file(f.sensors)});
    for (const auto& p : grid_files) meta.inputs.push_back({p.generic_string(), sha256_file(p)});

    auto catalog = parse_sensor_catalog(fs::path(f.sensors));
    auto series = parse_grid_series(grid_files);
    RoIOptions roi{RoIThreshold{f.threshold}, parse_scales(f.scales)};
    EdgePolicy policy{EarthModel{}, f.strict};
    auto net = build_temporal_gstbn(series, std::move(catalog), roi, policy);
    return {std::move(series), std::move(net), std::move(meta)};
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_text_file(path, text);
    }
}

void write_geojson_dir(const TemporalGstbn& net, const fs::path& dir) {
    fs::create_directories(dir);
    for (const auto& snap : net.snapshots()) {
        write_text_file(dir / ("snapshot_" + std::to_string(snap.timestamp) + ".geojson"),
                        export_geojson(net, snap.timestamp).dump() + "\n");
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Geo-spatiotemporal bipartite network sensor placement toolkit", "gstbn"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    PipelineFlags build_flags;
    std::string build_dir;
    auto* build = app.add_subcommand("build", "Construct the network and write one GeoJSON file per snapshot");
    add_pipeline_flags(build, build_flags);
    build->add_option("--out-dir", build_dir, "Directory for snapshot_<timestamp>.geojson files")->required();

    PipelineFlags score_flags;
    auto* score = app.add_subcommand("score", "Write the coverage and centrality report");
    add_pipeline_flags(score, score_flags);
    score->add_option("--out", score_flags.out, "Report path (default stdout)");

    PipelineFlags robust_flags;
    std::size_t remove_k = 1;
    std::optional<double> fragile_threshold;
    auto* robust = app.add_subcommand("robustness", "Remove the most central sensors and report the coverage change");
    add_pipeline_flags(robust, robust_flags);
    robust->add_option("--remove", remove_k, "Number of sensors to remove")->required()->check(CLI::PositiveNumber);
    robust->add_option("--fragile-threshold", fragile_threshold,
                       "Label the network fragile when relative_increase exceeds this value");
    robust->add_option("--out", robust_flags.out, "Report path (default stdout)");

    PipelineFlags opt_flags;
    std::size_t trials = 1000;
    std::size_t new_sensors = 1;
    bool unmasked = false;
    std::vector<double> bbox;
    std::string trace_path;
    std::string opt_geojson_dir;
    auto* optimize = app.add_subcommand("optimize", "Monte Carlo placement of new sensors");
    add_pipeline_flags(optimize, opt_flags);
    optimize->add_option("--trials", trials, "Candidates per new sensor")->capture_default_str()->check(CLI::PositiveNumber);
    optimize->add_option("--new-sensors", new_sensors, "Sensors to place sequentially")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    optimize->add_flag("--unmasked", unmasked, "Allow placements on missing (land) cells");
    optimize->add_option("--bbox", bbox, "Search box: lon_min lon_max lat_min lat_max")->expected(4);
    optimize->add_option("--trace", trace_path, "Write every trial to this CSV");
    optimize->add_option("--geojson-dir", opt_geojson_dir, "Write GeoJSON snapshots of the updated network");
    optimize->add_option("--out", opt_flags.out, "Report path (default stdout)");

    std::string spec_path;
    std::string synth_dir;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic scenario from a JSON spec");
    synth->add_option("--spec", spec_path, "Scenario spec JSON")->required()->check(CLI::ExistingFile);
    synth->add_option("--out-dir", synth_dir, "Output directory")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*build) {
            const auto loaded = load(build_flags);
            write_geojson_dir(loaded.net, build_dir);
            out << "wrote " << loaded.net.snapshots().size() << " snapshot(s) to " << build_dir << "\n";
        } else if (*score) {
            const auto loaded = load(score_flags);
            const auto report = make_report(coverage_report(loaded.net), degree_centrality(loaded.net), nullptr,
                                            nullptr, loaded.meta);
            emit(score_flags.out, report.dump(2) + "\n", out);
        } else if (*robust) {
            auto loaded = load(robust_flags);
            loaded.meta.fragile_label_threshold = fragile_threshold;
            const auto robustness = evaluate_robustness(loaded.net, remove_k);
            const auto report = make_report(coverage_report(loaded.net), degree_centrality(loaded.net), &robustness,
                                            nullptr, loaded.meta);
            emit(robust_flags.out, report.dump(2) + "\n", out);
        } else if (*optimize) {
            const auto loaded = load(opt_flags);
            SearchDomain domain = domain_from_series(loaded.series, !unmasked);
            if (!bbox.empty()) {
                domain.lon_min = bbox[0];
                domain.lon_max = bbox[1];
                domain.lat_min = bbox[2];
                domain.lat_max = bbox[3];
            }
            MonteCarloOptions options{!trace_path.empty()};
            const auto placement = place_sequential(loaded.net, domain, new_sensors, trials, opt_flags.seed, options);
            const auto updated = apply_placements(loaded.net, placement);
            const auto report = make_report(coverage_report(updated), degree_centrality(updated), nullptr, &placement,
                                            loaded.meta);
            emit(opt_flags.out, report.dump(2) + "\n", out);
            if (!trace_path.empty()) write_text_file(trace_path, format_trace_csv(placement));
            if (!opt_geojson_dir.empty()) write_geojson_dir(updated, opt_geojson_dir);
        } else if (*synth) {
            std::ifstream in(spec_path, std::ios::binary);
            Json doc;
            try {
                doc = Json::parse(in);
            } catch (const Json::parse_error& e) {
                throw ParseError(spec_path, 0, e.what());
            }
            const auto spec = scenario_spec_from_json(doc);
            const auto scenario = generate_scenario(spec);
            write_scenario(spec, scenario, synth_dir);
            out << "wrote scenario to " << synth_dir << "\n";
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomainError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomainError;
    }
    return kExitOk;
}

}  // namespace gstbn::cli
