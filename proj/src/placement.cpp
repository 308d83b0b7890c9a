#include "gstbn/placement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "gstbn/error.hpp"
#include "gstbn/metrics.hpp"
#include "gstbn/parallel.hpp"

namespace gstbn {

namespace {

constexpr std::size_t kMaxRejections = 1'000'000;

double unit_interval(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::seed_seq seed_sequence(std::uint64_t a, std::uint64_t b) {
    return std::seed_seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                         static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
}

}  // namespace

bool SearchDomain::admits(const GeoCoord& c) const noexcept {
    if (!is_valid(c) || c.lon < lon_min || c.lon > lon_max || c.lat < lat_min || c.lat > lat_max) {
        return false;
    }
    if (!mask) return true;
    const auto cell = mask->grid.locate(c);
    return cell && mask->admissible[*cell] != 0;
}

void validate(const SearchDomain& d) {
    const bool finite = std::isfinite(d.lon_min) && std::isfinite(d.lon_max) && std::isfinite(d.lat_min) &&
                        std::isfinite(d.lat_max);
    if (!finite || !(d.lon_min < d.lon_max) || !(d.lat_min < d.lat_max)) {
        throw StructuralError("search domain is empty");
    }
    if (d.lon_min < -180.0 || d.lon_max > 180.0 || d.lat_min < -90.0 || d.lat_max > 90.0) {
        throw StructuralError("search domain exceeds valid coordinates");
    }
    if (d.mask) {
        if (d.mask->admissible.size() != d.mask->grid.cell_count()) {
            throw StructuralError("placement mask does not match its grid");
        }
        bool any = false;
        for (std::size_t cell = 0; cell < d.mask->admissible.size() && !any; ++cell) {
            any = d.mask->admissible[cell] != 0 && d.admits(d.mask->grid.cell_center(cell));
        }
        if (!any) throw StructuralError("search domain has no admissible placement cell");
    }
}

SearchDomain domain_from_series(const SnapshotSeries& series, bool mask_missing) {
    if (series.empty() || series.begin()->second.empty()) throw StructuralError("no field series supplied");
    const GridSpec grid = series.begin()->second.front().grid;
    validate(grid);

    SearchDomain domain;
    const GeoCoord first = grid.cell_center(0);
    const GeoCoord last = grid.cell_center(grid.cell_count() - 1);
    domain.lon_min = std::max(-180.0, first.lon - grid.d_lon / 2);
    domain.lon_max = std::min(180.0, last.lon + grid.d_lon / 2);
    domain.lat_min = std::max(-90.0, first.lat - grid.d_lat / 2);
    domain.lat_max = std::min(90.0, last.lat + grid.d_lat / 2);

    if (mask_missing) {
        PlacementMask mask{grid, std::vector<std::uint8_t>(grid.cell_count(), 1)};
        bool any_missing = false;
        for (const auto& entry : series) {
            for (const auto& snap : entry.second) {
                if (!(snap.grid == grid)) throw StructuralError("field series use different grids");
                for (std::size_t cell = 0; cell < mask.admissible.size(); ++cell) {
                    if (!snap.valid[cell]) {
                        mask.admissible[cell] = 0;
                        any_missing = true;
                    }
                }
            }
        }
        if (any_missing) domain.mask = std::move(mask);
    }
    return domain;
}

TrialEvaluator::TrialEvaluator(const TemporalGstbn& net) : earth_(net.policy().earth) {
    if (net.snapshots().empty()) throw StructuralError("network has no snapshots");
    snapshots_.reserve(net.snapshots().size());
    for (const auto& snap : net.snapshots()) {
        auto& links = snapshots_.emplace_back();
        links.reserve(snap.edges.size());
        for (const auto& e : snap.edges) links.push_back({net.find_roi(e.roi_id)->geolocation, e.weight_km});
    }
    baseline_ = average_temporal_coverage(net);
}

double TrialEvaluator::score(const GeoCoord& candidate) const noexcept {
    // Same summation order as static_coverage / total_temporal_coverage.
    double total = 0.0;
    for (const auto& links : snapshots_) {
        double sum = 0.0;
        for (const auto& link : links) {
            const double d = great_circle_distance(link.roi, candidate, earth_);
            sum += d < link.weight_km ? d : link.weight_km;
        }
        total += sum;
    }
    return total / static_cast<double>(snapshots_.size());
}

GeoCoord draw_candidate(const SearchDomain& domain, std::uint64_t seed, std::size_t trial_index) {
    auto seq = seed_sequence(seed, static_cast<std::uint64_t>(trial_index));
    std::mt19937_64 engine(seq);
    const double lon_span = domain.lon_max - domain.lon_min;
    const double lat_span = domain.lat_max - domain.lat_min;
    for (std::size_t attempt = 0; attempt < kMaxRejections; ++attempt) {
        const double u = unit_interval(engine());
        const double v = unit_interval(engine());
        const GeoCoord c{domain.lon_min + u * lon_span, domain.lat_min + v * lat_span};
        if (domain.admits(c)) return c;
    }
    throw StructuralError("search domain rejected every candidate draw");
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t placement_index) {
    auto seq = seed_sequence(master_seed, static_cast<std::uint64_t>(placement_index));
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
}

MonteCarloResult monte_carlo_place(const TemporalGstbn& net, const SearchDomain& domain, std::size_t trials,
                                   std::uint64_t seed, const MonteCarloOptions& options) {
    if (trials == 0) throw ParameterError("trial count must be at least 1");
    validate(domain);
    const TrialEvaluator evaluator(net);

    std::vector<GeoCoord> candidates(trials);
    std::vector<double> scores(trials);
    parallel_for_chunks(trials, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            candidates[i] = draw_candidate(domain, seed, i);
            scores[i] = evaluator.score(candidates[i]);
        }
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < trials; ++i) {
        if (scores[i] < scores[best]) best = i;
    }

    MonteCarloResult result{candidates[best], scores[best], best, {}};
    if (options.keep_trace) {
        result.trace.reserve(trials);
        for (std::size_t i = 0; i < trials; ++i) result.trace.push_back({i, candidates[i], scores[i]});
    }
    return result;
}

PlacementResult place_sequential(const TemporalGstbn& net, const SearchDomain& domain, std::size_t n_sensors,
                                 std::size_t trials, std::uint64_t seed, const MonteCarloOptions& options) {
    if (n_sensors == 0) throw ParameterError("number of new sensors must be at least 1");

    PlacementResult result;
    result.trials_per_sensor = trials;
    result.seed = seed;
    result.baseline_coverage_km = average_temporal_coverage(net);

    TemporalGstbn current = net;
    for (std::size_t i = 0; i < n_sensors; ++i) {
        const std::uint64_t sensor_seed = derive_seed(seed, i);
        auto best = monte_carlo_place(current, domain, trials, sensor_seed, options);
        current = add_sensor(current, best.location);
        result.placed.push_back({best.location, best.coverage_after_km, sensor_seed, best.trial_index});
        if (options.keep_trace) result.traces.push_back(std::move(best.trace));
    }
    return result;
}

TemporalGstbn apply_placements(const TemporalGstbn& net, const PlacementResult& result) {
    TemporalGstbn current = net;
    for (const auto& p : result.placed) current = add_sensor(current, p.location);
    return current;
}

}  // namespace gstbn
