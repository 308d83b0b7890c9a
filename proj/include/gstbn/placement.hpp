#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gstbn/field.hpp"
#include "gstbn/network.hpp"

namespace gstbn {

// Grid-aligned admissibility flags (1 = a sensor may be placed in this cell).
struct PlacementMask {
    GridSpec grid;
    std::vector<std::uint8_t> admissible;
};

// Longitude/latitude box searched uniformly in degrees, optionally restricted
// by a mask. Coordinates outside the mask's grid are inadmissible.
struct SearchDomain {
    double lon_min = -180.0;
    double lon_max = 180.0;
    double lat_min = -90.0;
    double lat_max = 90.0;
    std::optional<PlacementMask> mask;

    bool admits(const GeoCoord& c) const noexcept;
};

// Throws StructuralError for an empty box or a mask with no admissible cell in the box.
void validate(const SearchDomain& domain);

/// Bounding box spanned by the grid's cells (centers +/- half a cell, clamped
/// to the globe). With `mask_missing` and at least one cell missing in any
/// snapshot, placements are restricted to cells valid in every snapshot.
SearchDomain domain_from_series(const SnapshotSeries& series, bool mask_missing = true);

/// Scores candidates as average temporal coverage after inserting one sensor,
/// without rebuilding the network: each RoI keeps min(current link, distance
/// to the candidate). Bit-identical to average_temporal_coverage(add_sensor(net, c)).
class TrialEvaluator {
public:
    explicit TrialEvaluator(const TemporalGstbn& net);

    double score(const GeoCoord& candidate) const noexcept;
    double baseline() const noexcept { return baseline_; }

private:
    struct Link {
        GeoCoord roi;
        double weight_km;
    };

    std::vector<std::vector<Link>> snapshots_;
    EarthModel earth_;
    double baseline_ = 0.0;
};

// The candidate for trial `trial_index`: the first admissible uniform draw of
// a stream seeded from (seed, trial_index). Independent of the trial count.
GeoCoord draw_candidate(const SearchDomain& domain, std::uint64_t seed, std::size_t trial_index);

// Seed used for the i-th sensor of a sequential placement.
std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t placement_index);

struct TrialRecord {
    std::size_t trial_index = 0;
    GeoCoord candidate;
    double score = 0.0;
};

struct MonteCarloOptions {
    bool keep_trace = false;
};

struct MonteCarloResult {
    GeoCoord location;
    double coverage_after_km = 0.0;
    std::size_t trial_index = 0;
    std::vector<TrialRecord> trace;  // filled when keep_trace is set
};

/// Evaluates `trials` candidates (in parallel) and returns the lowest score,
/// ties going to the earliest trial. Deterministic in (net, domain, trials, seed).
MonteCarloResult monte_carlo_place(const TemporalGstbn& net, const SearchDomain& domain, std::size_t trials,
                                   std::uint64_t seed, const MonteCarloOptions& options = {});

struct PlacedSensor {
    GeoCoord location;
    double coverage_after_km = 0.0;
    std::uint64_t seed = 0;
    std::size_t trial_index = 0;
};

struct PlacementResult {
    std::vector<PlacedSensor> placed;
    std::size_t trials_per_sensor = 0;
    std::uint64_t seed = 0;
    double baseline_coverage_km = 0.0;
    // Per-placement traces, when requested.
    std::vector<std::vector<TrialRecord>> traces;
};

/// Places `n_sensors` one at a time, committing each winner with add_sensor
/// before searching for the next. Sensor i searches with derive_seed(seed, i).
PlacementResult place_sequential(const TemporalGstbn& net, const SearchDomain& domain, std::size_t n_sensors,
                                 std::size_t trials, std::uint64_t seed, const MonteCarloOptions& options = {});

// Replays a placement result onto a network.
TemporalGstbn apply_placements(const TemporalGstbn& net, const PlacementResult& result);

}  // namespace gstbn
