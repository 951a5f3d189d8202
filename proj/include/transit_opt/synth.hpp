#ifndef TRANSIT_OPT_SYNTH_HPP
#define TRANSIT_OPT_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "transit_opt/types.hpp"

namespace topt {

// Recipe for a synthetic timepoint dataset: lognormal segment travel times
// with per-regime medians, exponential dwell, optional trip chaining.
struct SynthSpec {
    int n_timepoints = 5;
    int days_per_month = 30;
    std::vector<Month> months;
    std::map<Month, int> regime_of;                    // month -> regime id
    std::vector<std::vector<double>> regime_medians;   // [regime][segment], seconds
    double dispersion = 0.15;                          // lognormal sigma
    std::vector<double> dwell_mean;                    // per timepoint, seconds
    Seconds first_departure = 8 * 3600;
    Seconds first_arrival_early = 120;  // how early the vehicle shows up at stop 1
    int schedule_offset_min = 0;        // published schedule offset from medians
    Seconds layover = 120;
    bool chain = false;  // add a chained return trip
    std::uint64_t seed = 1;

    void validate() const;
    std::string to_json() const;
    static SynthSpec from_json(const std::string& text);
};

struct SynthOutput {
    std::vector<TripPattern> patterns;
    std::vector<TimepointRecord> records;
};

// Deterministic given the spec. The published schedule per segment is the
// median of the per-regime medians (rounded to whole minutes) plus the
// configured offset.
SynthOutput generate(const SynthSpec& spec);

// Emits the GTFS subset plus timepoints.csv consumed by the ingest module.
void write_dataset(const SynthOutput& out, const std::filesystem::path& dir);

}  // namespace topt

#endif
