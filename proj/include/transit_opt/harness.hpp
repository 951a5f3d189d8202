#ifndef TRANSIT_OPT_HARNESS_HPP
#define TRANSIT_OPT_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "transit_opt/optimize.hpp"
#include "transit_opt/simulator.hpp"
#include "transit_opt/store.hpp"

namespace topt {

// Process exit codes shared by the CLI and the C API.
enum ExitCode {
    kExitOk = 0,
    kExitUsage = 2,
    kExitData = 3,
    kExitSearchRefused = 4,
};

struct SweepSpec {
    std::string param;
    std::vector<double> values;
    int repeats = 1;
};

struct RunConfig {
    std::string schedule_dir;
    std::string timepoints;
    std::string out;
    OnTimeWindow window;
    Engine engine = Engine::ga;
    EngineConfigs engines;
    bool clustering = true;
    int upper_limit = 4;
    double silhouette_threshold = 0.25;
    std::uint64_t seed = 1;
    int repeat = 1;
    int jobs = 1;
    bool force = false;
    bool count_first_stop = true;
    bool remove_outliers = true;
    std::optional<std::string> trip;
    std::optional<SweepSpec> sweep;
    std::string synth_spec;   // synth command input
    std::string results_dir;  // report command input

    // Overlays `text` (a JSON object) onto defaults / a previous config.
    static RunConfig from_json(const std::string& text);
    void merge_json(const std::string& text);
    std::string to_json() const;
};

// Candidate timetable CSV (trip_id,timepoint_id,scheduled_time).
void write_candidate_csv(const std::filesystem::path& path, const TripPattern& pattern,
                         const CandidateTimetable& candidate);
CandidateTimetable read_candidate_csv(const std::filesystem::path& path,
                                      const TripPattern& pattern);

int cmd_ingest(const RunConfig& cfg, std::ostream& log);
int cmd_clean(const RunConfig& cfg, std::ostream& log);
int cmd_cluster(const RunConfig& cfg, std::ostream& log);
int cmd_optimize(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_stability(const RunConfig& cfg, std::ostream& log);
int cmd_synth(const RunConfig& cfg, std::ostream& log);
int cmd_report(const RunConfig& cfg, std::ostream& log);

// Dispatches a subcommand by name; maps exceptions to exit codes and logs
// the diagnostic. This is the single entry point the C API exposes.
int run_command(const std::string& command, const std::string& config_json, std::ostream& log);

extern const char* kSweepableParams[7];

}  // namespace topt

#endif
