#ifndef TRANSIT_OPT_OPTIMIZE_HPP
#define TRANSIT_OPT_OPTIMIZE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "transit_opt/cluster.hpp"
#include "transit_opt/simulator.hpp"
#include "transit_opt/store.hpp"
#include "transit_opt/types.hpp"

namespace topt {

// Integer-minute decision grid. Bounds come from the min/max of cleaned
// historical travel times per segment, widened to contain the incumbent so
// every engine can start from (and never fall below) the published schedule.
struct SearchSpace {
    std::string trip_id;
    Seconds first_departure = 0;
    std::vector<std::pair<int, int>> bounds;  // whole minutes, inclusive
    std::vector<int> incumbent;               // published segment times, minutes

    std::size_t dims() const { return bounds.size(); }
    double grid_size() const;
    bool contains(const std::vector<int>& x) const;
    CandidateTimetable candidate(const std::vector<int>& minutes) const;
};

SearchSpace make_search_space(const HistoricalStore& store, const TripPattern& pattern,
                              const std::set<Month>& months);

// Maps a minutes vector to the OTP it achieves.
using Objective = std::function<double(const std::vector<int>&)>;

struct GaConfig {
    int pop_size = 90;
    double crossover_rate = 0.5;
    double mutation_rate = 0.1;
    int max_generations = 50;
    std::uint64_t seed = 0;

    void validate() const;
};

struct PsoConfig {
    int swarm_size = 30;
    double w = 5.0;
    double c1 = 5.0;
    double c2 = 5.0;
    int max_iter = 30;
    std::uint64_t seed = 0;

    void validate() const;
};

struct OptimizationResult {
    CandidateTimetable best;
    double otp_before = 0.0;
    double otp_after = 0.0;
    std::int64_t iterations = 0;
    std::int64_t evaluations = 0;
    double wall_time_s = 0.0;
    std::uint64_t seed = 0;
    std::string engine;
    std::vector<double> best_history;  // best-so-far per iteration

    std::string to_json() const;
};

// Memoizes an Objective on the integer-minute grid and counts the unique
// evaluations that reached the underlying function.
class CachingObjective {
  public:
    explicit CachingObjective(Objective fn) : fn_(std::move(fn)) {}
    double operator()(const std::vector<int>& x);
    std::int64_t evaluations() const { return evaluations_; }

  private:
    Objective fn_;
    std::map<std::vector<int>, double> cache_;
    std::int64_t evaluations_ = 0;
};

// Global optimum over the grid; ties go to the lexicographically smallest
// vector. Throws SearchRefused (with the size estimate) above 1e6 points.
OptimizationResult exhaustive(const SearchSpace& space, const Objective& objective);

// Segment-by-segment windowed-ECDF maximization; per-segment samples must be
// non-empty. The assembled candidate is scored with the full objective and
// never returned if worse than the incumbent.
OptimizationResult greedy(const SearchSpace& space,
                          const std::vector<std::vector<double>>& segment_samples,
                          OnTimeWindow window, const Objective& objective);

OptimizationResult ga_optimize(const SearchSpace& space, const Objective& objective,
                               const GaConfig& cfg);

OptimizationResult pso_optimize(const SearchSpace& space, const Objective& objective,
                                const PsoConfig& cfg);

enum class Engine { greedy, ga, pso, exhaustive };
std::optional<Engine> parse_engine(const std::string& name);
std::string to_string(Engine e);

struct EngineConfigs {
    GaConfig ga;
    PsoConfig pso;
};

// Runs one engine on one trip restricted to a month set.
OptimizationResult run_engine(Engine engine, const HistoricalStore& store,
                              const TripPattern& pattern, const std::set<Month>& months,
                              OnTimeWindow window, const EngineConfigs& cfgs,
                              bool count_first_stop = true);

struct ClusterOptimization {
    MonthClustering clustering;
    std::map<int, OptimizationResult> per_cluster;
    OptimizationResult unclustered;
};

// One engine run per cluster on that cluster's months, plus an unclustered
// baseline over all months.
ClusterOptimization optimize_cluster(const HistoricalStore& store,
                                     const MonthClustering& clustering, const std::string& trip,
                                     Engine engine, OnTimeWindow window, const EngineConfigs& cfgs,
                                     bool count_first_stop = true);

}  // namespace topt

#endif
