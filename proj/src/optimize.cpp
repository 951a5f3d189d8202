#include "transit_opt/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "json.hpp"
#include "transit_opt/stats.hpp"

namespace topt {

double SearchSpace::grid_size() const {
    double size = 1.0;
    for (const auto& [lo, hi] : bounds) size *= static_cast<double>(hi - lo + 1);
    return size;
}

bool SearchSpace::contains(const std::vector<int>& x) const {
    if (x.size() != bounds.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] < bounds[j].first || x[j] > bounds[j].second) return false;
    return true;
}

CandidateTimetable SearchSpace::candidate(const std::vector<int>& minutes) const {
    CandidateTimetable c;
    c.trip_id = trip_id;
    c.first_departure = first_departure;
    for (int m : minutes) c.segment_times.push_back(m * 60);
    return c;
}

SearchSpace make_search_space(const HistoricalStore& store, const TripPattern& pattern,
                              const std::set<Month>& months) {
    SearchSpace space;
    space.trip_id = pattern.trip_id;
    space.first_departure = pattern.scheduled_times.front();
    CandidateTimetable incumbent = CandidateTimetable::from_pattern(pattern);
    std::vector<int> inc = incumbent.segment_minutes();
    for (std::size_t j = 0; j + 1 < pattern.timepoints.size(); ++j) {
        SegmentRef seg{pattern.trip_id, pattern.timepoints[j], pattern.timepoints[j + 1]};
        std::vector<double> samples = store.travel_times(seg, months);
        if (samples.empty())
            throw DataError("no historical travel times on segment " + seg.from + "->" + seg.to +
                            " of trip " + pattern.trip_id);
        auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
        int lo = std::max(1, static_cast<int>(std::floor(*mn / 60.0)));
        int hi = std::max(lo, static_cast<int>(std::ceil(*mx / 60.0)));
        int inc_j = std::max(1, inc[j]);
        lo = std::min(lo, inc_j);
        hi = std::max(hi, inc_j);
        space.bounds.emplace_back(lo, hi);
        space.incumbent.push_back(inc_j);
    }
    return space;
}

void GaConfig::validate() const {
    if (pop_size < 2) throw UsageError("ga: pop_size must be >= 2");
    if (crossover_rate < 0 || crossover_rate > 1) throw UsageError("ga: crossover_rate in [0,1]");
    if (mutation_rate < 0 || mutation_rate > 1) throw UsageError("ga: mutation_rate in [0,1]");
    if (max_generations < 0) throw UsageError("ga: max_generations must be >= 0");
}

void PsoConfig::validate() const {
    if (swarm_size < 2) throw UsageError("pso: swarm_size must be >= 2");
    if (w <= 0 || c1 <= 0 || c2 <= 0) throw UsageError("pso: w, c1, c2 must be > 0");
    if (max_iter < 0) throw UsageError("pso: max_iter must be >= 0");
}

std::string OptimizationResult::to_json() const {
    nlohmann::json j;
    j["engine"] = engine;
    j["trip_id"] = best.trip_id;
    j["first_departure"] = best.first_departure;
    j["segment_minutes"] = best.segment_minutes();
    j["otp_before"] = otp_before;
    j["otp_after"] = otp_after;
    j["iterations"] = iterations;
    j["evaluations"] = evaluations;
    j["seed"] = seed;
    j["wall_time_s"] = wall_time_s;
    j["best_history"] = best_history;
    return j.dump(2);
}

double CachingObjective::operator()(const std::vector<int>& x) {
    auto it = cache_.find(x);
    if (it != cache_.end()) return it->second;
    double v = fn_(x);
    ++evaluations_;
    cache_.emplace(x, v);
    return v;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

void check_monotone(const std::vector<double>& history) {
    for (std::size_t i = 1; i < history.size(); ++i)
        if (history[i] < history[i - 1] - 1e-12)
            throw std::logic_error("best-so-far objective decreased");
}

}  // namespace

OptimizationResult exhaustive(const SearchSpace& space, const Objective& objective) {
    double size = space.grid_size();
    if (size > 1e6)
        throw SearchRefused("exhaustive search refused: grid has " + std::to_string(size) +
                            " candidates (limit 1e6)");
    auto start = Clock::now();
    CachingObjective obj(objective);

    OptimizationResult result;
    result.engine = "exhaustive";
    result.otp_before = obj(space.incumbent);

    std::vector<int> x;
    for (const auto& [lo, hi] : space.bounds) x.push_back(lo);
    std::vector<int> best = x;
    double best_v = -1.0;
    bool done = space.bounds.empty();
    while (!done) {
        double v = obj(x);
        ++result.iterations;
        if (v > best_v) {  // strict: first (lexicographically smallest) wins ties
            best_v = v;
            best = x;
        }
        std::size_t j = x.size();
        while (j > 0) {
            --j;
            if (x[j] < space.bounds[j].second) {
                ++x[j];
                break;
            }
            x[j] = space.bounds[j].first;
            if (j == 0) done = true;
        }
    }
    result.best = space.candidate(best);
    result.otp_after = best_v;
    result.best_history = {best_v};
    result.evaluations = obj.evaluations();
    result.wall_time_s = elapsed_s(start);
    return result;
}

OptimizationResult greedy(const SearchSpace& space,
                          const std::vector<std::vector<double>>& segment_samples,
                          OnTimeWindow window, const Objective& objective) {
    if (segment_samples.size() != space.dims())
        throw UsageError("greedy: one sample set per segment required");
    auto start = Clock::now();
    CachingObjective obj(objective);

    std::vector<int> choice;
    for (std::size_t j = 0; j < segment_samples.size(); ++j) {
        const auto& samples = segment_samples[j];
        if (samples.empty())
            throw DataError("greedy: no historical samples on segment " + std::to_string(j + 1) +
                            " of trip " + space.trip_id);
        auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
        // Scan every minute whose window covers at least one sample beyond a
        // bare boundary touch.
        int lo = std::max(1, static_cast<int>(std::floor((*mn - window.late) / 60.0)) + 1);
        int hi = std::max(lo, static_cast<int>(std::ceil((*mx - window.early) / 60.0)) - 1);
        int best_x = lo;
        double best_cov = -1.0;
        for (int x = lo; x <= hi; ++x) {
            double cov = stats::ecdf_window(samples, x * 60.0, window.early, window.late);
            if (cov > best_cov) {
                best_cov = cov;
                best_x = x;
            }
        }
        choice.push_back(best_x);
    }

    OptimizationResult result;
    result.engine = "greedy";
    result.otp_before = obj(space.incumbent);
    double v = obj(choice);
    result.iterations = static_cast<std::int64_t>(choice.size());
    // Incumbent floor: never return a candidate worse than the schedule in use.
    if (v >= result.otp_before) {
        result.best = space.candidate(choice);
        result.otp_after = v;
    } else {
        result.best = space.candidate(space.incumbent);
        result.otp_after = result.otp_before;
    }
    result.best_history = {result.otp_after};
    result.evaluations = obj.evaluations();
    result.wall_time_s = elapsed_s(start);
    return result;
}

OptimizationResult ga_optimize(const SearchSpace& space, const Objective& objective,
                               const GaConfig& cfg) {
    cfg.validate();
    auto start = Clock::now();
    CachingObjective obj(objective);
    std::mt19937_64 rng(cfg.seed);
    std::size_t d = space.dims();
    std::size_t pop_size = static_cast<std::size_t>(cfg.pop_size);

    std::vector<std::vector<int>> pop(pop_size);
    pop[0] = space.incumbent;
    for (std::size_t i = 1; i < pop_size; ++i)
        for (const auto& [lo, hi] : space.bounds) pop[i].push_back(uniform_int(rng, lo, hi));

    std::vector<double> fitness(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) fitness[i] = obj(pop[i]);

    auto best_index = [&] {
        return static_cast<std::size_t>(
            std::max_element(fitness.begin(), fitness.end()) - fitness.begin());
    };
    std::size_t best = best_index();
    std::vector<int> best_x = pop[best];
    double best_v = fitness[best];

    OptimizationResult result;
    result.engine = "ga";
    result.seed = cfg.seed;
    result.otp_before = obj(space.incumbent);

    auto tournament = [&]() -> std::size_t {
        std::size_t a = static_cast<std::size_t>(uniform_int(rng, 0, cfg.pop_size - 1));
        std::size_t b = static_cast<std::size_t>(uniform_int(rng, 0, cfg.pop_size - 1));
        return fitness[a] >= fitness[b] ? a : b;
    };

    int stagnant = 0;
    for (int gen = 0; gen < cfg.max_generations && stagnant < 10; ++gen) {
        std::vector<std::vector<int>> next;
        next.reserve(pop_size);
        next.push_back(best_x);  // elitism of 1
        while (next.size() < pop_size) {
            std::vector<int> child = pop[tournament()];
            if (d >= 2 && uniform01(rng) < cfg.crossover_rate) {
                const std::vector<int>& other = pop[tournament()];
                int point = uniform_int(rng, 1, static_cast<int>(d) - 1);
                for (std::size_t j = static_cast<std::size_t>(point); j < d; ++j)
                    child[j] = other[j];
            }
            for (std::size_t j = 0; j < d; ++j) {
                if (uniform01(rng) < cfg.mutation_rate) {
                    child[j] += uniform01(rng) < 0.5 ? -1 : 1;
                    child[j] = std::clamp(child[j], space.bounds[j].first, space.bounds[j].second);
                }
            }
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        for (std::size_t i = 0; i < pop_size; ++i) fitness[i] = obj(pop[i]);
        std::size_t gen_best = best_index();
        if (fitness[gen_best] > best_v) {
            best_v = fitness[gen_best];
            best_x = pop[gen_best];
            stagnant = 0;
        } else {
            ++stagnant;
        }
        ++result.iterations;
        result.best_history.push_back(best_v);
    }
    check_monotone(result.best_history);

    result.best = space.candidate(best_x);
    result.otp_after = best_v;
    result.evaluations = obj.evaluations();
    result.wall_time_s = elapsed_s(start);
    return result;
}

OptimizationResult pso_optimize(const SearchSpace& space, const Objective& objective,
                                const PsoConfig& cfg) {
    cfg.validate();
    auto start = Clock::now();
    CachingObjective obj(objective);
    std::mt19937_64 rng(cfg.seed);
    std::size_t d = space.dims();
    std::size_t swarm = static_cast<std::size_t>(cfg.swarm_size);

    auto rounded = [&](const std::vector<double>& x) {
        std::vector<int> out(d);
        for (std::size_t j = 0; j < d; ++j)
            out[j] = std::clamp(static_cast<int>(std::lround(x[j])), space.bounds[j].first,
                                space.bounds[j].second);
        return out;
    };

    std::vector<std::vector<double>> pos(swarm, std::vector<double>(d));
    std::vector<std::vector<double>> vel(swarm, std::vector<double>(d, 0.0));
    for (std::size_t j = 0; j < d; ++j) pos[0][j] = static_cast<double>(space.incumbent[j]);
    for (std::size_t i = 1; i < swarm; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            auto [lo, hi] = space.bounds[j];
            pos[i][j] = lo + uniform01(rng) * (hi - lo);
        }

    std::vector<std::vector<double>> pbest = pos;
    std::vector<double> pbest_v(swarm);
    for (std::size_t i = 0; i < swarm; ++i) pbest_v[i] = obj(rounded(pos[i]));
    std::size_t g = static_cast<std::size_t>(
        std::max_element(pbest_v.begin(), pbest_v.end()) - pbest_v.begin());
    std::vector<double> gbest = pbest[g];
    double gbest_v = pbest_v[g];

    OptimizationResult result;
    result.engine = "pso";
    result.seed = cfg.seed;
    result.otp_before = obj(space.incumbent);

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        for (std::size_t i = 0; i < swarm; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                double r1 = uniform01(rng);
                double r2 = uniform01(rng);
                vel[i][j] = cfg.w * vel[i][j] + cfg.c1 * r1 * (pbest[i][j] - pos[i][j]) +
                            cfg.c2 * r2 * (gbest[j] - pos[i][j]);
                auto [lo, hi] = space.bounds[j];
                double range = static_cast<double>(hi - lo);
                // Half-range velocity clamp keeps w > 1 from diverging;
                // without it the swarm pins to the box corners.
                if (range > 0) vel[i][j] = std::clamp(vel[i][j], -0.5 * range, 0.5 * range);
                pos[i][j] += vel[i][j];
                if (pos[i][j] < lo) {
                    pos[i][j] = lo;
                    vel[i][j] = -0.5 * vel[i][j];
                } else if (pos[i][j] > hi) {
                    pos[i][j] = hi;
                    vel[i][j] = -0.5 * vel[i][j];
                }
            }
            double v = obj(rounded(pos[i]));
            if (v > pbest_v[i]) {
                pbest_v[i] = v;
                pbest[i] = pos[i];
            }
            if (v > gbest_v) {
                gbest_v = v;
                gbest = pos[i];
            }
        }
        ++result.iterations;
        result.best_history.push_back(gbest_v);
    }
    check_monotone(result.best_history);

    result.best = space.candidate(rounded(gbest));
    result.otp_after = gbest_v;
    result.evaluations = obj.evaluations();
    result.wall_time_s = elapsed_s(start);
    return result;
}

std::optional<Engine> parse_engine(const std::string& name) {
    if (name == "greedy") return Engine::greedy;
    if (name == "ga") return Engine::ga;
    if (name == "pso") return Engine::pso;
    if (name == "exhaustive") return Engine::exhaustive;
    return std::nullopt;
}

std::string to_string(Engine e) {
    switch (e) {
        case Engine::greedy: return "greedy";
        case Engine::ga: return "ga";
        case Engine::pso: return "pso";
        case Engine::exhaustive: return "exhaustive";
    }
    return "?";
}

OptimizationResult run_engine(Engine engine, const HistoricalStore& store,
                              const TripPattern& pattern, const std::set<Month>& months,
                              OnTimeWindow window, const EngineConfigs& cfgs,
                              bool count_first_stop) {
    SearchSpace space = make_search_space(store, pattern, months);
    Simulator sim(store, window, count_first_stop);
    Objective objective = [&](const std::vector<int>& minutes) {
        return sim.on_time_performance(pattern, space.candidate(minutes), months).otp;
    };
    switch (engine) {
        case Engine::exhaustive: return exhaustive(space, objective);
        case Engine::ga: return ga_optimize(space, objective, cfgs.ga);
        case Engine::pso: return pso_optimize(space, objective, cfgs.pso);
        case Engine::greedy: {
            std::vector<std::vector<double>> samples;
            for (std::size_t j = 0; j + 1 < pattern.timepoints.size(); ++j)
                samples.push_back(store.travel_times(
                    SegmentRef{pattern.trip_id, pattern.timepoints[j], pattern.timepoints[j + 1]},
                    months));
            return greedy(space, samples, window, objective);
        }
    }
    throw UsageError("unknown engine");
}

ClusterOptimization optimize_cluster(const HistoricalStore& store,
                                     const MonthClustering& clustering, const std::string& trip,
                                     Engine engine, OnTimeWindow window, const EngineConfigs& cfgs,
                                     bool count_first_stop) {
    const TripPattern* pattern = store.pattern(trip);
    if (!pattern) throw DataError("unknown trip: " + trip);

    ClusterOptimization out;
    out.clustering = clustering;
    for (int c = 0; c < clustering.k; ++c) {
        std::set<Month> months;
        for (const auto& [m, cc] : clustering.assignment)
            if (cc == c) months.insert(m);
        out.per_cluster.emplace(
            c, run_engine(engine, store, *pattern, months, window, cfgs, count_first_stop));
    }
    std::set<Month> all;
    for (const auto& [m, c] : clustering.assignment) all.insert(m);
    out.unclustered = run_engine(engine, store, *pattern, all, window, cfgs, count_first_stop);
    return out;
}

}  // namespace topt
