#include "transit_opt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <thread>

#include "json.hpp"
#include "transit_opt/cluster.hpp"
#include "transit_opt/csv.hpp"
#include "transit_opt/ingest.hpp"
#include "transit_opt/stats.hpp"
#include "transit_opt/synth.hpp"
#include "transit_opt/time_util.hpp"

namespace topt {

const char* kSweepableParams[7] = {"pop_size", "crossover_rate", "mutation_rate",
                                   "swarm_size", "w",             "c1",
                                   "c2"};

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void apply_window(OnTimeWindow& w, const json& j) {
    if (j.contains("window_early")) w.early = j["window_early"].get<Seconds>();
    if (j.contains("window_late")) w.late = j["window_late"].get<Seconds>();
}

}  // namespace

RunConfig RunConfig::from_json(const std::string& text) {
    RunConfig cfg;
    cfg.merge_json(text);
    return cfg;
}

void RunConfig::merge_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad config JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config must be a JSON object");

    if (j.contains("schedule_dir")) schedule_dir = j["schedule_dir"].get<std::string>();
    if (j.contains("timepoints")) timepoints = j["timepoints"].get<std::string>();
    if (j.contains("out")) out = j["out"].get<std::string>();
    apply_window(window, j);
    if (!window.valid()) throw UsageError("window must satisfy early <= 0 <= late");
    if (j.contains("engine")) {
        auto e = parse_engine(j["engine"].get<std::string>());
        if (!e) throw UsageError("unknown engine \"" + j["engine"].get<std::string>() +
                                 "\" (expected greedy|ga|pso|exhaustive)");
        engine = *e;
    }
    if (j.contains("clustering")) clustering = j["clustering"].get<bool>();
    if (j.contains("upper_limit")) upper_limit = j["upper_limit"].get<int>();
    if (j.contains("silhouette_threshold"))
        silhouette_threshold = j["silhouette_threshold"].get<double>();
    if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
    if (j.contains("repeat")) repeat = j["repeat"].get<int>();
    if (j.contains("jobs")) jobs = j["jobs"].get<int>();
    if (j.contains("force")) force = j["force"].get<bool>();
    if (j.contains("count_first_stop")) count_first_stop = j["count_first_stop"].get<bool>();
    if (j.contains("remove_outliers")) remove_outliers = j["remove_outliers"].get<bool>();
    if (j.contains("trip")) {
        if (j["trip"].is_null())
            trip.reset();
        else
            trip = j["trip"].get<std::string>();
    }
    if (j.contains("ga")) {
        const json& g = j["ga"];
        if (g.contains("pop_size")) engines.ga.pop_size = g["pop_size"].get<int>();
        if (g.contains("crossover_rate"))
            engines.ga.crossover_rate = g["crossover_rate"].get<double>();
        if (g.contains("mutation_rate")) engines.ga.mutation_rate = g["mutation_rate"].get<double>();
        if (g.contains("max_generations"))
            engines.ga.max_generations = g["max_generations"].get<int>();
    }
    if (j.contains("pso")) {
        const json& p = j["pso"];
        if (p.contains("swarm_size")) engines.pso.swarm_size = p["swarm_size"].get<int>();
        if (p.contains("w")) engines.pso.w = p["w"].get<double>();
        if (p.contains("c1")) engines.pso.c1 = p["c1"].get<double>();
        if (p.contains("c2")) engines.pso.c2 = p["c2"].get<double>();
        if (p.contains("max_iter")) engines.pso.max_iter = p["max_iter"].get<int>();
    }
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        SweepSpec spec;
        if (s.contains("param")) spec.param = s["param"].get<std::string>();
        if (s.contains("values")) spec.values = s["values"].get<std::vector<double>>();
        if (s.contains("repeats")) spec.repeats = s["repeats"].get<int>();
        sweep = spec;
    }
    if (j.contains("synth_spec")) synth_spec = j["synth_spec"].get<std::string>();
    if (j.contains("results")) results_dir = j["results"].get<std::string>();

    if (repeat < 1) throw UsageError("repeat must be >= 1");
    if (jobs < 1) throw UsageError("jobs must be >= 1");
    if (upper_limit < 2) throw UsageError("upper_limit must be >= 2");
}

std::string RunConfig::to_json() const {
    json j;
    j["schedule_dir"] = schedule_dir;
    j["timepoints"] = timepoints;
    j["out"] = out;
    j["window_early"] = window.early;
    j["window_late"] = window.late;
    j["engine"] = to_string(engine);
    j["clustering"] = clustering;
    j["upper_limit"] = upper_limit;
    j["silhouette_threshold"] = silhouette_threshold;
    j["seed"] = seed;
    j["repeat"] = repeat;
    j["jobs"] = jobs;
    j["force"] = force;
    j["count_first_stop"] = count_first_stop;
    j["remove_outliers"] = remove_outliers;
    if (trip) j["trip"] = *trip;
    j["ga"] = {{"pop_size", engines.ga.pop_size},
               {"crossover_rate", engines.ga.crossover_rate},
               {"mutation_rate", engines.ga.mutation_rate},
               {"max_generations", engines.ga.max_generations}};
    j["pso"] = {{"swarm_size", engines.pso.swarm_size},
                {"w", engines.pso.w},
                {"c1", engines.pso.c1},
                {"c2", engines.pso.c2},
                {"max_iter", engines.pso.max_iter}};
    if (sweep)
        j["sweep"] = {{"param", sweep->param}, {"values", sweep->values},
                      {"repeats", sweep->repeats}};
    if (!synth_spec.empty()) j["synth_spec"] = synth_spec;
    if (!results_dir.empty()) j["results"] = results_dir;
    return j.dump(2);
}

void write_candidate_csv(const std::filesystem::path& path, const TripPattern& pattern,
                         const CandidateTimetable& candidate) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path.string());
    f << "trip_id,timepoint_id,scheduled_time\n";
    for (std::size_t j = 0; j < pattern.timepoints.size(); ++j)
        f << candidate.trip_id << "," << pattern.timepoints[j] << ","
          << format_hms(candidate.scheduled_time(j)) << "\n";
}

CandidateTimetable read_candidate_csv(const std::filesystem::path& path,
                                      const TripPattern& pattern) {
    csv::Table t = csv::read_file(path);
    int c_trip = t.column("trip_id");
    int c_tp = t.column("timepoint_id");
    int c_time = t.column("scheduled_time");
    if (c_trip < 0 || c_tp < 0 || c_time < 0)
        throw DataError("candidate CSV missing required columns: " + path.string());
    std::map<std::string, Seconds> times;
    for (const auto& row : t.rows) {
        if (csv::Table::field(row, c_trip) != pattern.trip_id) continue;
        auto parsed = parse_hms(csv::Table::field(row, c_time));
        if (!parsed) throw DataError("bad time in candidate CSV: " + path.string());
        times[csv::Table::field(row, c_tp)] = *parsed;
    }
    CandidateTimetable c;
    c.trip_id = pattern.trip_id;
    std::vector<Seconds> sched;
    for (const auto& tp : pattern.timepoints) {
        auto it = times.find(tp);
        if (it == times.end())
            throw DataError("candidate CSV misses timepoint " + tp + " of trip " +
                            pattern.trip_id);
        sched.push_back(it->second);
    }
    c.first_departure = sched.front();
    for (std::size_t j = 0; j + 1 < sched.size(); ++j)
        c.segment_times.push_back(sched[j + 1] - sched[j]);
    return c;
}

namespace {

struct LoadedData {
    StaticIngestResult ingest;
    TimepointIngestResult timepoints;
    HistoricalStore store;
    CleaningReport report;
};

LoadedData load_data(const RunConfig& cfg) {
    if (cfg.schedule_dir.empty() || cfg.timepoints.empty())
        throw UsageError("schedule_dir and timepoints paths are required");
    LoadedData d;
    d.ingest = ingest_static(cfg.schedule_dir);
    d.timepoints = ingest_timepoints(cfg.timepoints);
    auto [store, report] =
        clean(std::move(d.timepoints.records), d.ingest.patterns, cfg.remove_outliers);
    d.timepoints.records.clear();
    d.store = std::move(store);
    d.report = report;
    return d;
}

std::vector<std::string> trips_in_scope(const HistoricalStore& store, const RunConfig& cfg) {
    std::vector<std::string> trips;
    if (cfg.trip) {
        if (!store.pattern(*cfg.trip)) throw DataError("unknown trip: " + *cfg.trip);
        trips.push_back(*cfg.trip);
        return trips;
    }
    for (const auto& p : store.patterns())
        if (store.days(p.trip_id)) trips.push_back(p.trip_id);
    std::sort(trips.begin(), trips.end());
    if (trips.empty()) throw DataError("no trip has historical records");
    return trips;
}

void guard_output(const std::filesystem::path& path, bool force) {
    if (!force && std::filesystem::exists(path))
        throw UsageError("refusing to overwrite " + path.string() + " (use --force)");
}

std::filesystem::path require_out(const RunConfig& cfg) {
    if (cfg.out.empty()) throw UsageError("an output directory (--out) is required");
    std::filesystem::create_directories(cfg.out);
    return cfg.out;
}

MonthClustering clustering_for(const HistoricalStore& store, const std::string& trip,
                               const RunConfig& cfg, std::uint64_t seed) {
    auto single = [&] {
        MonthClustering c;
        c.k = 1;
        for (const Month& m : store.months(trip)) c.assignment[m] = 0;
        return c;
    };
    if (!cfg.clustering) return single();
    try {
        auto built = build_features(store, trip);
        if (built.features.size() < 2) return single();
        auto normalized = normalize(built.features);
        return select_k(normalized, cfg.upper_limit, seed, cfg.silhouette_threshold);
    } catch (const DataError&) {
        return single();  // clustering unavailable, fall back to one cluster
    }
}

struct ClusterEvaluation {
    double weighted_otp = 0.0;
    std::int64_t hits = 0;
    std::int64_t total = 0;
};

ClusterEvaluation evaluate_clustered(const HistoricalStore& store, const TripPattern& pattern,
                                     const ClusterOptimization& copt, OnTimeWindow window,
                                     bool count_first_stop) {
    Simulator sim(store, window, count_first_stop);
    ClusterEvaluation ev;
    for (const auto& [c, result] : copt.per_cluster) {
        std::set<Month> months;
        for (const auto& [m, cc] : copt.clustering.assignment)
            if (cc == c) months.insert(m);
        OtpReport r = sim.on_time_performance(pattern, result.best, months);
        ev.hits += r.hits;
        ev.total += r.total;
    }
    ev.weighted_otp = ev.total > 0 ? static_cast<double>(ev.hits) / static_cast<double>(ev.total)
                                   : 0.0;
    return ev;
}

json result_to_json(const OptimizationResult& r) { return json::parse(r.to_json()); }

}  // namespace

int cmd_ingest(const RunConfig& cfg, std::ostream& log) {
    LoadedData d = load_data(cfg);
    json j;
    j["patterns"] = d.ingest.patterns.size();
    j["warnings"] = d.ingest.warnings;
    j["rows_total"] = d.timepoints.rows_total;
    j["row_errors"] = d.timepoints.row_errors;
    j["records_kept"] = d.store.records().size();
    if (!cfg.out.empty()) {
        auto dir = require_out(cfg);
        guard_output(dir / "ingest.json", cfg.force);
        std::ofstream(dir / "ingest.json") << j.dump(2) << "\n";
    }
    log << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_clean(const RunConfig& cfg, std::ostream& log) {
    LoadedData d = load_data(cfg);
    if (!cfg.out.empty()) {
        auto dir = require_out(cfg);
        guard_output(dir / "cleaning_report.json", cfg.force);
        std::ofstream(dir / "cleaning_report.json") << d.report.to_json() << "\n";
    }
    log << d.report.to_json() << "\n";
    return kExitOk;
}

int cmd_cluster(const RunConfig& cfg, std::ostream& log) {
    LoadedData d = load_data(cfg);
    std::filesystem::path dir;
    if (!cfg.out.empty()) dir = require_out(cfg);
    for (const std::string& trip : trips_in_scope(d.store, cfg)) {
        MonthClustering c = clustering_for(d.store, trip, cfg, cfg.seed);
        log << "trip " << trip << ": k=" << c.k << " silhouette=" << fmt(c.silhouette) << "\n";
        if (!dir.empty()) {
            auto path = dir / ("clustering_" + trip + ".json");
            guard_output(path, cfg.force);
            std::ofstream(path) << c.to_json() << "\n";
        }
    }
    return kExitOk;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& log) {
    auto dir = require_out(cfg);
    guard_output(dir / "summary.json", cfg.force);
    LoadedData d = load_data(cfg);
    Simulator sim(d.store, cfg.window, cfg.count_first_stop);
    std::vector<std::string> trips = trips_in_scope(d.store, cfg);

    json summary;
    summary["config"] = json::parse(cfg.to_json());
    summary["runs"] = json::array();

    struct Row {
        int run;
        std::string trip;
        std::string variant;
        double otp;
    };
    std::vector<Row> rows;

    for (int run = 0; run < cfg.repeat; ++run) {
        std::uint64_t seed_r = cfg.seed + static_cast<std::uint64_t>(run);
        EngineConfigs cfgs = cfg.engines;
        cfgs.ga.seed = seed_r;
        cfgs.pso.seed = seed_r;
        json run_json;
        run_json["run"] = run;
        run_json["seed"] = seed_r;
        run_json["trips"] = json::object();

        auto run_dir = dir / ("run" + std::to_string(run));
        std::filesystem::create_directories(run_dir);

        for (const std::string& trip : trips) {
            const TripPattern& pattern = *d.store.pattern(trip);
            CandidateTimetable incumbent = CandidateTimetable::from_pattern(pattern);
            OtpReport original = sim.on_time_performance(pattern, incumbent, {});

            MonthClustering clustering = clustering_for(d.store, trip, cfg, seed_r);
            ClusterOptimization copt =
                optimize_cluster(d.store, clustering, trip, cfg.engine, cfg.window, cfgs,
                                 cfg.count_first_stop);
            ClusterEvaluation clustered =
                evaluate_clustered(d.store, pattern, copt, cfg.window, cfg.count_first_stop);

            std::string tag = to_string(cfg.engine);
            rows.push_back({run, trip, "original", original.otp});
            rows.push_back({run, trip, tag + "_unclustered", copt.unclustered.otp_after});
            rows.push_back({run, trip, tag + "_clustered", clustered.weighted_otp});

            write_candidate_csv(run_dir / ("timetable_" + trip + "_unclustered.csv"), pattern,
                                copt.unclustered.best);
            for (const auto& [c, result] : copt.per_cluster)
                write_candidate_csv(
                    run_dir / ("timetable_" + trip + "_cluster" + std::to_string(c) + ".csv"),
                    pattern, result.best);

            json t;
            t["original_otp"] = original.otp;
            t["clustering"] = json::parse(clustering.to_json());
            t["unclustered"] = result_to_json(copt.unclustered);
            t["clustered_weighted_otp"] = clustered.weighted_otp;
            t["per_cluster"] = json::object();
            for (const auto& [c, result] : copt.per_cluster)
                t["per_cluster"][std::to_string(c)] = result_to_json(result);
            run_json["trips"][trip] = std::move(t);
        }
        summary["runs"].push_back(std::move(run_json));
    }

    // Aggregate mean/std per (trip, variant) across repeats.
    std::map<std::pair<std::string, std::string>, std::vector<double>> grouped;
    for (const Row& r : rows) grouped[{r.trip, r.variant}].push_back(r.otp);
    summary["aggregate"] = json::array();
    for (const auto& [key, otps] : grouped)
        summary["aggregate"].push_back({{"trip", key.first},
                                        {"variant", key.second},
                                        {"mean_otp", stats::mean(otps)},
                                        {"std_otp", stats::stddev(otps)}});

    std::ofstream(dir / "summary.json") << summary.dump(2) << "\n";
    {
        std::ofstream f(dir / "summary.csv");
        f << "run,trip,variant,otp\n";
        for (const Row& r : rows)
            f << r.run << "," << r.trip << "," << r.variant << "," << fmt(r.otp) << "\n";
        for (const auto& [key, otps] : grouped)
            f << "mean," << key.first << "," << key.second << "," << fmt(stats::mean(otps))
              << "\n";
        for (const auto& [key, otps] : grouped)
            f << "std," << key.first << "," << key.second << "," << fmt(stats::stddev(otps))
              << "\n";
    }
    for (const Row& r : rows)
        log << "run " << r.run << " trip " << r.trip << " " << r.variant << " otp "
            << fmt(r.otp) << "\n";
    log << "wrote " << (dir / "summary.json").string() << "\n";
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
    auto usage = [] {
        std::string names;
        for (const char* p : kSweepableParams) {
            if (!names.empty()) names += ", ";
            names += p;
        }
        return UsageError("sweep requires a parameter from: " + names);
    };
    if (!cfg.sweep || cfg.sweep->param.empty()) throw usage();
    const SweepSpec& spec = *cfg.sweep;
    bool known = std::any_of(std::begin(kSweepableParams), std::end(kSweepableParams),
                             [&](const char* p) { return spec.param == p; });
    if (!known) throw usage();
    if (spec.values.empty()) throw UsageError("sweep grid must be non-empty");
    if (spec.repeats < 1) throw UsageError("sweep repeats must be >= 1");

    bool is_ga = spec.param == "pop_size" || spec.param == "crossover_rate" ||
                 spec.param == "mutation_rate";
    Engine engine = is_ga ? Engine::ga : Engine::pso;

    auto dir = require_out(cfg);
    auto csv_path = dir / ("sweep_" + spec.param + ".csv");
    guard_output(csv_path, cfg.force);

    LoadedData d = load_data(cfg);
    std::string trip = trips_in_scope(d.store, cfg).front();
    const TripPattern& pattern = *d.store.pattern(trip);

    struct Task {
        double value;
        int run;
    };
    std::vector<Task> tasks;
    for (double v : spec.values)
        for (int run = 0; run < spec.repeats; ++run) tasks.push_back({v, run});

    std::vector<OptimizationResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            EngineConfigs cfgs = cfg.engines;
            cfgs.ga.seed = cfgs.pso.seed = cfg.seed + static_cast<std::uint64_t>(tasks[i].run);
            double v = tasks[i].value;
            if (spec.param == "pop_size") cfgs.ga.pop_size = static_cast<int>(v);
            if (spec.param == "crossover_rate") cfgs.ga.crossover_rate = v;
            if (spec.param == "mutation_rate") cfgs.ga.mutation_rate = v;
            if (spec.param == "swarm_size") cfgs.pso.swarm_size = static_cast<int>(v);
            if (spec.param == "w") cfgs.pso.w = v;
            if (spec.param == "c1") cfgs.pso.c1 = v;
            if (spec.param == "c2") cfgs.pso.c2 = v;
            results[i] = run_engine(engine, d.store, pattern, {}, cfg.window, cfgs,
                                    cfg.count_first_stop);
        }
    };
    std::vector<std::thread> pool;
    int jobs = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ofstream f(csv_path);
    f << "param,value,run,otp,wall_time\n";
    for (std::size_t i = 0; i < tasks.size(); ++i)
        f << spec.param << "," << tasks[i].value << "," << tasks[i].run << ","
          << fmt(results[i].otp_after) << "," << fmt(results[i].wall_time_s) << "\n";
    log << "wrote " << csv_path.string() << " (" << tasks.size() << " rows)\n";
    return kExitOk;
}

int cmd_stability(const RunConfig& cfg, std::ostream& log) {
    auto dir = require_out(cfg);
    auto csv_path = dir / "stability.csv";
    guard_output(csv_path, cfg.force);

    LoadedData d = load_data(cfg);
    std::string trip = cfg.trip.value_or(trips_in_scope(d.store, cfg).front());
    const TripPattern& pattern = *d.store.pattern(trip);

    std::vector<double> otps, walls;
    std::ofstream f(csv_path);
    f << "run,otp,wall_time\n";
    for (int run = 0; run < cfg.repeat; ++run) {
        EngineConfigs cfgs = cfg.engines;
        cfgs.ga.seed = cfgs.pso.seed = cfg.seed + static_cast<std::uint64_t>(run);
        OptimizationResult r =
            run_engine(cfg.engine, d.store, pattern, {}, cfg.window, cfgs, cfg.count_first_stop);
        otps.push_back(r.otp_after);
        walls.push_back(r.wall_time_s);
        f << run << "," << fmt(r.otp_after) << "," << fmt(r.wall_time_s) << "\n";
    }
    json j;
    j["engine"] = to_string(cfg.engine);
    j["trip"] = trip;
    j["runs"] = cfg.repeat;
    j["mean_otp"] = stats::mean(otps);
    j["std_otp"] = stats::stddev(otps);
    j["mean_wall_time_s"] = stats::mean(walls);
    j["std_wall_time_s"] = stats::stddev(walls);
    std::ofstream(dir / "stability.json") << j.dump(2) << "\n";
    log << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_synth(const RunConfig& cfg, std::ostream& log) {
    if (cfg.synth_spec.empty()) throw UsageError("synth requires a spec file (--spec)");
    std::ifstream in(cfg.synth_spec);
    if (!in) throw DataError("cannot open synth spec: " + cfg.synth_spec);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    SynthSpec spec = SynthSpec::from_json(text);
    auto dir = require_out(cfg);
    guard_output(dir / "timepoints.csv", cfg.force);
    SynthOutput out = generate(spec);
    write_dataset(out, dir);
    log << "wrote " << out.records.size() << " records for " << out.patterns.size()
        << " trip(s) under " << dir.string() << "\n";
    return kExitOk;
}

int cmd_report(const RunConfig& cfg, std::ostream& log) {
    std::filesystem::path dir = !cfg.results_dir.empty() ? cfg.results_dir : cfg.out;
    if (dir.empty()) throw UsageError("report requires a results directory");
    if (!std::filesystem::exists(dir)) throw DataError("no such directory: " + dir.string());

    std::vector<std::string> errors;
    std::string md = "# Results\n";

    auto summary_path = dir / "summary.json";
    if (std::filesystem::exists(summary_path)) {
        try {
            std::ifstream in(summary_path);
            json s = json::parse(in);
            md += "\n## Optimization summary\n\n| trip | variant | mean OTP | std |\n"
                  "|---|---|---|---|\n";
            for (const auto& row : s.at("aggregate"))
                md += "| " + row.at("trip").get<std::string>() + " | " +
                      row.at("variant").get<std::string>() + " | " +
                      fmt(row.at("mean_otp").get<double>()) + " | " +
                      fmt(row.at("std_otp").get<double>()) + " |\n";
        } catch (const std::exception& e) {
            errors.push_back(summary_path.string() + ": " + e.what());
        }
    }

    auto stability_path = dir / "stability.json";
    if (std::filesystem::exists(stability_path)) {
        try {
            std::ifstream in(stability_path);
            json s = json::parse(in);
            md += "\n## Stability (" + s.at("engine").get<std::string>() + ", " +
                  std::to_string(s.at("runs").get<int>()) + " runs)\n\n";
            md += "- mean OTP " + fmt(s.at("mean_otp").get<double>()) + " (std " +
                  fmt(s.at("std_otp").get<double>()) + ")\n";
            md += "- mean wall time " + fmt(s.at("mean_wall_time_s").get<double>()) + " s (std " +
                  fmt(s.at("std_wall_time_s").get<double>()) + ")\n";
        } catch (const std::exception& e) {
            errors.push_back(stability_path.string() + ": " + e.what());
        }
    }

    std::vector<std::filesystem::path> sweeps;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.rfind("sweep_", 0) == 0 && entry.path().extension() == ".csv")
            sweeps.push_back(entry.path());
    }
    std::sort(sweeps.begin(), sweeps.end());
    if (!sweeps.empty()) {
        md += "\n## Sweeps\n\n";
        auto plots = dir / "plots";
        std::filesystem::create_directories(plots);
        for (const auto& path : sweeps) {
            try {
                csv::Table t = csv::read_file(path);
                int c_val = t.column("value");
                int c_otp = t.column("otp");
                int c_wall = t.column("wall_time");
                if (c_val < 0 || c_otp < 0 || c_wall < 0) throw DataError("missing columns");
                // Plot-ready: mean otp and wall time per grid value.
                std::map<double, std::pair<std::vector<double>, std::vector<double>>> by_value;
                for (const auto& row : t.rows) {
                    double v = std::stod(csv::Table::field(row, c_val));
                    by_value[v].first.push_back(std::stod(csv::Table::field(row, c_otp)));
                    by_value[v].second.push_back(std::stod(csv::Table::field(row, c_wall)));
                }
                auto out_path = plots / path.filename();
                std::ofstream f(out_path);
                f << "value,mean_otp,mean_wall_time\n";
                for (const auto& [v, series] : by_value)
                    f << v << "," << fmt(stats::mean(series.first)) << ","
                      << fmt(stats::mean(series.second)) << "\n";
                md += "- `" + path.filename().string() + "`: " + std::to_string(t.rows.size()) +
                      " rows, aggregated to `plots/" + path.filename().string() + "`\n";
            } catch (const std::exception& e) {
                errors.push_back(path.string() + ": " + e.what());
            }
        }
    }

    if (!errors.empty()) {
        md += "\n## Errors\n\n";
        for (const auto& e : errors) md += "- " + e + "\n";
    }
    if (md == "# Results\n") {
        md += "\n(no results found)\n";
        log << "warning: no results found in " << dir.string() << "\n";
    }
    std::ofstream(dir / "report.md") << md;
    log << "wrote " << (dir / "report.md").string() << "\n";
    return kExitOk;
}

int run_command(const std::string& command, const std::string& config_json, std::ostream& log) {
    try {
        RunConfig cfg = RunConfig::from_json(config_json);
        if (command == "ingest") return cmd_ingest(cfg, log);
        if (command == "clean") return cmd_clean(cfg, log);
        if (command == "cluster") return cmd_cluster(cfg, log);
        if (command == "optimize") return cmd_optimize(cfg, log);
        if (command == "sweep") return cmd_sweep(cfg, log);
        if (command == "stability") return cmd_stability(cfg, log);
        if (command == "synth") return cmd_synth(cfg, log);
        if (command == "report") return cmd_report(cfg, log);
        log << "error: unknown command \"" << command << "\"\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        log << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SearchRefused& e) {
        log << "error: " << e.what() << "\n";
        return kExitSearchRefused;
    } catch (const DataError& e) {
        log << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitData;
    }
}

}  // namespace topt
