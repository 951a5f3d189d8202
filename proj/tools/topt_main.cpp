// Command line front end. Talks to the library through the C API only.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "transit_opt.h"

namespace {

using nlohmann::json;

// Options shared by subcommands. Only flags the user actually passed are
// merged, so precedence is CLI > config file > built-in defaults.
struct CommonOpts {
    std::string config_file;
    std::string schedule_dir;
    std::string timepoints;
    std::string out;
    std::string trip;
    std::string engine;
    int window_early = 0;
    int window_late = 0;
    bool clusters = true;
    int upper_limit = 0;
    std::uint64_t seed = 0;
    int repeat = 0;
    int jobs = 0;
    bool force = false;
};

struct Parsed {
    std::string command;
    json config = json::object();
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_file, "JSON config file");
    cmd->add_option("--schedule", o.schedule_dir, "Directory with the static schedule tables");
    cmd->add_option("--timepoints", o.timepoints, "Historical timepoint CSV");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--trip", o.trip, "Restrict to one trip id");
    cmd->add_option("--engine", o.engine, "Search engine: greedy, ga, pso, exhaustive");
    cmd->add_option("--window-early", o.window_early, "On-time window lower bound, seconds (<= 0)");
    cmd->add_option("--window-late", o.window_late, "On-time window upper bound, seconds (>= 0)");
    cmd->add_flag("--clusters,!--no-clusters", o.clusters, "Optimize per month cluster");
    cmd->add_option("--upper-limit", o.upper_limit, "Largest cluster count to try");
    cmd->add_option("--seed", o.seed, "Base random seed");
    cmd->add_option("--repeat", o.repeat, "Number of repeated runs");
    cmd->add_option("--jobs", o.jobs, "Worker threads");
    cmd->add_flag("--force", o.force, "Overwrite existing outputs");
}

json merge_cli(const CLI::App* cmd, const CommonOpts& o) {
    json j = json::object();
    if (!o.config_file.empty()) {
        std::ifstream in(o.config_file);
        if (!in) {
            std::cerr << "error: cannot open config file " << o.config_file << "\n";
            std::exit(2);
        }
        try {
            in >> j;
        } catch (const json::exception& e) {
            std::cerr << "error: bad config file " << o.config_file << ": " << e.what() << "\n";
            std::exit(2);
        }
        if (!j.is_object()) {
            std::cerr << "error: config file must hold a JSON object\n";
            std::exit(2);
        }
    }
    auto set = [&](const char* flag) { return cmd->count(flag) > 0; };
    if (set("--schedule")) j["schedule_dir"] = o.schedule_dir;
    if (set("--timepoints")) j["timepoints"] = o.timepoints;
    if (set("--out")) j["out"] = o.out;
    if (set("--trip")) j["trip"] = o.trip;
    if (set("--engine")) j["engine"] = o.engine;
    if (set("--window-early")) j["window_early"] = o.window_early;
    if (set("--window-late")) j["window_late"] = o.window_late;
    if (set("--clusters") || set("--no-clusters")) j["clustering"] = o.clusters;
    if (set("--upper-limit")) j["upper_limit"] = o.upper_limit;
    if (set("--seed")) j["seed"] = o.seed;
    if (set("--repeat")) j["repeat"] = o.repeat;
    if (set("--jobs")) j["jobs"] = o.jobs;
    if (set("--force")) j["force"] = o.force;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Timetable optimization from historical timepoint data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", topt_version());

    Parsed parsed;
    std::vector<std::pair<CLI::App*, CommonOpts*>> wired;
    std::vector<std::unique_ptr<CommonOpts>> opts;

    auto subcommand = [&](const std::string& name, const std::string& desc) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        opts.push_back(std::make_unique<CommonOpts>());
        add_common(cmd, *opts.back());
        wired.emplace_back(cmd, opts.back().get());
        return cmd;
    };

    subcommand("ingest", "Parse the schedule and history, report counts and row errors");
    subcommand("clean", "Clean the history and write the cleaning report");
    subcommand("cluster", "Cluster months by travel-time statistics");
    subcommand("optimize", "Search for a timetable with better on-time performance");
    CLI::App* sweep = subcommand("sweep", "Grid sweep over one engine parameter");
    subcommand("stability", "Repeat one engine run and report OTP spread");
    CLI::App* synth = subcommand("synth", "Generate a synthetic dataset");
    CLI::App* report = subcommand("report", "Render results into a markdown report");

    std::string sweep_param;
    std::vector<double> sweep_values;
    int sweep_repeats = 0;
    sweep->add_option("--param", sweep_param, "Parameter to sweep");
    sweep->add_option("--values", sweep_values, "Grid values")->delimiter(',');
    sweep->add_option("--repeats", sweep_repeats, "Runs per grid value");

    std::string synth_spec;
    synth->add_option("--spec", synth_spec, "Synthetic dataset spec (JSON)");

    std::string results_dir;
    report->add_option("--results", results_dir, "Directory with results to summarize");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    for (auto& [cmd, o] : wired) {
        if (!cmd->parsed()) continue;
        parsed.command = cmd->get_name();
        parsed.config = merge_cli(cmd, *o);
    }
    if (parsed.command == "sweep") {
        json s = parsed.config.value("sweep", json::object());
        if (sweep->count("--param")) s["param"] = sweep_param;
        if (sweep->count("--values")) s["values"] = sweep_values;
        if (sweep->count("--repeats")) s["repeats"] = sweep_repeats;
        parsed.config["sweep"] = s;
    }
    if (parsed.command == "synth" && synth->count("--spec"))
        parsed.config["synth_spec"] = synth_spec;
    if (parsed.command == "report" && report->count("--results"))
        parsed.config["results"] = results_dir;

    topt_session* session = topt_session_new();
    int rc = topt_run(session, parsed.command.c_str(), parsed.config.dump().c_str());
    if (rc == 0)
        std::cout << topt_last_log(session);
    else
        std::cerr << topt_last_log(session);
    topt_session_free(session);
    return rc;
}
