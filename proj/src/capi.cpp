#include "transit_opt.h"

#include <cstring>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "transit_opt/harness.hpp"
#include "transit_opt/ingest.hpp"
#include "transit_opt/simulator.hpp"
#include "transit_opt/store.hpp"
#include "transit_opt/time_util.hpp"

struct topt_session {
    std::string log;
    std::string error;
};

struct topt_store {
    topt::HistoricalStore store;
    topt::CleaningReport report;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Runs fn, captures diagnostics on the session, maps exceptions to exit codes.
template <typename Fn>
int guarded(topt_session* s, Fn&& fn) {
    if (!s) return topt::kExitUsage;
    s->log.clear();
    s->error.clear();
    try {
        return fn();
    } catch (const topt::UsageError& e) {
        s->error = e.what();
        return topt::kExitUsage;
    } catch (const topt::SearchRefused& e) {
        s->error = e.what();
        return topt::kExitSearchRefused;
    } catch (const std::exception& e) {
        s->error = e.what();
        return topt::kExitData;
    }
}

}  // namespace

extern "C" {

topt_session* topt_session_new(void) { return new topt_session; }

void topt_session_free(topt_session* s) { delete s; }

int topt_run(topt_session* s, const char* command, const char* config_json) {
    return guarded(s, [&] {
        if (!command) throw topt::UsageError("command must not be NULL");
        std::ostringstream log;
        int rc = topt::run_command(command, config_json ? config_json : "{}", log);
        s->log = log.str();
        if (rc != topt::kExitOk) s->error = s->log;
        return rc;
    });
}

const char* topt_last_log(const topt_session* s) { return s ? s->log.c_str() : ""; }

const char* topt_last_error(const topt_session* s) { return s ? s->error.c_str() : ""; }

int topt_store_open(topt_session* s, const char* schedule_dir, const char* timepoints_csv,
                    topt_store** out) {
    return guarded(s, [&] {
        if (!schedule_dir || !timepoints_csv || !out)
            throw topt::UsageError("schedule_dir, timepoints_csv and out must not be NULL");
        *out = nullptr;
        auto stat = topt::ingest_static(schedule_dir);
        auto tp = topt::ingest_timepoints(timepoints_csv);
        auto [store, report] = topt::clean(std::move(tp.records), std::move(stat.patterns));
        *out = new topt_store{std::move(store), report};
        return topt::kExitOk;
    });
}

void topt_store_free(topt_store* st) { delete st; }

int topt_store_summary(topt_session* s, const topt_store* st, char** json_out) {
    return guarded(s, [&] {
        if (!st || !json_out) throw topt::UsageError("store and json_out must not be NULL");
        nlohmann::json j;
        j["records"] = st->store.records().size();
        j["cleaning"] = nlohmann::json::parse(st->report.to_json());
        j["trips"] = nlohmann::json::array();
        for (const auto& p : st->store.patterns()) {
            nlohmann::json t;
            t["trip_id"] = p.trip_id;
            t["route_id"] = p.route_id;
            t["timepoints"] = p.timepoints;
            const auto* days = st->store.days(p.trip_id);
            t["days"] = days ? days->size() : 0;
            nlohmann::json months = nlohmann::json::array();
            for (const auto& m : st->store.months(p.trip_id)) months.push_back(topt::to_string(m));
            t["months"] = std::move(months);
            j["trips"].push_back(std::move(t));
        }
        *json_out = dup_string(j.dump(2));
        return topt::kExitOk;
    });
}

int topt_store_evaluate(topt_session* s, const topt_store* st, const char* trip_id,
                        const char* candidate_csv, int window_early, int window_late,
                        char** json_out) {
    return guarded(s, [&] {
        if (!st || !trip_id || !candidate_csv || !json_out)
            throw topt::UsageError("store, trip_id, candidate_csv and json_out must not be NULL");
        topt::OnTimeWindow window{window_early, window_late};
        if (!window.valid()) throw topt::UsageError("window must satisfy early <= 0 <= late");
        const topt::TripPattern* pattern = st->store.pattern(trip_id);
        if (!pattern) throw topt::DataError(std::string("unknown trip: ") + trip_id);
        topt::CandidateTimetable candidate = topt::read_candidate_csv(candidate_csv, *pattern);
        topt::Simulator sim(st->store, window);
        topt::OtpReport report = sim.on_time_performance(*pattern, candidate, {});
        *json_out = dup_string(report.to_json());
        return topt::kExitOk;
    });
}

void topt_string_free(char* str) { delete[] str; }

const char* topt_version(void) { return "0.1.0"; }

}  // extern "C"
