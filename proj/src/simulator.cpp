#include "transit_opt/simulator.hpp"

#include <algorithm>

#include "json.hpp"

namespace topt {

Seconds CandidateTimetable::scheduled_time(std::size_t stop) const {
    Seconds t = first_departure;
    for (std::size_t j = 0; j < stop; ++j) t += segment_times[j];
    return t;
}

CandidateTimetable CandidateTimetable::from_pattern(const TripPattern& p) {
    CandidateTimetable c;
    c.trip_id = p.trip_id;
    c.first_departure = p.scheduled_times.front();
    for (std::size_t j = 0; j + 1 < p.scheduled_times.size(); ++j)
        c.segment_times.push_back(p.scheduled_times[j + 1] - p.scheduled_times[j]);
    return c;
}

std::vector<int> CandidateTimetable::segment_minutes() const {
    std::vector<int> m;
    m.reserve(segment_times.size());
    for (Seconds s : segment_times) m.push_back((s + 30) / 60);
    return m;
}

std::string OtpReport::to_json() const {
    nlohmann::json j;
    j["otp"] = otp;
    j["hits"] = hits;
    j["total"] = total;
    j["days_replayed"] = days_replayed;
    j["days_skipped"] = days_skipped;
    j["per_timepoint"] = per_timepoint;
    j["seed"] = seed;
    j["wall_time_s"] = wall_time_s;
    return j.dump(2);
}

Seconds dwell_time(const TimepointRecord& record) {
    Seconds arr = *record.actual_arrival;
    Seconds dep = *record.actual_departure;
    if (arr <= record.scheduled_time) return std::max(0, dep - record.scheduled_time);
    return dep - arr;
}

Simulator::Simulator(const HistoricalStore& store, OnTimeWindow window, bool count_first_stop)
    : store_(store), window_(window), count_first_stop_(count_first_stop) {
    if (!window.valid()) throw UsageError("on-time window must satisfy early <= 0 <= late");
}

std::optional<ReplayedDay> Simulator::replay_day(const TripPattern& pattern,
                                                 const CandidateTimetable& candidate,
                                                 const HistoricalStore::DayRecords& day,
                                                 std::optional<Seconds> upstream_arrival_delay,
                                                 Seconds layover) const {
    std::size_t n = pattern.size();
    std::vector<const TimepointRecord*> rec(n, nullptr);
    for (const auto& r : day)
        for (std::size_t j = 0; j < n; ++j)
            if (r.timepoint == pattern.timepoints[j]) rec[j] = &r;
    for (std::size_t j = 0; j < n; ++j)
        if (!rec[j]) return std::nullopt;

    std::vector<Seconds> travel(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        travel[j] = *rec[j + 1]->actual_arrival - *rec[j]->actual_departure;
        if (travel[j] < 0) return std::nullopt;
    }

    ReplayedDay out;
    out.date = day.front().service_date;
    out.sim_arrival.resize(n);
    out.sim_departure.resize(n);
    out.delays.resize(n);

    // The vehicle either comes off its previous trip (arrival delay minus
    // layover, which may be negative for an early arrival) or the first
    // arrival is exogenous and taken from history.
    if (upstream_arrival_delay)
        out.sim_arrival[0] = candidate.first_departure + (*upstream_arrival_delay - layover);
    else
        out.sim_arrival[0] = *rec[0]->actual_arrival;
    out.sim_departure[0] =
        std::max(candidate.first_departure, out.sim_arrival[0] + dwell_time(*rec[0]));
    out.delays[0] = out.sim_arrival[0] - candidate.first_departure;

    for (std::size_t j = 1; j < n; ++j) {
        Seconds sched = candidate.scheduled_time(j);
        out.sim_arrival[j] = out.sim_departure[j - 1] + travel[j - 1];
        out.sim_departure[j] = std::max(sched, out.sim_arrival[j] + dwell_time(*rec[j]));
        out.delays[j] = out.sim_arrival[j] - sched;
    }
    return out;
}

OtpReport Simulator::on_time_performance(const TripPattern& pattern,
                                         const CandidateTimetable& candidate,
                                         const std::set<Month>& months) const {
    const HistoricalStore::Days* days = store_.days(pattern.trip_id);
    if (!days) throw DataError("no historical days for trip " + pattern.trip_id);

    const TripPattern* pred = store_.predecessor(pattern.trip_id);
    std::optional<CandidateTimetable> pred_schedule;
    if (pred) pred_schedule = CandidateTimetable::from_pattern(*pred);

    std::size_t n = pattern.size();
    OtpReport report;
    std::vector<std::int64_t> stop_hits(n, 0);

    for (const auto& [date, recs] : *days) {
        if (!months.empty() && !months.count(month_of(date))) continue;

        std::optional<Seconds> upstream;
        Seconds layover = 0;
        if (pred) {
            if (const HistoricalStore::Days* pd = store_.days(pred->trip_id)) {
                auto it = pd->find(date);
                if (it != pd->end()) {
                    auto replayed =
                        replay_day(*pred, *pred_schedule, it->second, std::nullopt, 0);
                    if (replayed) {
                        upstream = replayed->delays.back();
                        layover = pred->scheduled_layover;
                    }
                }
            }
        }

        auto day = replay_day(pattern, candidate, recs, upstream, layover);
        if (!day) {
            ++report.days_skipped;
            continue;
        }
        ++report.days_replayed;
        for (std::size_t j = count_first_stop_ ? 0 : 1; j < n; ++j) {
            ++report.total;
            if (window_.hit(day->delays[j])) {
                ++report.hits;
                ++stop_hits[j];
            }
        }
    }

    if (report.days_replayed == 0)
        throw DataError("no replayable day for trip " + pattern.trip_id);
    report.otp = static_cast<double>(report.hits) / static_cast<double>(report.total);
    for (std::size_t j = 0; j < n; ++j)
        report.per_timepoint.push_back(static_cast<double>(stop_hits[j]) /
                                       static_cast<double>(report.days_replayed));
    return report;
}

OtpReport aggregate(const std::vector<OtpReport>& reports) {
    OtpReport out;
    for (const auto& r : reports) {
        out.hits += r.hits;
        out.total += r.total;
        out.days_replayed += r.days_replayed;
        out.days_skipped += r.days_skipped;
    }
    out.otp = out.total > 0 ? static_cast<double>(out.hits) / static_cast<double>(out.total) : 0.0;
    return out;
}

}  // namespace topt
