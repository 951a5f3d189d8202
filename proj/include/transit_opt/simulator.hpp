#ifndef TRANSIT_OPT_SIMULATOR_HPP
#define TRANSIT_OPT_SIMULATOR_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "transit_opt/store.hpp"
#include "transit_opt/types.hpp"

namespace topt {

struct OnTimeWindow {
    Seconds early = -60;  // <= 0
    Seconds late = 300;   // >= 0

    bool valid() const { return early <= 0 && 0 <= late; }
    bool hit(Seconds delay) const { return early <= delay && delay <= late; }
};

// Decision vector under evaluation: fixed first departure plus scheduled
// travel time per segment (seconds; optimizer output is minute-quantized).
struct CandidateTimetable {
    std::string trip_id;
    Seconds first_departure = 0;
    std::vector<Seconds> segment_times;

    Seconds scheduled_time(std::size_t stop) const;
    static CandidateTimetable from_pattern(const TripPattern& p);
    std::vector<int> segment_minutes() const;
};

struct ReplayedDay {
    Date date;
    std::vector<Seconds> sim_arrival;
    std::vector<Seconds> sim_departure;
    std::vector<Seconds> delays;  // sim_arrival - candidate scheduled time
};

struct OtpReport {
    double otp = 0.0;
    std::int64_t hits = 0;
    std::int64_t total = 0;
    std::int64_t days_replayed = 0;
    std::int64_t days_skipped = 0;
    std::vector<double> per_timepoint;  // hit fraction per stop
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;

    std::string to_json() const;
};

// Passenger dwell inferred from one historical record: early arrivals dwell
// from the scheduled time, late arrivals from the actual arrival.
Seconds dwell_time(const TimepointRecord& record);

// Replays historical days against a candidate schedule. Pure function of
// (candidate, store); safe for concurrent use over the immutable store.
class Simulator {
  public:
    Simulator(const HistoricalStore& store, OnTimeWindow window, bool count_first_stop = true);

    // One day of one trip. upstream_arrival_delay is the chained
    // predecessor's arrival delay at the shared stop; layover is the
    // scheduled slack between the trips. Returns nullopt when the day's
    // records do not cover the whole pattern.
    std::optional<ReplayedDay> replay_day(const TripPattern& pattern,
                                          const CandidateTimetable& candidate,
                                          const HistoricalStore::DayRecords& day,
                                          std::optional<Seconds> upstream_arrival_delay,
                                          Seconds layover) const;

    // Replays every historical day of the trip in the month set. Chained
    // predecessors are replayed under their published schedule to obtain the
    // upstream delay. Throws DataError when no day is replayable.
    OtpReport on_time_performance(const TripPattern& pattern, const CandidateTimetable& candidate,
                                  const std::set<Month>& months) const;

    OnTimeWindow window() const { return window_; }
    const HistoricalStore& store() const { return store_; }

  private:
    const HistoricalStore& store_;
    OnTimeWindow window_;
    bool count_first_stop_;
};

// Pools hits over several per-trip reports.
OtpReport aggregate(const std::vector<OtpReport>& reports);

}  // namespace topt

#endif
