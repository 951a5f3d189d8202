#ifndef TESTS_HELPERS_HPP
#define TESTS_HELPERS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "transit_opt/store.hpp"
#include "transit_opt/time_util.hpp"
#include "transit_opt/types.hpp"

namespace testutil {

inline topt::Seconds hms(const std::string& s) { return *topt::parse_hms(s); }

inline topt::TimepointRecord rec(const topt::Date& date, const std::string& trip,
                                 const std::string& tp, int seq, const std::string& sched,
                                 const std::string& arr, const std::string& dep) {
    topt::TimepointRecord r;
    r.service_date = date;
    r.route_id = "4";
    r.trip_id = trip;
    r.direction = topt::Direction::outbound;
    r.timepoint = tp;
    r.sequence = seq;
    r.scheduled_time = hms(sched);
    if (!arr.empty()) r.actual_arrival = hms(arr);
    if (!dep.empty()) r.actual_departure = hms(dep);
    r.vehicle_id = "V1";
    return r;
}

// Two chained trips of route 4, one observed day (2016-08-08). The first
// trip ends where the second begins; scheduled layover is two minutes.
inline std::vector<topt::TripPattern> route4_patterns() {
    topt::TripPattern t1;
    t1.route_id = "4";
    t1.trip_id = "121359";
    t1.direction = topt::Direction::outbound;
    t1.timepoints = {"MCC4_14", "SY19", "PRGD", "GRFSTATO"};
    t1.scheduled_times = {hms("10:50:00"), hms("11:02:00"), hms("11:09:00"), hms("11:18:00")};
    t1.next_trip_id = "121360";
    t1.scheduled_layover = 120;

    topt::TripPattern t2;
    t2.route_id = "4";
    t2.trip_id = "121360";
    t2.direction = topt::Direction::inbound;
    t2.timepoints = {"GRFSTATO", "PRGD", "SY19", "MCC4_14"};
    t2.scheduled_times = {hms("11:20:00"), hms("11:25:00"), hms("11:40:00"), hms("11:57:00")};
    return {t1, t2};
}

inline std::vector<topt::TimepointRecord> route4_records() {
    topt::Date d{2016, 8, 8};
    return {
        rec(d, "121359", "MCC4_14", 1, "10:50:00", "10:36:00", "10:50:00"),
        rec(d, "121359", "SY19", 2, "11:02:00", "11:10:00", "11:10:00"),
        rec(d, "121359", "PRGD", 3, "11:09:00", "11:18:00", "11:18:00"),
        rec(d, "121359", "GRFSTATO", 4, "11:18:00", "11:27:00", "11:30:00"),
        rec(d, "121360", "GRFSTATO", 1, "11:20:00", "11:27:00", "11:30:00"),
        rec(d, "121360", "PRGD", 2, "11:25:00", "11:34:00", "11:34:00"),
        rec(d, "121360", "SY19", 3, "11:40:00", "11:51:00", "11:51:00"),
        rec(d, "121360", "MCC4_14", 4, "11:57:00", "12:11:00", "12:11:00"),
    };
}

inline topt::HistoricalStore route4_store() {
    auto [store, report] = topt::clean(route4_records(), route4_patterns());
    return std::move(store);
}

}  // namespace testutil

#endif
