#ifndef TRANSIT_OPT_TYPES_HPP
#define TRANSIT_OPT_TYPES_HPP

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace topt {

// Seconds since service-day midnight. May exceed 86400 for post-midnight
// trips, following the GTFS convention.
using Seconds = int;

enum class Direction { inbound, outbound };

std::string to_string(Direction d);
std::optional<Direction> parse_direction(const std::string& token);

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;
    auto operator<=>(const Date&) const = default;
};

struct Month {
    int year = 0;
    int month = 0;
    auto operator<=>(const Month&) const = default;
};

inline Month month_of(const Date& d) { return Month{d.year, d.month}; }

std::string to_string(const Date& d);
std::string to_string(const Month& m);
std::optional<Date> parse_date(const std::string& iso);

// One historical observation at a timepoint on a dated trip. Arrival and
// departure stay optional until cleaning; rows with either missing are
// dropped there, not at parse time.
struct TimepointRecord {
    Date service_date;
    std::string route_id;
    std::string trip_id;
    Direction direction = Direction::outbound;
    std::string timepoint;
    int sequence = 0;  // 1-based along the trip
    Seconds scheduled_time = 0;
    std::optional<Seconds> actual_arrival;
    std::optional<Seconds> actual_departure;
    std::string vehicle_id;
};

// Ordered timepoint sequence of a trip plus its chained successor (same
// vehicle) and the scheduled layover between them.
struct TripPattern {
    std::string route_id;
    std::string trip_id;
    Direction direction = Direction::outbound;
    std::vector<std::string> timepoints;
    std::vector<Seconds> scheduled_times;
    std::optional<std::string> next_trip_id;
    Seconds scheduled_layover = 0;  // meaningful iff next_trip_id set

    std::size_t size() const { return timepoints.size(); }
    std::size_t segments() const { return timepoints.empty() ? 0 : timepoints.size() - 1; }
};

// A segment of a specific trip, identified by its bounding timepoints.
struct SegmentRef {
    std::string trip_id;
    std::string from;
    std::string to;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SearchRefused : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace topt

#endif
