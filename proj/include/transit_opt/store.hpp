#ifndef TRANSIT_OPT_STORE_HPP
#define TRANSIT_OPT_STORE_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "transit_opt/types.hpp"

namespace topt {

struct CleaningReport {
    std::int64_t duplicates = 0;
    std::int64_t missing = 0;
    std::int64_t negative_travel_times = 0;
    std::int64_t outliers = 0;
    std::int64_t unmatched = 0;  // records without a matching trip pattern

    std::string to_json() const;
};

// Immutable queryable store of cleaned history. Built once by clean(); safe
// for concurrent read afterwards.
class HistoricalStore {
  public:
    // Per-date records of one trip, ordered by sequence.
    using DayRecords = std::vector<TimepointRecord>;
    using Days = std::map<Date, DayRecords>;

    const std::vector<TripPattern>& patterns() const { return patterns_; }
    const TripPattern* pattern(const std::string& trip_id) const;
    // The trip whose next_trip_id is trip_id, if any.
    const TripPattern* predecessor(const std::string& trip_id) const;

    const Days* days(const std::string& trip_id) const;
    std::vector<Month> months() const;
    std::vector<Month> months(const std::string& trip_id) const;

    // All surviving records, in cleaned order.
    const std::vector<TimepointRecord>& records() const { return records_; }

    // Historical travel times (seconds) on a segment over a month set, with
    // MAD outliers removed unless disabled at build time.
    // Throws DataError for a segment not present in the trip's pattern.
    std::vector<double> travel_times(const SegmentRef& seg, const std::set<Month>& months) const;

    // Raw (pre-outlier-filter) samples; same lookup rules.
    std::vector<double> raw_travel_times(const SegmentRef& seg, const std::set<Month>& months) const;

    bool remove_outliers() const { return remove_outliers_; }

  private:
    friend std::pair<HistoricalStore, CleaningReport> clean(
        std::vector<TimepointRecord> records, std::vector<TripPattern> patterns,
        bool remove_outliers);

    // segment index within a trip -> month -> samples in date order
    using SegmentSamples = std::map<Month, std::vector<double>>;

    std::vector<TripPattern> patterns_;
    std::map<std::string, std::size_t> pattern_index_;
    std::map<std::string, std::string> predecessor_of_;
    std::vector<TimepointRecord> records_;
    std::map<std::string, Days> days_;
    std::map<std::string, std::vector<SegmentSamples>> segment_samples_;
    bool remove_outliers_ = true;
};

// Deduplicates on (service_date, trip_id, timepoint) keeping the first
// occurrence, drops records with missing arrival/departure, drops records
// whose trip or timepoint has no pattern, and indexes the rest. Negative
// travel times are excluded from the segment index and counted.
std::pair<HistoricalStore, CleaningReport> clean(std::vector<TimepointRecord> records,
                                                 std::vector<TripPattern> patterns,
                                                 bool remove_outliers = true);

}  // namespace topt

#endif
