#ifndef TRANSIT_OPT_INGEST_HPP
#define TRANSIT_OPT_INGEST_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "transit_opt/types.hpp"

namespace topt {

struct StaticIngestResult {
    std::vector<TripPattern> patterns;
    std::vector<std::string> warnings;  // rejected trips, chaining anomalies
};

// Reads routes.txt, trips.txt, stop_times.txt and stops.txt from a GTFS-style
// directory and builds one TripPattern per trip, chaining consecutive trips
// that share a block_id (or an explicit trip_links.txt pairing).
// Throws DataError naming any missing file.
StaticIngestResult ingest_static(const std::filesystem::path& schedule_dir);

struct TimepointIngestResult {
    std::vector<TimepointRecord> records;
    std::vector<std::string> row_errors;
    std::int64_t rows_total = 0;
};

// Parses the timepoint history CSV. Header mismatch is fatal; unparseable
// rows are counted and reported, not silently dropped.
TimepointIngestResult ingest_timepoints(const std::filesystem::path& records_file);

extern const char* kTimepointCsvHeader;

}  // namespace topt

#endif
