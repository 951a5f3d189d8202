#include "transit_opt/ingest.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "transit_opt/csv.hpp"
#include "transit_opt/time_util.hpp"

namespace topt {

const char* kTimepointCsvHeader =
    "service_date,route_id,trip_id,direction,timepoint_id,sequence,scheduled_time,"
    "actual_arrival,actual_departure,vehicle_id";

namespace {

struct StopTimeRow {
    std::string stop_id;
    int stop_sequence = 0;
    Seconds arrival = 0;
    Seconds departure = 0;
};

csv::Table require_file(const std::filesystem::path& dir, const std::string& name) {
    auto path = dir / name;
    if (!std::filesystem::exists(path)) throw DataError("missing schedule file: " + path.string());
    return csv::read_file(path);
}

}  // namespace

StaticIngestResult ingest_static(const std::filesystem::path& dir) {
    StaticIngestResult result;

    csv::Table routes = require_file(dir, "routes.txt");
    csv::Table trips = require_file(dir, "trips.txt");
    csv::Table stop_times = require_file(dir, "stop_times.txt");
    csv::Table stops = require_file(dir, "stops.txt");

    std::set<std::string> route_ids;
    int r_route = routes.column("route_id");
    for (const auto& row : routes.rows) route_ids.insert(csv::Table::field(row, r_route));

    std::set<std::string> stop_ids;
    int s_stop = stops.column("stop_id");
    for (const auto& row : stops.rows) stop_ids.insert(csv::Table::field(row, s_stop));

    struct TripMeta {
        std::string route_id;
        std::string block_id;
        Direction direction = Direction::outbound;
    };
    std::map<std::string, TripMeta> meta;
    {
        int c_trip = trips.column("trip_id");
        int c_route = trips.column("route_id");
        int c_block = trips.column("block_id");
        int c_dir = trips.column("direction_id");
        if (c_trip < 0 || c_route < 0)
            throw DataError("trips.txt must contain trip_id and route_id columns");
        for (const auto& row : trips.rows) {
            TripMeta m;
            m.route_id = csv::Table::field(row, c_route);
            m.block_id = csv::Table::field(row, c_block);
            m.direction = csv::Table::field(row, c_dir) == "1" ? Direction::inbound
                                                              : Direction::outbound;
            meta[csv::Table::field(row, c_trip)] = m;
        }
    }

    std::map<std::string, std::vector<StopTimeRow>> by_trip;
    {
        int c_trip = stop_times.column("trip_id");
        int c_stop = stop_times.column("stop_id");
        int c_seq = stop_times.column("stop_sequence");
        int c_arr = stop_times.column("arrival_time");
        int c_dep = stop_times.column("departure_time");
        int c_tp = stop_times.column("timepoint");
        if (c_trip < 0 || c_stop < 0 || c_seq < 0 || c_arr < 0 || c_dep < 0)
            throw DataError("stop_times.txt is missing required columns");
        for (const auto& row : stop_times.rows) {
            if (c_tp >= 0 && csv::Table::field(row, c_tp) != "1") continue;
            StopTimeRow st;
            st.stop_id = csv::Table::field(row, c_stop);
            try {
                st.stop_sequence = std::stoi(csv::Table::field(row, c_seq));
            } catch (...) {
                result.warnings.push_back("stop_times row with bad stop_sequence skipped");
                continue;
            }
            auto arr = parse_hms(csv::Table::field(row, c_arr));
            auto dep = parse_hms(csv::Table::field(row, c_dep));
            if (!arr || !dep) {
                result.warnings.push_back("stop_times row with bad time skipped (trip " +
                                          csv::Table::field(row, c_trip) + ")");
                continue;
            }
            st.arrival = *arr;
            st.departure = *dep;
            by_trip[csv::Table::field(row, c_trip)].push_back(st);
        }
    }

    for (auto& [trip_id, rows] : by_trip) {
        std::sort(rows.begin(), rows.end(),
                  [](const auto& a, const auto& b) { return a.stop_sequence < b.stop_sequence; });
        if (rows.size() < 2) {
            result.warnings.push_back("trip " + trip_id + " rejected: fewer than 2 timepoints");
            continue;
        }
        TripPattern p;
        p.trip_id = trip_id;
        auto mit = meta.find(trip_id);
        if (mit != meta.end()) {
            p.route_id = mit->second.route_id;
            p.direction = mit->second.direction;
        }
        bool monotone = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            // First stop is timed by its departure; downstream stops by arrival.
            Seconds t = i == 0 ? rows[i].departure : rows[i].arrival;
            if (!p.scheduled_times.empty() && t <= p.scheduled_times.back()) monotone = false;
            p.timepoints.push_back(rows[i].stop_id);
            p.scheduled_times.push_back(t);
            if (!stop_ids.count(rows[i].stop_id))
                result.warnings.push_back("trip " + trip_id + " references unknown stop " +
                                          rows[i].stop_id);
        }
        if (!monotone) {
            result.warnings.push_back("trip " + trip_id + " rejected: non-monotone stop times");
            continue;
        }
        if (!p.route_id.empty() && !route_ids.empty() && !route_ids.count(p.route_id))
            result.warnings.push_back("trip " + trip_id + " references unknown route " + p.route_id);
        result.patterns.push_back(std::move(p));
    }

    std::map<std::string, TripPattern*> by_id;
    for (auto& p : result.patterns) by_id[p.trip_id] = &p;

    auto chain = [&](TripPattern* a, TripPattern* b) {
        Seconds layover = b->scheduled_times.front() - a->scheduled_times.back();
        if (layover < 0) {
            result.warnings.push_back("trips " + a->trip_id + " -> " + b->trip_id +
                                      " not chained: negative layover");
            return;
        }
        a->next_trip_id = b->trip_id;
        a->scheduled_layover = layover;
    };

    // Chain by shared block: consecutive trips in scheduled-time order.
    std::map<std::string, std::vector<TripPattern*>> blocks;
    for (auto& p : result.patterns) {
        auto mit = meta.find(p.trip_id);
        if (mit != meta.end() && !mit->second.block_id.empty())
            blocks[mit->second.block_id].push_back(&p);
    }
    for (auto& [block, members] : blocks) {
        std::sort(members.begin(), members.end(), [](const TripPattern* a, const TripPattern* b) {
            return a->scheduled_times.front() < b->scheduled_times.front();
        });
        for (std::size_t i = 0; i + 1 < members.size(); ++i) chain(members[i], members[i + 1]);
    }

    // Explicit trip links take precedence over block inference.
    auto links_path = dir / "trip_links.txt";
    if (std::filesystem::exists(links_path)) {
        csv::Table links = csv::read_file(links_path);
        int c_a = links.column("trip_id");
        int c_b = links.column("next_trip_id");
        if (c_a < 0 || c_b < 0)
            throw DataError("trip_links.txt must contain trip_id and next_trip_id columns");
        for (const auto& row : links.rows) {
            auto a = by_id.find(csv::Table::field(row, c_a));
            auto b = by_id.find(csv::Table::field(row, c_b));
            if (a == by_id.end() || b == by_id.end()) {
                result.warnings.push_back("trip_links row references unknown trip");
                continue;
            }
            chain(a->second, b->second);
        }
    }

    return result;
}

TimepointIngestResult ingest_timepoints(const std::filesystem::path& path) {
    csv::Table t = csv::read_file(path);

    std::string header;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) header += ',';
        header += t.header[i];
    }
    if (header != kTimepointCsvHeader)
        throw DataError("timepoint CSV header mismatch in " + path.string() + ": got \"" + header +
                        "\"");

    TimepointIngestResult result;
    std::int64_t line = 1;
    for (const auto& row : t.rows) {
        ++line;
        ++result.rows_total;
        auto fail = [&](const std::string& why) {
            result.row_errors.push_back("line " + std::to_string(line) + ": " + why);
        };
        if (row.size() < 9) {
            fail("too few fields");
            continue;
        }
        TimepointRecord r;
        auto date = parse_date(row[0]);
        if (!date) {
            fail("bad service_date \"" + row[0] + "\"");
            continue;
        }
        r.service_date = *date;
        r.route_id = row[1];
        r.trip_id = row[2];
        auto dir = parse_direction(row[3]);
        if (!dir) {
            fail("bad direction \"" + row[3] + "\"");
            continue;
        }
        r.direction = *dir;
        r.timepoint = row[4];
        if (r.timepoint.empty()) {
            fail("empty timepoint_id");
            continue;
        }
        try {
            r.sequence = std::stoi(row[5]);
        } catch (...) {
            fail("bad sequence \"" + row[5] + "\"");
            continue;
        }
        auto sched = parse_hms(row[6]);
        if (!sched) {
            fail("bad scheduled_time \"" + row[6] + "\"");
            continue;
        }
        r.scheduled_time = *sched;
        if (!row[7].empty()) {
            auto arr = parse_hms(row[7]);
            if (!arr) {
                fail("bad actual_arrival \"" + row[7] + "\"");
                continue;
            }
            r.actual_arrival = *arr;
        }
        if (!row[8].empty()) {
            auto dep = parse_hms(row[8]);
            if (!dep) {
                fail("bad actual_departure \"" + row[8] + "\"");
                continue;
            }
            r.actual_departure = *dep;
        }
        if (r.actual_arrival && r.actual_departure && *r.actual_departure < *r.actual_arrival) {
            fail("departure before arrival");
            continue;
        }
        if (row.size() > 9) r.vehicle_id = row[9];
        result.records.push_back(std::move(r));
    }
    return result;
}

}  // namespace topt
