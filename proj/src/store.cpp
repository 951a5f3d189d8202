#include "transit_opt/store.hpp"

#include <algorithm>
#include <tuple>

#include "json.hpp"
#include "transit_opt/stats.hpp"

namespace topt {

std::string CleaningReport::to_json() const {
    nlohmann::json j;
    j["duplicates"] = duplicates;
    j["missing"] = missing;
    j["negative_travel_times"] = negative_travel_times;
    j["outliers"] = outliers;
    j["unmatched"] = unmatched;
    return j.dump(2);
}

const TripPattern* HistoricalStore::pattern(const std::string& trip_id) const {
    auto it = pattern_index_.find(trip_id);
    return it == pattern_index_.end() ? nullptr : &patterns_[it->second];
}

const TripPattern* HistoricalStore::predecessor(const std::string& trip_id) const {
    auto it = predecessor_of_.find(trip_id);
    return it == predecessor_of_.end() ? nullptr : pattern(it->second);
}

const HistoricalStore::Days* HistoricalStore::days(const std::string& trip_id) const {
    auto it = days_.find(trip_id);
    return it == days_.end() ? nullptr : &it->second;
}

std::vector<Month> HistoricalStore::months() const {
    std::set<Month> ms;
    for (const auto& r : records_) ms.insert(month_of(r.service_date));
    return {ms.begin(), ms.end()};
}

std::vector<Month> HistoricalStore::months(const std::string& trip_id) const {
    std::set<Month> ms;
    if (const Days* d = days(trip_id))
        for (const auto& [date, recs] : *d) ms.insert(month_of(date));
    return {ms.begin(), ms.end()};
}

namespace {

int segment_index(const TripPattern& p, const SegmentRef& seg) {
    for (std::size_t j = 0; j + 1 < p.timepoints.size(); ++j)
        if (p.timepoints[j] == seg.from && p.timepoints[j + 1] == seg.to)
            return static_cast<int>(j);
    return -1;
}

}  // namespace

std::vector<double> HistoricalStore::raw_travel_times(const SegmentRef& seg,
                                                      const std::set<Month>& months) const {
    const TripPattern* p = pattern(seg.trip_id);
    if (!p) throw DataError("unknown trip: " + seg.trip_id);
    int idx = segment_index(*p, seg);
    if (idx < 0)
        throw DataError("unknown segment " + seg.from + "->" + seg.to + " on trip " + seg.trip_id);
    std::vector<double> out;
    auto it = segment_samples_.find(seg.trip_id);
    if (it == segment_samples_.end()) return out;
    const SegmentSamples& per_month = it->second[static_cast<std::size_t>(idx)];
    for (const auto& [m, samples] : per_month) {
        if (!months.empty() && !months.count(m)) continue;
        out.insert(out.end(), samples.begin(), samples.end());
    }
    return out;
}

std::vector<double> HistoricalStore::travel_times(const SegmentRef& seg,
                                                  const std::set<Month>& months) const {
    std::vector<double> out = raw_travel_times(seg, months);
    if (!remove_outliers_ || out.empty()) return out;
    auto flagged = stats::mad_outliers(out);
    if (flagged.empty()) return out;
    std::vector<double> kept;
    kept.reserve(out.size() - flagged.size());
    std::size_t f = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (f < flagged.size() && flagged[f] == i) {
            ++f;
            continue;
        }
        kept.push_back(out[i]);
    }
    return kept;
}

std::pair<HistoricalStore, CleaningReport> clean(std::vector<TimepointRecord> records,
                                                 std::vector<TripPattern> patterns,
                                                 bool remove_outliers) {
    HistoricalStore store;
    CleaningReport report;
    store.remove_outliers_ = remove_outliers;
    store.patterns_ = std::move(patterns);
    for (std::size_t i = 0; i < store.patterns_.size(); ++i) {
        const TripPattern& p = store.patterns_[i];
        store.pattern_index_[p.trip_id] = i;
        if (p.next_trip_id) store.predecessor_of_[*p.next_trip_id] = p.trip_id;
    }

    std::set<std::tuple<Date, std::string, std::string>> seen;
    for (auto& r : records) {
        if (!r.actual_arrival || !r.actual_departure) {
            ++report.missing;
            continue;
        }
        const TripPattern* p = store.pattern(r.trip_id);
        if (!p || std::find(p->timepoints.begin(), p->timepoints.end(), r.timepoint) ==
                      p->timepoints.end()) {
            ++report.unmatched;
            continue;
        }
        auto key = std::make_tuple(r.service_date, r.trip_id, r.timepoint);
        if (!seen.insert(key).second) {
            ++report.duplicates;
            continue;
        }
        store.records_.push_back(std::move(r));
    }

    for (const auto& r : store.records_) store.days_[r.trip_id][r.service_date].push_back(r);
    for (auto& [trip, days] : store.days_)
        for (auto& [date, recs] : days)
            std::sort(recs.begin(), recs.end(),
                      [](const auto& a, const auto& b) { return a.sequence < b.sequence; });

    // Segment travel-time index; negative values are clock errors and are
    // excluded here rather than poisoning the empirical distributions.
    for (const auto& [trip, days] : store.days_) {
        const TripPattern& p = *store.pattern(trip);
        auto& per_segment = store.segment_samples_[trip];
        per_segment.resize(p.segments());
        for (const auto& [date, recs] : days) {
            for (std::size_t j = 0; j + 1 < p.timepoints.size(); ++j) {
                const TimepointRecord* up = nullptr;
                const TimepointRecord* down = nullptr;
                for (const auto& r : recs) {
                    if (r.timepoint == p.timepoints[j]) up = &r;
                    if (r.timepoint == p.timepoints[j + 1]) down = &r;
                }
                if (!up || !down) continue;
                Seconds tt = *down->actual_arrival - *up->actual_departure;
                if (tt < 0) {
                    ++report.negative_travel_times;
                    continue;
                }
                per_segment[j][month_of(date)].push_back(static_cast<double>(tt));
            }
        }
    }

    for (const auto& [trip, per_segment] : store.segment_samples_)
        for (const auto& per_month : per_segment)
            for (const auto& [m, samples] : per_month)
                report.outliers += static_cast<std::int64_t>(stats::mad_outliers(samples).size());

    return {std::move(store), report};
}

}  // namespace topt
