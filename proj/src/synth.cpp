#include "transit_opt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "json.hpp"
#include "transit_opt/ingest.hpp"
#include "transit_opt/stats.hpp"
#include "transit_opt/time_util.hpp"

namespace topt {

void SynthSpec::validate() const {
    if (n_timepoints < 2) throw UsageError("synth: n_timepoints must be >= 2");
    if (days_per_month < 1) throw UsageError("synth: days_per_month must be >= 1");
    if (months.empty()) throw UsageError("synth: months must be non-empty");
    if (dispersion < 0) throw UsageError("synth: dispersion must be >= 0");
    if (layover < 0) throw UsageError("synth: layover must be >= 0");
    std::size_t segs = static_cast<std::size_t>(n_timepoints) - 1;
    for (const Month& m : months) {
        auto it = regime_of.find(m);
        if (it == regime_of.end())
            throw UsageError("synth: month " + to_string(m) + " has no regime");
        if (it->second < 0 || static_cast<std::size_t>(it->second) >= regime_medians.size())
            throw UsageError("synth: regime id out of range for month " + to_string(m));
    }
    for (const auto& meds : regime_medians) {
        if (meds.size() != segs) throw UsageError("synth: regime medians must have one per segment");
        for (double v : meds)
            if (v <= 0) throw UsageError("synth: segment medians must be > 0");
    }
    if (!dwell_mean.empty() && dwell_mean.size() != static_cast<std::size_t>(n_timepoints))
        throw UsageError("synth: dwell_mean must have one entry per timepoint");
}

std::string SynthSpec::to_json() const {
    nlohmann::json j;
    j["n_timepoints"] = n_timepoints;
    j["days_per_month"] = days_per_month;
    j["months"] = nlohmann::json::array();
    for (const Month& m : months) j["months"].push_back(to_string(m));
    j["regimes"] = nlohmann::json::object();
    for (const auto& [m, r] : regime_of) j["regimes"][to_string(m)] = r;
    j["regime_medians"] = regime_medians;
    j["dispersion"] = dispersion;
    j["dwell_mean"] = dwell_mean;
    j["first_departure"] = first_departure;
    j["first_arrival_early"] = first_arrival_early;
    j["schedule_offset_min"] = schedule_offset_min;
    j["layover"] = layover;
    j["chain"] = chain;
    j["seed"] = seed;
    return j.dump(2);
}

namespace {

Month parse_month_token(const std::string& token) {
    int y = 0, m = 0;
    if (std::sscanf(token.c_str(), "%d-%d", &y, &m) != 2 || m < 1 || m > 12)
        throw UsageError("synth: bad month token \"" + token + "\"");
    return Month{y, m};
}

}  // namespace

SynthSpec SynthSpec::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SynthSpec s;
    s.n_timepoints = j.value("n_timepoints", s.n_timepoints);
    s.days_per_month = j.value("days_per_month", s.days_per_month);
    for (const auto& m : j.at("months")) s.months.push_back(parse_month_token(m));
    for (const auto& [key, val] : j.at("regimes").items())
        s.regime_of[parse_month_token(key)] = val.get<int>();
    s.regime_medians = j.at("regime_medians").get<std::vector<std::vector<double>>>();
    s.dispersion = j.value("dispersion", s.dispersion);
    if (j.contains("dwell_mean")) s.dwell_mean = j["dwell_mean"].get<std::vector<double>>();
    s.first_departure = j.value("first_departure", s.first_departure);
    s.first_arrival_early = j.value("first_arrival_early", s.first_arrival_early);
    s.schedule_offset_min = j.value("schedule_offset_min", s.schedule_offset_min);
    s.layover = j.value("layover", s.layover);
    s.chain = j.value("chain", s.chain);
    s.seed = j.value("seed", s.seed);
    s.validate();
    return s;
}

namespace {

std::vector<Seconds> published_segments(const SynthSpec& spec) {
    std::size_t segs = static_cast<std::size_t>(spec.n_timepoints) - 1;
    std::vector<Seconds> out(segs);
    for (std::size_t j = 0; j < segs; ++j) {
        std::vector<double> per_month;
        for (const Month& m : spec.months)
            per_month.push_back(
                spec.regime_medians[static_cast<std::size_t>(spec.regime_of.at(m))][j]);
        double med = stats::median(per_month);
        Seconds minutes = static_cast<Seconds>(std::lround(med / 60.0)) + spec.schedule_offset_min;
        out[j] = std::max(60, minutes * 60);
    }
    return out;
}

TripPattern make_pattern(const SynthSpec& spec, const std::string& trip_id, bool reversed,
                         Seconds first_departure, const std::vector<Seconds>& seg_times) {
    TripPattern p;
    p.route_id = "R1";
    p.trip_id = trip_id;
    p.direction = reversed ? Direction::inbound : Direction::outbound;
    for (int i = 0; i < spec.n_timepoints; ++i) {
        int stop = reversed ? spec.n_timepoints - i : i + 1;
        p.timepoints.push_back("TP" + std::to_string(stop));
    }
    p.scheduled_times.push_back(first_departure);
    for (Seconds s : seg_times) p.scheduled_times.push_back(p.scheduled_times.back() + s);
    return p;
}

}  // namespace

SynthOutput generate(const SynthSpec& spec) {
    spec.validate();
    SynthOutput out;

    std::vector<Seconds> seg_times = published_segments(spec);
    std::vector<Seconds> seg_times_rev(seg_times.rbegin(), seg_times.rend());

    TripPattern t1 = make_pattern(spec, "T1", false, spec.first_departure, seg_times);
    if (spec.chain) {
        TripPattern t2 =
            make_pattern(spec, "T2", true, t1.scheduled_times.back() + spec.layover, seg_times_rev);
        t1.next_trip_id = "T2";
        t1.scheduled_layover = spec.layover;
        out.patterns = {t1, t2};
    } else {
        out.patterns = {t1};
    }

    std::size_t n = static_cast<std::size_t>(spec.n_timepoints);
    for (const Month& month : spec.months) {
        int regime = spec.regime_of.at(month);
        for (int day = 1; day <= spec.days_per_month; ++day) {
            Date date{month.year, month.month, day};
            Seconds carry_arrival = 0;
            for (std::size_t t = 0; t < out.patterns.size(); ++t) {
                const TripPattern& p = out.patterns[t];
                std::seed_seq seq{spec.seed, static_cast<std::uint64_t>(month.year),
                                  static_cast<std::uint64_t>(month.month),
                                  static_cast<std::uint64_t>(day), static_cast<std::uint64_t>(t)};
                std::mt19937_64 rng(seq);
                std::normal_distribution<double> gauss(0.0, 1.0);

                std::vector<Seconds> arr(n), dep(n);
                arr[0] = t == 0 ? p.scheduled_times[0] - spec.first_arrival_early : carry_arrival;
                for (std::size_t j = 0; j < n; ++j) {
                    std::size_t dwell_idx = t == 0 ? j : n - 1 - j;  // reversed stop order
                    double mean = spec.dwell_mean.empty() ? 0.0 : spec.dwell_mean[dwell_idx];
                    Seconds dwell = 0;
                    if (mean > 0) {
                        std::exponential_distribution<double> ed(1.0 / mean);
                        dwell = static_cast<Seconds>(std::lround(ed(rng)));
                    }
                    dep[j] = std::max(p.scheduled_times[j], arr[j] + dwell);
                    if (j + 1 < n) {
                        std::size_t seg_idx = t == 0 ? j : n - 2 - j;
                        double median =
                            spec.regime_medians[static_cast<std::size_t>(regime)][seg_idx];
                        double travel =
                            std::exp(std::log(median) + spec.dispersion * gauss(rng));
                        arr[j + 1] = dep[j] + static_cast<Seconds>(std::lround(travel));
                    }
                }
                carry_arrival = arr[n - 1];

                for (std::size_t j = 0; j < n; ++j) {
                    TimepointRecord r;
                    r.service_date = date;
                    r.route_id = p.route_id;
                    r.trip_id = p.trip_id;
                    r.direction = p.direction;
                    r.timepoint = p.timepoints[j];
                    r.sequence = static_cast<int>(j) + 1;
                    r.scheduled_time = p.scheduled_times[j];
                    r.actual_arrival = arr[j];
                    r.actual_departure = dep[j];
                    r.vehicle_id = "V1";
                    out.records.push_back(std::move(r));
                }
            }
        }
    }
    return out;
}

void write_dataset(const SynthOutput& out, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    std::set<std::string> stops;
    std::set<std::string> routes;
    for (const auto& p : out.patterns) {
        routes.insert(p.route_id);
        for (const auto& tp : p.timepoints) stops.insert(tp);
    }

    {
        std::ofstream f(dir / "routes.txt");
        f << "route_id,route_short_name\n";
        for (const auto& r : routes) f << r << "," << r << "\n";
    }
    {
        std::ofstream f(dir / "stops.txt");
        f << "stop_id,stop_name\n";
        for (const auto& s : stops) f << s << "," << s << "\n";
    }
    {
        std::ofstream f(dir / "trips.txt");
        f << "trip_id,route_id,block_id,direction_id\n";
        for (const auto& p : out.patterns) {
            bool chained = p.next_trip_id.has_value() ||
                           std::any_of(out.patterns.begin(), out.patterns.end(),
                                       [&](const TripPattern& q) {
                                           return q.next_trip_id == p.trip_id;
                                       });
            f << p.trip_id << "," << p.route_id << "," << (chained ? "B1" : "") << ","
              << (p.direction == Direction::inbound ? 1 : 0) << "\n";
        }
    }
    {
        std::ofstream f(dir / "stop_times.txt");
        f << "trip_id,stop_id,stop_sequence,arrival_time,departure_time,timepoint\n";
        for (const auto& p : out.patterns)
            for (std::size_t j = 0; j < p.timepoints.size(); ++j)
                f << p.trip_id << "," << p.timepoints[j] << "," << j + 1 << ","
                  << format_hms(p.scheduled_times[j]) << "," << format_hms(p.scheduled_times[j])
                  << ",1\n";
    }
    {
        std::ofstream f(dir / "timepoints.csv");
        f << kTimepointCsvHeader << "\n";
        for (const auto& r : out.records)
            f << to_string(r.service_date) << "," << r.route_id << "," << r.trip_id << ","
              << to_string(r.direction) << "," << r.timepoint << "," << r.sequence << ","
              << format_hms(r.scheduled_time) << "," << format_hms(*r.actual_arrival) << ","
              << format_hms(*r.actual_departure) << "," << r.vehicle_id << "\n";
    }
}

}  // namespace topt
