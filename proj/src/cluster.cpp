#include "transit_opt/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "json.hpp"
#include "transit_opt/stats.hpp"

namespace topt {

std::string MonthClustering::to_json() const {
    nlohmann::json j;
    j["k"] = k;
    j["silhouette"] = silhouette;
    std::vector<std::vector<std::string>> clusters(static_cast<std::size_t>(k));
    for (const auto& [m, c] : assignment)
        clusters[static_cast<std::size_t>(c)].push_back(to_string(m));
    j["clusters"] = nlohmann::json::array();
    for (int c = 0; c < k; ++c)
        j["clusters"].push_back({{"id", c}, {"months", clusters[static_cast<std::size_t>(c)]}});
    return j.dump(2);
}

FeatureBuildResult build_features(const HistoricalStore& store, const std::string& trip_id) {
    const TripPattern* p = store.pattern(trip_id);
    if (!p) throw DataError("unknown trip: " + trip_id);
    FeatureBuildResult result;
    for (const Month& m : store.months(trip_id)) {
        FeatureVector fv;
        fv.month = m;
        bool complete = true;
        for (std::size_t j = 0; j + 1 < p->timepoints.size(); ++j) {
            SegmentRef seg{trip_id, p->timepoints[j], p->timepoints[j + 1]};
            std::vector<double> samples = store.travel_times(seg, {m});
            if (samples.empty()) {
                complete = false;
                break;
            }
            fv.values.push_back(stats::mean(samples));
            fv.values.push_back(stats::median(samples));
            fv.values.push_back(stats::stddev(samples));
        }
        if (complete)
            result.features.push_back(std::move(fv));
        else
            result.excluded.push_back(m);
    }
    if (result.features.empty())
        throw DataError("no month has complete segment coverage for trip " + trip_id);
    return result;
}

std::vector<FeatureVector> normalize(const std::vector<FeatureVector>& vectors) {
    std::vector<FeatureVector> out = vectors;
    if (vectors.size() < 2) return out;
    std::size_t dims = vectors.front().values.size();
    for (std::size_t d = 0; d < dims; ++d) {
        std::vector<double> col;
        col.reserve(vectors.size());
        for (const auto& v : vectors) col.push_back(v.values.at(d));
        double mu = stats::mean(col);
        double sd = stats::stddev(col);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i].values[d] = sd > 0 ? (col[i] - mu) / sd : 0.0;
    }
    return out;
}

namespace {

double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

std::vector<std::vector<double>> points_of(const std::vector<FeatureVector>& vectors) {
    std::vector<std::vector<double>> pts;
    pts.reserve(vectors.size());
    for (const auto& v : vectors) pts.push_back(v.values);
    return pts;
}

MonthClustering single_cluster(const std::vector<FeatureVector>& vectors) {
    MonthClustering c;
    c.k = 1;
    std::size_t dims = vectors.empty() ? 0 : vectors.front().values.size();
    std::vector<double> centroid(dims, 0.0);
    for (const auto& v : vectors) {
        c.assignment[v.month] = 0;
        for (std::size_t d = 0; d < dims; ++d) centroid[d] += v.values[d];
    }
    if (!vectors.empty())
        for (double& x : centroid) x /= static_cast<double>(vectors.size());
    for (const auto& v : vectors) c.objective += sqdist(v.values, centroid);
    c.centroids.push_back(std::move(centroid));
    return c;
}

MonthClustering kmeans_once(const std::vector<FeatureVector>& vectors, int k, std::uint64_t seed);

}  // namespace

double mean_silhouette(const std::vector<std::vector<double>>& points,
                       const std::vector<int>& assignment, int k) {
    std::size_t n = points.size();
    std::vector<std::size_t> cluster_size(static_cast<std::size_t>(k), 0);
    for (int a : assignment) ++cluster_size[static_cast<std::size_t>(a)];
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        int ci = assignment[i];
        if (cluster_size[static_cast<std::size_t>(ci)] <= 1) continue;  // singleton scores 0
        std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sum[static_cast<std::size_t>(assignment[j])] += std::sqrt(sqdist(points[i], points[j]));
        }
        double a = sum[static_cast<std::size_t>(ci)] /
                   static_cast<double>(cluster_size[static_cast<std::size_t>(ci)] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c == ci || cluster_size[static_cast<std::size_t>(c)] == 0) continue;
            b = std::min(b, sum[static_cast<std::size_t>(c)] /
                                static_cast<double>(cluster_size[static_cast<std::size_t>(c)]));
        }
        double denom = std::max(a, b);
        total += denom > 0 ? (b - a) / denom : 0.0;
    }
    return n > 0 ? total / static_cast<double>(n) : 0.0;
}

MonthClustering kmeans(const std::vector<FeatureVector>& vectors, int k, std::uint64_t seed,
                       int restarts) {
    if (restarts < 1) throw UsageError("kmeans: restarts must be >= 1");
    MonthClustering best = kmeans_once(vectors, k, seed);
    for (int r = 1; r < restarts; ++r) {
        MonthClustering c =
            kmeans_once(vectors, k, seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(r));
        if (c.objective < best.objective) best = std::move(c);
    }
    return best;
}

namespace {

MonthClustering kmeans_once(const std::vector<FeatureVector>& vectors, int k, std::uint64_t seed) {
    std::size_t n = vectors.size();
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw UsageError("kmeans: k must be in [1, " + std::to_string(n) + "]");
    if (k == 1) return single_cluster(vectors);

    auto pts = points_of(vectors);
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() {
        return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
    };

    // k-means++ seeding.
    std::vector<std::vector<double>> centroids;
    centroids.push_back(pts[static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n]);
    std::vector<double> d2(n);
    while (centroids.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centroids) best = std::min(best, sqdist(pts[i], c));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total > 0) {
            double r = uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (r <= acc) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
        }
        centroids.push_back(pts[pick]);
    }

    std::vector<int> assignment(n, 0);
    MonthClustering result;
    double prev_objective = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best_c = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                double d = sqdist(pts[i], centroids[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best_c = c;
                }
            }
            if (assignment[i] != best_c) {
                assignment[i] = best_c;
                changed = true;
            }
        }

        // Repair empty clusters with the point farthest from its centroid.
        for (int c = 0; c < k; ++c) {
            if (std::count(assignment.begin(), assignment.end(), c) > 0) continue;
            std::size_t farthest = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                double d = sqdist(pts[i], centroids[static_cast<std::size_t>(assignment[i])]);
                if (d > far_d &&
                    std::count(assignment.begin(), assignment.end(), assignment[i]) > 1) {
                    far_d = d;
                    farthest = i;
                }
            }
            assignment[farthest] = c;
            changed = true;
        }

        for (int c = 0; c < k; ++c) {
            auto& centroid = centroids[static_cast<std::size_t>(c)];
            std::fill(centroid.begin(), centroid.end(), 0.0);
            std::size_t count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (assignment[i] != c) continue;
                ++count;
                for (std::size_t d = 0; d < centroid.size(); ++d) centroid[d] += pts[i][d];
            }
            for (double& x : centroid) x /= static_cast<double>(count);
        }

        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            objective += sqdist(pts[i], centroids[static_cast<std::size_t>(assignment[i])]);
        if (objective > prev_objective + 1e-9)
            throw std::logic_error("kmeans objective increased across a Lloyd iteration");
        result.objective_history.push_back(objective);
        prev_objective = objective;
        if (!changed) break;
    }

    result.k = k;
    result.centroids = std::move(centroids);
    result.objective = prev_objective;
    for (std::size_t i = 0; i < n; ++i) result.assignment[vectors[i].month] = assignment[i];
    result.silhouette = mean_silhouette(pts, assignment, k);
    return result;
}

}  // namespace

MonthClustering select_k(const std::vector<FeatureVector>& vectors, int upper_limit,
                         std::uint64_t seed, double silhouette_threshold) {
    if (upper_limit < 2) throw UsageError("select_k: upper_limit must be >= 2");
    std::size_t n = vectors.size();
    if (n < 3) return single_cluster(vectors);

    int k_max = std::min<int>(upper_limit, static_cast<int>(n) - 1);
    MonthClustering best;
    bool have = false;
    for (int k = 2; k <= k_max; ++k) {
        MonthClustering c = kmeans(vectors, k, seed, 5);
        if (!have || c.silhouette > best.silhouette) {
            best = std::move(c);
            have = true;
        }
    }
    if (!have || best.silhouette < silhouette_threshold) return single_cluster(vectors);
    return best;
}

}  // namespace topt
