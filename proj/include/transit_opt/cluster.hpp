#ifndef TRANSIT_OPT_CLUSTER_HPP
#define TRANSIT_OPT_CLUSTER_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "transit_opt/store.hpp"
#include "transit_opt/types.hpp"

namespace topt {

// Per-month travel-time statistics of one trip: [mean, median, std] per
// segment, in segment order, seconds.
struct FeatureVector {
    Month month;
    std::vector<double> values;
};

struct MonthClustering {
    int k = 1;
    std::map<Month, int> assignment;
    std::vector<std::vector<double>> centroids;  // in normalized feature space
    double silhouette = 0.0;                     // mean score; 0 for k = 1
    double objective = 0.0;                      // within-cluster squared distance
    std::vector<double> objective_history;       // one entry per Lloyd iteration

    std::string to_json() const;
};

struct FeatureBuildResult {
    std::vector<FeatureVector> features;
    std::vector<Month> excluded;  // months missing data on some segment
};

// One vector per month that has at least one sample on every segment of the
// trip. Throws DataError when no month is complete.
FeatureBuildResult build_features(const HistoricalStore& store, const std::string& trip_id);

// Per-dimension z-score; constant dimensions map to 0.
std::vector<FeatureVector> normalize(const std::vector<FeatureVector>& vectors);

// Lloyd's algorithm with k-means++ seeding; deterministic given seed.
// Input vectors are clustered as-is (callers normalize first). With
// restarts > 1 the lowest-objective run wins (sub-seeds derived from seed).
MonthClustering kmeans(const std::vector<FeatureVector>& vectors, int k, std::uint64_t seed,
                       int restarts = 1);

// Runs kmeans for k in [2, min(upper_limit, n-1)] and keeps the best mean
// silhouette; falls back to k = 1 below the threshold or for < 3 vectors.
// A handful of restarts per k guards against bad seeding on few points.
MonthClustering select_k(const std::vector<FeatureVector>& vectors, int upper_limit,
                         std::uint64_t seed, double silhouette_threshold = 0.25);

// Mean silhouette of an assignment (singletons score 0). Exposed for tests.
double mean_silhouette(const std::vector<std::vector<double>>& points,
                       const std::vector<int>& assignment, int k);

}  // namespace topt

#endif
