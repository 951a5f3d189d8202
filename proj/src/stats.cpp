#include "transit_opt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace topt::stats {

double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double median(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    std::vector<double> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double stddev(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    double mu = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(xs.size()));
}

std::vector<std::size_t> mad_outliers(std::span<const double> xs) {
    std::vector<std::size_t> out;
    if (xs.empty()) return out;
    double med = median(xs);
    std::vector<double> dev(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) dev[i] = std::abs(xs[i] - med);
    double mad = median(dev);
    double threshold = 3.0 * (mad / 0.6745);
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (dev[i] > threshold) out.push_back(i);
    return out;
}

double ecdf_window(std::span<const double> samples, double x, double early, double late) {
    if (samples.empty()) throw std::invalid_argument("ecdf_window: empty samples");
    std::size_t hits = 0;
    for (double s : samples)
        if (x + early <= s && s <= x + late) ++hits;
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

}  // namespace topt::stats
