#ifndef TRANSIT_OPT_STATS_HPP
#define TRANSIT_OPT_STATS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace topt::stats {

double mean(std::span<const double> xs);
double median(std::span<const double> xs);  // average of middle two for even n
double stddev(std::span<const double> xs);  // population form

// Indices whose absolute deviation from the median exceeds three times the
// scaled MAD (MAD / 0.6745). With MAD = 0 the threshold is 0, so every value
// not equal to the median is flagged.
std::vector<std::size_t> mad_outliers(std::span<const double> xs);

// Fraction of samples inside [x + early, x + late], both bounds inclusive.
// Throws std::invalid_argument on empty samples.
double ecdf_window(std::span<const double> samples, double x, double early, double late);

}  // namespace topt::stats

#endif
