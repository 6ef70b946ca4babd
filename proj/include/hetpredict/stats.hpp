#pragma once

#include <span>

namespace hetpredict::stats {

double mean(std::span<const double> values);

// Population variance (divides by n).
double variance(std::span<const double> values);

// Median with the mean-of-middle-two convention for even counts. Empty input
// throws Error(EmptyInput).
double median(std::span<const double> values);

// Nearest-rank percentile for p in (0, 100]: the ceil(p/100 * n)-th smallest
// value, so the result is always one of the samples.
double nearest_rank(std::span<const double> values, double p);

}  // namespace hetpredict::stats
