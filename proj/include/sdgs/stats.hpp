#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sdgs::stats {

// Nearest-rank percentile on a sorted ascending vector: value at rank
// ceil(q * n), 1-indexed. q in (0, 1].
double percentile_sorted(const std::vector<double>& sorted, double q);

// Convenience: copies, sorts, then applies percentile_sorted.
double percentile(std::vector<double> values, double q);

double mean(const std::vector<double>& values);

// Sample standard deviation (n-1 denominator). Throws if n < 2.
double sample_std(const std::vector<double>& values);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;   // NaN when n < 2
    std::size_t n = 0;
};

MeanStd mean_std(const std::vector<double>& values);

}  // namespace sdgs::stats
