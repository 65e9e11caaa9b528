#include "sdgs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sdgs::stats {

double percentile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) {
        throw std::invalid_argument("percentile of empty sample");
    }
    if (q <= 0.0 || q > 1.0) {
        throw std::invalid_argument("percentile rank must be in (0, 1]");
    }
    const auto n = sorted.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return sorted[rank - 1];
}

double percentile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    return percentile_sorted(values, q);
}

double mean(const std::vector<double>& values) {
    if (values.empty()) {
        throw std::invalid_argument("mean of empty sample");
    }
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double sample_std(const std::vector<double>& values) {
    if (values.size() < 2) {
        throw std::invalid_argument("sample std needs at least two values");
    }
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd out;
    out.n = values.size();
    out.mean = mean(values);
    out.std = values.size() >= 2 ? sample_std(values)
                                 : std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace sdgs::stats
