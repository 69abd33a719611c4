#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gms/grid.hpp"
#include "gms/morphology.hpp"

namespace gms {

inline constexpr std::size_t kDefaultHistogramBins = 256;
inline constexpr std::size_t kDefaultMinSeedArea = 8;

/// Equal-width histogram over [min, max]. Bin k covers (edge(k-1), edge(k)],
/// bin 0 additionally includes min, so "value <= edge(k)" is exactly
/// "value falls in bins 0..k".
class Histogram {
public:
    Histogram(std::span<const double> values, std::size_t bins);

    std::size_t bins() const noexcept { return counts_.size(); }
    double min() const noexcept { return min_; }
    double max() const noexcept { return max_; }
    /// Upper edge of bin k; edge(bins-1) == max.
    double edge(std::size_t k) const noexcept;
    std::size_t bin_of(double value) const noexcept;

    const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
    /// Sum of the values falling in each bin, accumulated in input order.
    const std::vector<double>& sums() const noexcept { return sums_; }

private:
    double min_;
    double max_;
    std::vector<std::uint64_t> counts_;
    std::vector<double> sums_;
};

/// Between-class variance w0 * w1 * (mu0 - mu1)^2 for a split into a low class
/// (count n0, value sum s0) and a high class (n1, s1).
double between_class_variance(std::uint64_t n0, double s0, std::uint64_t n1, double s1);

struct OtsuResult {
    double threshold = 0.0;
    double between_class_variance = 0.0;
    std::size_t histogram_bins = 0;
    std::size_t bin = 0;  // threshold == edge(bin)
};

/// Otsu threshold over the bin edges of a `bins`-bin histogram. Values
/// <= threshold form the low (seed) class. Ties go to the lowest edge.
/// Throws PreconditionError when the field is constant.
OtsuResult otsu_threshold(const GradientField& field, std::size_t bins = kDefaultHistogramBins);

/// Seed pixels are those with value <= threshold; their 8-connected
/// components smaller than min_seed_area are dropped and the rest labeled
/// 1..K in row-major first-pixel order. Throws PreconditionError when no
/// component survives.
MarkerMap generate_markers(const GradientField& field, const OtsuResult& otsu,
                           std::size_t min_seed_area = kDefaultMinSeedArea);

}  // namespace gms
