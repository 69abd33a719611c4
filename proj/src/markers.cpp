#include "gms/markers.hpp"

#include <algorithm>
#include <cmath>

namespace gms {

Histogram::Histogram(std::span<const double> values, std::size_t bins) : counts_(bins, 0), sums_(bins, 0.0) {
    if (bins < 2) throw InvalidArgument("histogram needs at least 2 bins");
    if (values.empty()) throw InvalidArgument("histogram of an empty field");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    min_ = *lo;
    max_ = *hi;
    for (double v : values) {
        const std::size_t k = bin_of(v);
        ++counts_[k];
        sums_[k] += v;
    }
}

double Histogram::edge(std::size_t k) const noexcept {
    const std::size_t n = counts_.size();
    if (k + 1 >= n) return max_;
    return min_ + (max_ - min_) * static_cast<double>(k + 1) / static_cast<double>(n);
}

std::size_t Histogram::bin_of(double value) const noexcept {
    const std::size_t n = counts_.size();
    if (max_ <= min_) return 0;
    const double pos = (value - min_) / (max_ - min_) * static_cast<double>(n);
    auto k = static_cast<std::size_t>(std::clamp(std::ceil(pos) - 1.0, 0.0, static_cast<double>(n - 1)));
    // Snap to the edges actually used for thresholds so bin membership and the
    // "value <= edge" test never disagree through rounding.
    while (k > 0 && value <= edge(k - 1)) --k;
    while (k + 1 < n && value > edge(k)) ++k;
    return k;
}

double between_class_variance(std::uint64_t n0, double s0, std::uint64_t n1, double s1) {
    const double total = static_cast<double>(n0 + n1);
    const double w0 = static_cast<double>(n0) / total;
    const double w1 = static_cast<double>(n1) / total;
    const double mu0 = s0 / static_cast<double>(n0);
    const double mu1 = s1 / static_cast<double>(n1);
    return w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
}

OtsuResult otsu_threshold(const GradientField& field, std::size_t bins) {
    if (bins < 2) throw InvalidArgument("otsu_threshold: bins must be at least 2");
    const Histogram hist(field.values(), bins);
    if (hist.max() <= hist.min()) {
        throw PreconditionError("otsu_threshold: constant field, no threshold separates two classes");
    }

    std::uint64_t total_count = 0;
    double total_sum = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
        total_count += hist.counts()[k];
        total_sum += hist.sums()[k];
    }

    OtsuResult best;
    best.histogram_bins = bins;
    bool found = false;
    std::uint64_t n0 = 0;
    double s0 = 0.0;
    for (std::size_t k = 0; k + 1 < bins; ++k) {
        n0 += hist.counts()[k];
        s0 += hist.sums()[k];
        const std::uint64_t n1 = total_count - n0;
        if (n0 == 0 || n1 == 0) continue;
        const double var = between_class_variance(n0, s0, n1, total_sum - s0);
        if (!found || var > best.between_class_variance) {
            found = true;
            best.between_class_variance = var;
            best.bin = k;
            best.threshold = hist.edge(k);
        }
    }
    if (!found) throw PreconditionError("otsu_threshold: no bin edge separates two non-empty classes");
    return best;
}

MarkerMap generate_markers(const GradientField& field, const OtsuResult& otsu, std::size_t min_seed_area) {
    if (min_seed_area == 0) throw InvalidArgument("generate_markers: min_seed_area must be positive");
    std::vector<std::uint8_t> seed(field.size());
    for (std::size_t i = 0; i < seed.size(); ++i) seed[i] = field[i] <= otsu.threshold ? 1 : 0;

    const Components comps = label_components(field.width(), field.height(), seed);
    std::vector<std::uint32_t> remap(comps.count + 1, 0);
    std::uint32_t kept = 0;
    for (std::uint32_t k = 1; k <= comps.count; ++k) {
        if (comps.areas[k - 1] >= min_seed_area) remap[k] = ++kept;
    }
    if (kept == 0) {
        throw PreconditionError("generate_markers: every seed component is smaller than min_seed_area=" +
                                std::to_string(min_seed_area) + "; try a smaller value");
    }
    std::vector<std::uint32_t> labels(field.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = remap[comps.labels[i]];
    return MarkerMap(field.width(), field.height(), std::move(labels));
}

}  // namespace gms
