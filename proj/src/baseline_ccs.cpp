#include "gms/baseline_ccs.hpp"

#include <cmath>
#include <queue>

#include "gms/watershed.hpp"

namespace gms {

void CcsConfig::validate() const {
    if (threshold_levels.empty()) throw InvalidArgument("CcsConfig: at least one threshold level required");
    for (std::size_t i = 0; i < threshold_levels.size(); ++i) {
        if (!std::isfinite(threshold_levels[i])) throw InvalidArgument("CcsConfig: non-finite threshold level");
        if (i > 0 && !(threshold_levels[i] > threshold_levels[i - 1])) {
            throw InvalidArgument("CcsConfig: threshold levels must be strictly ascending");
        }
    }
    if (threshold_levels.back() != max_threshold) {
        throw InvalidArgument("CcsConfig: last threshold level must equal max_threshold");
    }
    if (min_area == 0) throw InvalidArgument("CcsConfig: min_area must be positive");
}

namespace {

struct Candidate {
    double bt;
    std::uint64_t seq;
    std::size_t pixel;
    std::uint32_t label;
};

struct WarmerLater {
    bool operator()(const Candidate& a, const Candidate& b) const noexcept {
        if (a.bt != b.bt) return a.bt > b.bt;
        return a.seq > b.seq;
    }
};

}  // namespace

SegmentMap ccs_segment(const Raster2D& bt, const CcsConfig& cfg) {
    cfg.validate();
    const std::size_t w = bt.width();
    const std::size_t h = bt.height();

    std::vector<std::uint8_t> cold(bt.size());
    for (std::size_t p = 0; p < bt.size(); ++p) cold[p] = bt[p] <= cfg.threshold_levels.front() ? 1 : 0;
    std::vector<std::uint32_t> labels = label_components(w, h, cold).labels;

    std::priority_queue<Candidate, std::vector<Candidate>, WarmerLater> frontier;
    std::uint64_t seq = 0;
    for (std::size_t level = 1; level < cfg.threshold_levels.size(); ++level) {
        const double limit = cfg.threshold_levels[level];
        auto offer_neighbors = [&](std::size_t p) {
            for_each_neighbor8(w, h, p, [&](std::size_t q) {
                if (labels[q] == 0 && bt[q] <= limit) frontier.push({bt[q], seq++, q, labels[p]});
            });
        };
        for (std::size_t p = 0; p < labels.size(); ++p) {
            if (labels[p] != 0) offer_neighbors(p);
        }
        while (!frontier.empty()) {
            const Candidate c = frontier.top();
            frontier.pop();
            if (labels[c.pixel] != 0) continue;  // claimed earlier
            labels[c.pixel] = c.label;
            offer_neighbors(c.pixel);
        }
    }

    return merge_small_regions(SegmentMap(w, h, std::move(labels), ClearLabel::Allowed), cfg.min_area);
}

CloudMask ccs_cloud_mask(const SegmentMap& segments) {
    std::vector<std::uint8_t> flags(segments.labels().size());
    for (std::size_t p = 0; p < flags.size(); ++p) flags[p] = segments[p] != 0 ? 1 : 0;
    return CloudMask(segments.width(), segments.height(), std::move(flags));
}

}  // namespace gms
