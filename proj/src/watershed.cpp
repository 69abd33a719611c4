#include "gms/watershed.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace gms {

namespace {

struct QueueEntry {
    double value;
    std::uint64_t seq;
    std::size_t pixel;
};

struct LaterFirst {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const noexcept {
        if (a.value != b.value) return a.value > b.value;
        return a.seq > b.seq;
    }
};

using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, LaterFirst>;

}  // namespace

SegmentMap watershed_from_markers(const GradientField& field, const MarkerMap& markers) {
    if (field.width() != markers.width() || field.height() != markers.height()) {
        throw InvalidArgument("watershed_from_markers: field and markers differ in size");
    }
    if (markers.count() == 0) throw PreconditionError("watershed_from_markers: empty marker map");

    const std::size_t w = field.width();
    const std::size_t h = field.height();
    std::vector<std::uint32_t> labels(markers.labels().begin(), markers.labels().end());

    // Marker pixels grouped by label, row-major inside each group.
    std::vector<std::size_t> offsets(markers.count() + 2, 0);
    for (auto l : labels) {
        if (l != 0) ++offsets[l + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<std::size_t> order(offsets.back());
    {
        std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
        for (std::size_t p = 0; p < labels.size(); ++p) {
            if (labels[p] != 0) order[cursor[labels[p]]++] = p;
        }
    }

    MinQueue queue;
    std::uint64_t seq = 0;
    for (std::size_t p : order) queue.push({field[p], seq++, p});

    while (!queue.empty()) {
        const QueueEntry top = queue.top();
        queue.pop();
        const std::uint32_t label = labels[top.pixel];
        for_each_neighbor8(w, h, top.pixel, [&](std::size_t q) {
            if (labels[q] == 0) {
                labels[q] = label;
                queue.push({field[q], seq++, q});
            }
        });
    }
    return SegmentMap(w, h, std::move(labels), ClearLabel::Forbidden);
}

SegmentMap merge_small_regions(const SegmentMap& segments, std::size_t min_area) {
    const std::size_t w = segments.width();
    const std::size_t h = segments.height();
    const std::uint32_t k = segments.region_count();
    const auto labels = segments.labels();
    const bool clear_allowed = segments.clear() == ClearLabel::Allowed;

    std::vector<std::size_t> area(k + 1, 0);
    for (auto l : labels) ++area[l];

    // adjacency[a][b] = number of 8-adjacent pixel pairs with labels a and b.
    std::vector<std::map<std::uint32_t, std::uint64_t>> adjacency(k + 1);
    for (std::size_t p = 0; p < labels.size(); ++p) {
        const std::uint32_t a = labels[p];
        if (a == 0) continue;
        const std::size_t row = p / w;
        const std::size_t col = p % w;
        auto link = [&](std::size_t q) {
            const std::uint32_t b = labels[q];
            if (b != 0 && b != a) {
                ++adjacency[a][b];
                ++adjacency[b][a];
            }
        };
        // Forward half of the 8-neighborhood so each pair is counted once.
        if (col + 1 < w) link(p + 1);
        if (row + 1 < h) {
            if (col > 0) link(p + w - 1);
            link(p + w);
            if (col + 1 < w) link(p + w + 1);
        }
    }

    std::vector<std::uint32_t> target(k + 1);  // merged-into label, 0 = cleared
    std::iota(target.begin(), target.end(), 0u);
    std::set<std::pair<std::size_t, std::uint32_t>> small;
    for (std::uint32_t l = 1; l <= k; ++l) {
        if (area[l] < min_area) small.insert({area[l], l});
    }
    std::uint32_t alive = k;

    while (!small.empty()) {
        const std::uint32_t a = small.begin()->second;
        small.erase(small.begin());
        if (!clear_allowed && alive <= 1) break;

        std::uint32_t b = 0;
        std::uint64_t best = 0;
        for (const auto& [neighbor, pairs] : adjacency[a]) {
            if (pairs > best) {
                best = pairs;
                b = neighbor;
            }
        }
        if (b == 0) {
            if (clear_allowed) {
                target[a] = 0;
                --alive;
            }
            continue;
        }

        small.erase({area[b], b});
        area[b] += area[a];
        area[a] = 0;
        for (const auto& [c, pairs] : adjacency[a]) {
            adjacency[c].erase(a);
            if (c == b) continue;
            adjacency[b][c] += pairs;
            adjacency[c][b] += pairs;
        }
        adjacency[a].clear();
        target[a] = b;
        --alive;
        if (area[b] < min_area) small.insert({area[b], b});
    }

    // Resolve merge chains and compact surviving labels in ascending order.
    auto resolve = [&](std::uint32_t l) {
        while (l != 0 && target[l] != l) l = target[l];
        return l;
    };
    std::vector<std::uint32_t> compact(k + 1, 0);
    std::uint32_t next = 0;
    for (std::uint32_t l = 1; l <= k; ++l) {
        if (target[l] == l) compact[l] = ++next;
    }
    std::vector<std::uint32_t> final_label(k + 1, 0);
    for (std::uint32_t l = 1; l <= k; ++l) final_label[l] = compact[resolve(l)];

    std::vector<std::uint32_t> out(labels.size());
    for (std::size_t p = 0; p < labels.size(); ++p) out[p] = final_label[labels[p]];
    return SegmentMap(w, h, std::move(out), segments.clear());
}

Classification classify_regions(const SegmentMap& segments, const Raster2D& bt, const GradientField& field,
                                double clear_sky_cutoff) {
    if (bt.width() != segments.width() || bt.height() != segments.height() ||
        field.width() != segments.width() || field.height() != segments.height()) {
        throw InvalidArgument("classify_regions: segment map, brightness temperature and gradient differ in size");
    }
    const std::uint32_t k = segments.region_count();
    std::vector<RegionStats> stats(k);
    std::vector<double> bt_sum(k, 0.0);
    std::vector<double> grad_sum(k, 0.0);
    for (std::uint32_t l = 1; l <= k; ++l) {
        stats[l - 1].label = l;
        stats[l - 1].min_bt = std::numeric_limits<double>::infinity();
    }
    const auto labels = segments.labels();
    for (std::size_t p = 0; p < labels.size(); ++p) {
        if (labels[p] == 0) continue;
        const std::size_t i = labels[p] - 1;
        ++stats[i].area;
        bt_sum[i] += bt[p];
        grad_sum[i] += field[p];
        stats[i].min_bt = std::min(stats[i].min_bt, bt[p]);
    }
    for (std::uint32_t i = 0; i < k; ++i) {
        const auto n = static_cast<double>(stats[i].area);
        // The mean of values >= min can round below min by an ulp.
        stats[i].mean_bt = std::max(bt_sum[i] / n, stats[i].min_bt);
        stats[i].mean_gradient = grad_sum[i] / n;
        stats[i].is_cloud = stats[i].mean_bt < clear_sky_cutoff;
    }
    std::vector<std::uint8_t> flags(labels.size(), 0);
    for (std::size_t p = 0; p < labels.size(); ++p) {
        if (labels[p] != 0 && stats[labels[p] - 1].is_cloud) flags[p] = 1;
    }
    return {CloudMask(segments.width(), segments.height(), std::move(flags)), std::move(stats)};
}

}  // namespace gms
