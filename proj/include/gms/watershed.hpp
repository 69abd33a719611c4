#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "gms/grid.hpp"
#include "gms/morphology.hpp"

namespace gms {

inline constexpr double kDefaultClearSkyCutoff = 280.0;

/// Marker-controlled priority flood over the gradient field.
///
/// All marker pixels are enqueued first (ascending label, row-major within a
/// label) at their own gradient value. Pixels pop in (gradient, insertion
/// order) and hand their label to every unlabeled 8-neighbor, which is then
/// enqueued at its own gradient value. Every pixel ends up in exactly one of
/// the K regions; there are no ridge pixels.
SegmentMap watershed_from_markers(const GradientField& field, const MarkerMap& markers);

/// Repeatedly merges the smallest region with area < min_area (ties: lower
/// label) into the 8-adjacent region sharing the most adjacent pixel pairs
/// with it (ties: lower label), then compacts labels to 1..K' preserving
/// order. For maps that admit clear sky (label 0), a small region with no
/// labeled neighbor is cleared to 0 instead. A lone remaining region of a
/// full partition is kept whatever its size.
SegmentMap merge_small_regions(const SegmentMap& segments, std::size_t min_area);

struct RegionStats {
    std::uint32_t label = 0;
    std::size_t area = 0;
    double mean_bt = 0.0;
    double min_bt = 0.0;
    double mean_gradient = 0.0;
    bool is_cloud = false;
};

struct Classification {
    CloudMask mask;
    std::vector<RegionStats> regions;  // ordered by label
};

/// A region is cloud iff its mean brightness temperature is below
/// `clear_sky_cutoff`. Label 0 (clear) pixels are never cloud.
Classification classify_regions(const SegmentMap& segments, const Raster2D& bt, const GradientField& field,
                                double clear_sky_cutoff = kDefaultClearSkyCutoff);

}  // namespace gms
