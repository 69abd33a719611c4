#pragma once

#include <cstddef>
#include <vector>

#include "gms/grid.hpp"

namespace gms {

/// Threshold-growing segmentation in the style of PERSIANN-CCS.
struct CcsConfig {
    std::vector<double> threshold_levels{220.0, 235.0, 253.0};  // kelvin, ascending
    double max_threshold = 253.0;                               // must equal the last level
    std::size_t min_area = 50;

    void validate() const;
};

/// Seeds are the 8-connected components at or below the first level. Each
/// later level grows the existing patches into adjacent unlabeled pixels at
/// or below that level, coldest pixel first, first claim wins. Pixels warmer
/// than max_threshold stay 0. Patches smaller than min_area are finally
/// merged into a touching patch or cleared.
SegmentMap ccs_segment(const Raster2D& bt, const CcsConfig& cfg = {});

/// True exactly where the label is nonzero.
CloudMask ccs_cloud_mask(const SegmentMap& segments);

}  // namespace gms
