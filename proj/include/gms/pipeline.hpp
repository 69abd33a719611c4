#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gms/grid.hpp"
#include "gms/markers.hpp"
#include "gms/morphology.hpp"
#include "gms/watershed.hpp"

namespace gms {

struct GmsConfig {
    GradientConfig gradient;
    std::vector<std::string> channels;  // empty = all channels, in file order
    std::string bt_channel;             // empty = "ir_window" if present, else the first channel
    std::size_t histogram_bins = kDefaultHistogramBins;
    std::size_t min_seed_area = kDefaultMinSeedArea;
    std::size_t min_area = 0;           // post-flood merge; 0 disables
    double clear_sky_cutoff = kDefaultClearSkyCutoff;
};

struct GmsResult {
    GradientField gradient;
    OtsuResult otsu;
    MarkerMap markers;
    SegmentMap segments;
    Classification classification;
};

/// Gradient -> Otsu -> markers -> watershed -> (merge) -> classification.
GmsResult run_gms(const MultiChannelImage& image, const GmsConfig& cfg = {});

const Raster2D& brightness_channel(const MultiChannelImage& image, const std::string& requested);

}  // namespace gms
