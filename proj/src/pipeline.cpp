#include "gms/pipeline.hpp"

namespace gms {

const Raster2D& brightness_channel(const MultiChannelImage& image, const std::string& requested) {
    if (!requested.empty()) return image.channel(requested);
    if (image.has_channel("ir_window")) return image.channel("ir_window");
    return image.channels().front().raster;
}

GmsResult run_gms(const MultiChannelImage& image, const GmsConfig& cfg) {
    const MultiChannelImage bands = cfg.channels.empty() ? image : image.select(cfg.channels);
    const Raster2D& bt = brightness_channel(image, cfg.bt_channel);

    GradientField gradient = multispectral_gradient(bands, cfg.gradient);
    const OtsuResult otsu = otsu_threshold(gradient, cfg.histogram_bins);
    MarkerMap markers = generate_markers(gradient, otsu, cfg.min_seed_area);
    SegmentMap segments = watershed_from_markers(gradient, markers);
    if (cfg.min_area > 1) segments = merge_small_regions(segments, cfg.min_area);
    Classification classification = classify_regions(segments, bt, gradient, cfg.clear_sky_cutoff);
    return {std::move(gradient), otsu, std::move(markers), std::move(segments), std::move(classification)};
}

}  // namespace gms
