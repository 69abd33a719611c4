#pragma once

#include <cstddef>

#include "gms/grid.hpp"

namespace gms {

/// Non-negative, dimensionless gradient magnitude raster.
class GradientField {
public:
    explicit GradientField(Raster2D raster);

    const Raster2D& raster() const noexcept { return raster_; }
    std::size_t width() const noexcept { return raster_.width(); }
    std::size_t height() const noexcept { return raster_.height(); }
    std::size_t size() const noexcept { return raster_.size(); }
    std::span<const double> values() const noexcept { return raster_.values(); }
    double operator[](std::size_t index) const { return raster_[index]; }

    friend bool operator==(const GradientField&, const GradientField&) = default;

private:
    Raster2D raster_;
};

struct GradientConfig {
    std::size_t n_scales = 5;
    bool normalize_channels = false;
};

// Flat square erosion/dilation. Windows are clipped to the image domain.
Raster2D dilate(const Raster2D& f, StructuringElement se);
Raster2D erode(const Raster2D& f, StructuringElement se);

/// dilate(f, se) - erode(f, se). Radius 0 is rejected.
GradientField morphological_gradient(const Raster2D& f, StructuringElement se);

/// Mean over scales i = 1..n of erode(MG_i(f), B_{i-1}), where MG_i is the
/// single-scale gradient with a (2i+1)^2 window and B_0 is the identity.
GradientField multiscale_gradient(const Raster2D& f, const GradientConfig& cfg);

/// Per-channel multiscale gradient summed in channel order. With
/// normalize_channels each channel field is first divided by its own maximum
/// (channels whose maximum is zero are added unscaled, i.e. as zeros).
GradientField multispectral_gradient(const MultiChannelImage& image, const GradientConfig& cfg);

}  // namespace gms
