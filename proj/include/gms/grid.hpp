#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gms/error.hpp"

namespace gms {

enum class Units { Kelvin, Dimensionless };

const char* to_string(Units units);

/// Single-channel row-major grid of finite scalars.
class Raster2D {
public:
    Raster2D(std::size_t width, std::size_t height, std::vector<double> values,
             Units units = Units::Kelvin);

    static Raster2D filled(std::size_t width, std::size_t height, double value,
                           Units units = Units::Kelvin);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }
    Units units() const noexcept { return units_; }

    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t index) const { return values_[index]; }
    double at(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }

    bool same_shape(const Raster2D& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const Raster2D&, const Raster2D&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<double> values_;
    Units units_;
};

struct Channel {
    std::string id;
    Raster2D raster;
};

/// Co-registered channel stack. Channel ids are short ASCII strings
/// (1..16 printable characters) so they fit the on-disk id field.
class MultiChannelImage {
public:
    explicit MultiChannelImage(std::vector<Channel> channels);

    std::size_t width() const noexcept { return channels_.front().raster.width(); }
    std::size_t height() const noexcept { return channels_.front().raster.height(); }
    std::size_t channel_count() const noexcept { return channels_.size(); }

    const std::vector<Channel>& channels() const noexcept { return channels_; }
    const Raster2D& channel(const std::string& id) const;
    bool has_channel(const std::string& id) const noexcept;

    /// Subset in the requested order; unknown ids raise InvalidArgument.
    MultiChannelImage select(const std::vector<std::string>& ids) const;

private:
    std::vector<Channel> channels_;
};

void validate_channel_id(const std::string& id);

/// Flat square (2r+1)x(2r+1) structuring element centered on the origin.
class StructuringElement {
public:
    explicit constexpr StructuringElement(std::size_t radius) noexcept : radius_(radius) {}

    constexpr std::size_t radius() const noexcept { return radius_; }
    constexpr std::size_t side() const noexcept { return 2 * radius_ + 1; }

private:
    std::size_t radius_;
};

/// Seed components: 0 = non-seed, 1..K one 8-connected component each.
class MarkerMap {
public:
    MarkerMap(std::size_t width, std::size_t height, std::vector<std::uint32_t> labels);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::uint32_t count() const noexcept { return count_; }
    std::span<const std::uint32_t> labels() const noexcept { return labels_; }
    std::uint32_t operator[](std::size_t index) const { return labels_[index]; }

    friend bool operator==(const MarkerMap&, const MarkerMap&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint32_t> labels_;
    std::uint32_t count_ = 0;
};

enum class ClearLabel { Forbidden, Allowed };

/// Labeled partition. Labels are exactly {1..K}; with ClearLabel::Allowed
/// the value 0 may additionally appear and means clear sky.
class SegmentMap {
public:
    SegmentMap(std::size_t width, std::size_t height, std::vector<std::uint32_t> labels,
               ClearLabel clear = ClearLabel::Forbidden);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::uint32_t region_count() const noexcept { return count_; }
    ClearLabel clear() const noexcept { return clear_; }
    std::span<const std::uint32_t> labels() const noexcept { return labels_; }
    std::uint32_t operator[](std::size_t index) const { return labels_[index]; }

    friend bool operator==(const SegmentMap&, const SegmentMap&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint32_t> labels_;
    ClearLabel clear_;
    std::uint32_t count_ = 0;
};

/// Boolean raster, true = cloudy. Stored one byte per pixel (0 or 1).
class CloudMask {
public:
    CloudMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> flags);

    static CloudMask all(std::size_t width, std::size_t height, bool value);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return flags_.size(); }
    std::span<const std::uint8_t> flags() const noexcept { return flags_; }
    bool operator[](std::size_t index) const { return flags_[index] != 0; }
    std::size_t count() const noexcept;

    friend bool operator==(const CloudMask&, const CloudMask&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint8_t> flags_;
};

/// Calls fn(neighbor_index) for each in-bounds 8-neighbor of `index`,
/// in row-major order.
template <typename Fn>
inline void for_each_neighbor8(std::size_t width, std::size_t height, std::size_t index, Fn&& fn) {
    const std::size_t row = index / width;
    const std::size_t col = index % width;
    const std::size_t r0 = row > 0 ? row - 1 : row;
    const std::size_t r1 = row + 1 < height ? row + 1 : row;
    const std::size_t c0 = col > 0 ? col - 1 : col;
    const std::size_t c1 = col + 1 < width ? col + 1 : col;
    for (std::size_t r = r0; r <= r1; ++r) {
        for (std::size_t c = c0; c <= c1; ++c) {
            if (r != row || c != col) fn(r * width + c);
        }
    }
}

struct Components {
    std::vector<std::uint32_t> labels;  // 0 where mask is false
    std::uint32_t count = 0;
    std::vector<std::size_t> areas;     // areas[k-1] is the size of component k
};

/// 8-connected components of the nonzero entries of `mask`, labeled 1..K
/// in order of each component's first pixel in row-major scan.
Components label_components(std::size_t width, std::size_t height,
                            std::span<const std::uint8_t> mask);

}  // namespace gms
