#include "gms/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace gms {

const char* to_string(FormatErrorKind kind) {
    switch (kind) {
        case FormatErrorKind::BadMagic: return "bad magic";
        case FormatErrorKind::BadVersion: return "unsupported version";
        case FormatErrorKind::BadDtype: return "bad dtype";
        case FormatErrorKind::BadHeader: return "bad header";
        case FormatErrorKind::BadDimensions: return "bad dimensions";
        case FormatErrorKind::DimensionOverflow: return "dimension overflow";
        case FormatErrorKind::BadChannelId: return "bad channel id";
        case FormatErrorKind::NonFinite: return "non-finite value";
        case FormatErrorKind::BadPayloadValue: return "bad payload value";
        case FormatErrorKind::Truncated: return "truncated payload";
        case FormatErrorKind::TrailingBytes: return "trailing bytes";
    }
    return "format error";
}

const char* to_string(Units units) {
    return units == Units::Kelvin ? "kelvin" : "dimensionless";
}

namespace {

void check_shape(std::size_t width, std::size_t height, std::size_t length, const char* what) {
    if (width == 0 || height == 0) {
        throw InvalidArgument(std::string(what) + ": width and height must be positive");
    }
    if (width > std::numeric_limits<std::size_t>::max() / height || width * height != length) {
        throw InvalidArgument(std::string(what) + ": payload length does not match width x height");
    }
}

}  // namespace

Raster2D::Raster2D(std::size_t width, std::size_t height, std::vector<double> values, Units units)
    : width_(width), height_(height), values_(std::move(values)), units_(units) {
    check_shape(width_, height_, values_.size(), "Raster2D");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvalidArgument("Raster2D: non-finite value at index " + std::to_string(i));
        }
    }
}

Raster2D Raster2D::filled(std::size_t width, std::size_t height, double value, Units units) {
    if (width != 0 && height > std::numeric_limits<std::size_t>::max() / width) {
        throw InvalidArgument("Raster2D: dimensions overflow");
    }
    return Raster2D(width, height, std::vector<double>(width * height, value), units);
}

void validate_channel_id(const std::string& id) {
    if (id.empty() || id.size() > 16) {
        throw InvalidArgument("channel id must be 1..16 characters: '" + id + "'");
    }
    for (char ch : id) {
        if (ch < 0x21 || ch > 0x7e) {
            throw InvalidArgument("channel id must be printable ASCII without spaces: '" + id + "'");
        }
    }
}

MultiChannelImage::MultiChannelImage(std::vector<Channel> channels) : channels_(std::move(channels)) {
    if (channels_.empty()) throw InvalidArgument("MultiChannelImage: at least one channel required");
    for (std::size_t i = 0; i < channels_.size(); ++i) {
        validate_channel_id(channels_[i].id);
        if (!channels_[i].raster.same_shape(channels_.front().raster)) {
            throw InvalidArgument("MultiChannelImage: channel '" + channels_[i].id +
                                  "' has different dimensions");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (channels_[j].id == channels_[i].id) {
                throw InvalidArgument("MultiChannelImage: duplicate channel id '" + channels_[i].id + "'");
            }
        }
    }
}

bool MultiChannelImage::has_channel(const std::string& id) const noexcept {
    return std::any_of(channels_.begin(), channels_.end(), [&](const Channel& c) { return c.id == id; });
}

const Raster2D& MultiChannelImage::channel(const std::string& id) const {
    for (const auto& c : channels_) {
        if (c.id == id) return c.raster;
    }
    throw InvalidArgument("no channel named '" + id + "'");
}

MultiChannelImage MultiChannelImage::select(const std::vector<std::string>& ids) const {
    std::vector<Channel> picked;
    picked.reserve(ids.size());
    for (const auto& id : ids) picked.push_back({id, channel(id)});
    return MultiChannelImage(std::move(picked));
}

MarkerMap::MarkerMap(std::size_t width, std::size_t height, std::vector<std::uint32_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
    check_shape(width_, height_, labels_.size(), "MarkerMap");

    std::uint32_t max_label = 0;
    for (auto l : labels_) max_label = std::max(max_label, l);
    if (max_label > labels_.size()) throw InvalidArgument("MarkerMap: labels are not consecutive");

    // Each label must be exactly one 8-connected component, and 1..K all present.
    std::vector<std::size_t> first_pixel(max_label + 1, labels_.size());
    std::vector<std::size_t> area(max_label + 1, 0);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        ++area[labels_[i]];
        if (labels_[i] != 0 && first_pixel[labels_[i]] == labels_.size()) first_pixel[labels_[i]] = i;
    }
    for (std::uint32_t k = 1; k <= max_label; ++k) {
        if (first_pixel[k] == labels_.size()) throw InvalidArgument("MarkerMap: labels are not consecutive");
    }
    std::vector<std::uint8_t> visited(labels_.size(), 0);
    std::vector<std::size_t> stack;
    for (std::uint32_t k = 1; k <= max_label; ++k) {
        std::size_t reached = 0;
        stack.assign(1, first_pixel[k]);
        visited[first_pixel[k]] = 1;
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            ++reached;
            for_each_neighbor8(width_, height_, p, [&](std::size_t q) {
                if (!visited[q] && labels_[q] == k) {
                    visited[q] = 1;
                    stack.push_back(q);
                }
            });
        }
        if (reached != area[k]) {
            throw InvalidArgument("MarkerMap: label " + std::to_string(k) + " is not 8-connected");
        }
    }
    count_ = max_label;
}

SegmentMap::SegmentMap(std::size_t width, std::size_t height, std::vector<std::uint32_t> labels,
                       ClearLabel clear)
    : width_(width), height_(height), labels_(std::move(labels)), clear_(clear) {
    check_shape(width_, height_, labels_.size(), "SegmentMap");
    std::uint32_t max_label = 0;
    for (auto l : labels_) {
        if (l == 0 && clear_ == ClearLabel::Forbidden) {
            throw InvalidArgument("SegmentMap: label 0 not permitted in a full partition");
        }
        max_label = std::max(max_label, l);
    }
    if (max_label > labels_.size()) throw InvalidArgument("SegmentMap: labels are not consecutive");
    std::vector<std::uint8_t> present(max_label + 1, 0);
    for (auto l : labels_) present[l] = 1;
    for (std::uint32_t k = 1; k <= max_label; ++k) {
        if (!present[k]) throw InvalidArgument("SegmentMap: labels are not consecutive");
    }
    count_ = max_label;
}

CloudMask::CloudMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> flags)
    : width_(width), height_(height), flags_(std::move(flags)) {
    check_shape(width_, height_, flags_.size(), "CloudMask");
    for (auto f : flags_) {
        if (f > 1) throw InvalidArgument("CloudMask: flags must be 0 or 1");
    }
}

CloudMask CloudMask::all(std::size_t width, std::size_t height, bool value) {
    if (width != 0 && height > std::numeric_limits<std::size_t>::max() / width) {
        throw InvalidArgument("CloudMask: dimensions overflow");
    }
    return CloudMask(width, height, std::vector<std::uint8_t>(width * height, value ? 1 : 0));
}

std::size_t CloudMask::count() const noexcept {
    return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
}

Components label_components(std::size_t width, std::size_t height, std::span<const std::uint8_t> mask) {
    Components out;
    out.labels.assign(mask.size(), 0);
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < mask.size(); ++start) {
        if (!mask[start] || out.labels[start] != 0) continue;
        const std::uint32_t label = ++out.count;
        std::size_t area = 0;
        out.labels[start] = label;
        stack.assign(1, start);
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            ++area;
            for_each_neighbor8(width, height, p, [&](std::size_t q) {
                if (mask[q] && out.labels[q] == 0) {
                    out.labels[q] = label;
                    stack.push_back(q);
                }
            });
        }
        out.areas.push_back(area);
    }
    return out;
}

}  // namespace gms
