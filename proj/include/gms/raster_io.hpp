#pragma once

// GMS1 raster and GMSV volume codecs.
//
// GMS1 layout (little-endian throughout):
//   0   char[4]  "GMS1"
//   4   u8       version = 1
//   5   u8       dtype   (1 = f32, 2 = u8, 3 = u32)
//   6   u16      reserved = 0
//   8   u32      width
//   12  u32      height
//   16  u32      channel_count
//   20  char[16] channel id, zero padded, one per channel
//   ... payload, channel-major then row-major
//
// GMSV replaces channel_count with level_count followed by species_count
// (header is 24 bytes), then one 16-byte id per species, then an f32
// payload ordered [level][species][row][col].

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gms/grid.hpp"
#include "gms/hydrometeor.hpp"

namespace gms {

enum class DType : std::uint8_t { F32 = 1, U8 = 2, U32 = 3 };

using Bytes = std::vector<std::uint8_t>;

/// Decoded GMS1 contents with the payload kept in its on-disk type.
struct RasterFile {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::string> channel_ids;
    std::variant<std::vector<float>, std::vector<std::uint8_t>, std::vector<std::uint32_t>> payload;

    DType dtype() const noexcept;

    friend bool operator==(const RasterFile&, const RasterFile&) = default;
};

Bytes encode_raster(const RasterFile& file);
RasterFile decode_raster(std::span<const std::uint8_t> bytes);

RasterFile to_raster_file(const MultiChannelImage& image);
RasterFile to_raster_file(const SegmentMap& segments);
RasterFile to_raster_file(const CloudMask& mask);

MultiChannelImage to_image(const RasterFile& file, Units units = Units::Kelvin);
SegmentMap to_segment_map(const RasterFile& file, ClearLabel clear);
CloudMask to_cloud_mask(const RasterFile& file);

Bytes encode_volume(const HydrometeorVolume& volume);
HydrometeorVolume decode_volume(std::span<const std::uint8_t> bytes);

Bytes read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

MultiChannelImage read_raster_file(const std::filesystem::path& path, Units units = Units::Kelvin);
SegmentMap read_segment_map(const std::filesystem::path& path, ClearLabel clear);
CloudMask read_cloud_mask(const std::filesystem::path& path);
HydrometeorVolume read_volume_file(const std::filesystem::path& path);

void write_raster_file(const MultiChannelImage& image, const std::filesystem::path& path);
void write_raster_file(const SegmentMap& segments, const std::filesystem::path& path);
void write_raster_file(const CloudMask& mask, const std::filesystem::path& path);
void write_volume_file(const HydrometeorVolume& volume, const std::filesystem::path& path);

}  // namespace gms
