#include "gms/raster_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

namespace gms {

namespace {

constexpr std::size_t kIdBytes = 16;
constexpr std::size_t kRasterHeaderBytes = 20;
constexpr std::size_t kVolumeHeaderBytes = 24;
constexpr std::uint8_t kVersion = 1;

class Writer {
public:
    void raw(const char* s, std::size_t n) { out_.insert(out_.end(), s, s + n); }
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) {
        u8(static_cast<std::uint8_t>(v));
        u8(static_cast<std::uint8_t>(v >> 8));
    }
    void u32(std::uint32_t v) {
        for (int shift = 0; shift < 32; shift += 8) u8(static_cast<std::uint8_t>(v >> shift));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void id(const std::string& s) {
        raw(s.data(), s.size());
        out_.insert(out_.end(), kIdBytes - s.size(), 0);
    }
    void reserve(std::size_t n) { out_.reserve(n); }
    Bytes take() { return std::move(out_); }

private:
    Bytes out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

    void need(std::size_t n, const char* what) const {
        if (remaining() < n) {
            throw FormatError(FormatErrorKind::Truncated, std::string("not enough bytes for ") + what);
        }
    }
    std::uint8_t u8() { return bytes_[pos_++]; }
    std::uint16_t u16() {
        std::uint16_t v = bytes_[pos_] | static_cast<std::uint16_t>(bytes_[pos_ + 1] << 8);
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    std::span<const std::uint8_t> take(std::size_t n) {
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::uint32_t checked_u32(std::size_t v, const char* what) {
    if (v > std::numeric_limits<std::uint32_t>::max()) {
        throw InvalidArgument(std::string(what) + " exceeds the 32-bit format limit");
    }
    return static_cast<std::uint32_t>(v);
}

std::size_t element_size(DType dtype) {
    return dtype == DType::U8 ? 1 : 4;
}

// Product of the factors times elem, or DimensionOverflow if it does not fit size_t.
std::size_t checked_product(std::initializer_list<std::uint64_t> factors) {
    std::uint64_t total = 1;
    for (auto f : factors) {
        if (f != 0 && total > std::numeric_limits<std::uint64_t>::max() / f) {
            throw FormatError(FormatErrorKind::DimensionOverflow, "payload size overflows 64 bits");
        }
        total *= f;
    }
    if (total > std::numeric_limits<std::size_t>::max()) {
        throw FormatError(FormatErrorKind::DimensionOverflow, "payload size exceeds address space");
    }
    return static_cast<std::size_t>(total);
}

std::string read_id(Reader& in) {
    auto raw = in.take(kIdBytes);
    std::size_t len = 0;
    while (len < kIdBytes && raw[len] != 0) ++len;
    for (std::size_t i = len; i < kIdBytes; ++i) {
        if (raw[i] != 0) throw FormatError(FormatErrorKind::BadChannelId, "id padding must be zero");
    }
    std::string id(reinterpret_cast<const char*>(raw.data()), len);
    try {
        validate_channel_id(id);
    } catch (const InvalidArgument& e) {
        throw FormatError(FormatErrorKind::BadChannelId, e.what());
    }
    return id;
}

void check_magic(Reader& in, const char* magic) {
    in.need(4, "magic");
    auto m = in.take(4);
    if (std::memcmp(m.data(), magic, 4) != 0) {
        throw FormatError(FormatErrorKind::BadMagic, std::string("expected \"") + magic + "\"");
    }
}

void check_version(Reader& in) {
    const auto version = in.u8();
    if (version != kVersion) {
        throw FormatError(FormatErrorKind::BadVersion, "version " + std::to_string(version));
    }
}

template <typename T>
std::vector<T> read_payload(Reader& in, std::size_t count) {
    std::vector<T> out(count);
    for (auto& v : out) {
        if constexpr (std::is_same_v<T, float>) {
            v = in.f32();
            if (!std::isfinite(v)) throw FormatError(FormatErrorKind::NonFinite, "payload contains NaN or Inf");
        } else if constexpr (std::is_same_v<T, std::uint8_t>) {
            v = in.u8();
        } else {
            v = in.u32();
        }
    }
    return out;
}

}  // namespace

DType RasterFile::dtype() const noexcept {
    switch (payload.index()) {
        case 0: return DType::F32;
        case 1: return DType::U8;
        default: return DType::U32;
    }
}

Bytes encode_raster(const RasterFile& file) {
    if (file.channel_ids.empty()) throw InvalidArgument("GMS1: at least one channel required");
    if (file.width == 0 || file.height == 0) throw InvalidArgument("GMS1: dimensions must be positive");
    for (const auto& id : file.channel_ids) validate_channel_id(id);
    const std::size_t count = std::size_t{file.width} * file.height * file.channel_ids.size();
    const std::size_t payload_count = std::visit([](const auto& v) { return v.size(); }, file.payload);
    if (payload_count != count) throw InvalidArgument("GMS1: payload length does not match dimensions");

    Writer out;
    out.reserve(kRasterHeaderBytes + kIdBytes * file.channel_ids.size() + count * element_size(file.dtype()));
    out.raw("GMS1", 4);
    out.u8(kVersion);
    out.u8(static_cast<std::uint8_t>(file.dtype()));
    out.u16(0);
    out.u32(file.width);
    out.u32(file.height);
    out.u32(checked_u32(file.channel_ids.size(), "channel count"));
    for (const auto& id : file.channel_ids) out.id(id);
    std::visit(
        [&](const auto& values) {
            for (auto v : values) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, float>) {
                    if (!std::isfinite(v)) throw InvalidArgument("GMS1: non-finite value");
                    out.f32(v);
                } else if constexpr (std::is_same_v<T, std::uint8_t>) {
                    out.u8(v);
                } else {
                    out.u32(v);
                }
            }
        },
        file.payload);
    return out.take();
}

RasterFile decode_raster(std::span<const std::uint8_t> bytes) {
    Reader in(bytes);
    check_magic(in, "GMS1");
    in.need(kRasterHeaderBytes - 4, "header");
    check_version(in);
    const auto dtype_code = in.u8();
    if (dtype_code < 1 || dtype_code > 3) {
        throw FormatError(FormatErrorKind::BadDtype, "dtype code " + std::to_string(dtype_code));
    }
    const auto dtype = static_cast<DType>(dtype_code);
    if (in.u16() != 0) throw FormatError(FormatErrorKind::BadHeader, "reserved field must be zero");

    RasterFile file;
    file.width = in.u32();
    file.height = in.u32();
    const std::uint32_t channels = in.u32();
    if (file.width == 0 || file.height == 0 || channels == 0) {
        throw FormatError(FormatErrorKind::BadDimensions, "width, height and channel count must be positive");
    }
    const std::size_t count = checked_product({file.width, file.height, channels});
    const std::size_t payload_bytes = checked_product({file.width, file.height, channels, element_size(dtype)});
    const std::size_t id_bytes = checked_product({channels, kIdBytes});

    in.need(id_bytes, "channel ids");
    for (std::uint32_t c = 0; c < channels; ++c) {
        file.channel_ids.push_back(read_id(in));
        for (std::uint32_t j = 0; j < c; ++j) {
            if (file.channel_ids[j] == file.channel_ids[c]) {
                throw FormatError(FormatErrorKind::BadChannelId, "duplicate id '" + file.channel_ids[c] + "'");
            }
        }
    }
    in.need(payload_bytes, "payload");
    switch (dtype) {
        case DType::F32: file.payload = read_payload<float>(in, count); break;
        case DType::U8: file.payload = read_payload<std::uint8_t>(in, count); break;
        case DType::U32: file.payload = read_payload<std::uint32_t>(in, count); break;
    }
    if (in.remaining() != 0) {
        throw FormatError(FormatErrorKind::TrailingBytes, std::to_string(in.remaining()) + " bytes after payload");
    }
    return file;
}

RasterFile to_raster_file(const MultiChannelImage& image) {
    RasterFile file;
    file.width = checked_u32(image.width(), "width");
    file.height = checked_u32(image.height(), "height");
    std::vector<float> values;
    values.reserve(image.width() * image.height() * image.channel_count());
    for (const auto& ch : image.channels()) {
        file.channel_ids.push_back(ch.id);
        for (double v : ch.raster.values()) {
            const auto f = static_cast<float>(v);
            if (!std::isfinite(f)) throw InvalidArgument("GMS1: value out of f32 range in '" + ch.id + "'");
            values.push_back(f);
        }
    }
    file.payload = std::move(values);
    return file;
}

RasterFile to_raster_file(const SegmentMap& segments) {
    RasterFile file;
    file.width = checked_u32(segments.width(), "width");
    file.height = checked_u32(segments.height(), "height");
    file.channel_ids = {"segments"};
    file.payload = std::vector<std::uint32_t>(segments.labels().begin(), segments.labels().end());
    return file;
}

RasterFile to_raster_file(const CloudMask& mask) {
    RasterFile file;
    file.width = checked_u32(mask.width(), "width");
    file.height = checked_u32(mask.height(), "height");
    file.channel_ids = {"cloud_mask"};
    file.payload = std::vector<std::uint8_t>(mask.flags().begin(), mask.flags().end());
    return file;
}

MultiChannelImage to_image(const RasterFile& file, Units units) {
    const auto* values = std::get_if<std::vector<float>>(&file.payload);
    if (values == nullptr) throw FormatError(FormatErrorKind::BadDtype, "expected an f32 raster");
    const std::size_t plane = std::size_t{file.width} * file.height;
    std::vector<Channel> channels;
    for (std::size_t c = 0; c < file.channel_ids.size(); ++c) {
        auto first = values->begin() + static_cast<std::ptrdiff_t>(c * plane);
        std::vector<double> data(first, first + static_cast<std::ptrdiff_t>(plane));
        channels.push_back({file.channel_ids[c], Raster2D(file.width, file.height, std::move(data), units)});
    }
    return MultiChannelImage(std::move(channels));
}

SegmentMap to_segment_map(const RasterFile& file, ClearLabel clear) {
    const auto* values = std::get_if<std::vector<std::uint32_t>>(&file.payload);
    if (values == nullptr) throw FormatError(FormatErrorKind::BadDtype, "expected a u32 label raster");
    if (file.channel_ids.size() != 1) throw FormatError(FormatErrorKind::BadDimensions, "expected one channel");
    try {
        return SegmentMap(file.width, file.height, *values, clear);
    } catch (const InvalidArgument& e) {
        throw FormatError(FormatErrorKind::BadPayloadValue, e.what());
    }
}

CloudMask to_cloud_mask(const RasterFile& file) {
    const auto* values = std::get_if<std::vector<std::uint8_t>>(&file.payload);
    if (values == nullptr) throw FormatError(FormatErrorKind::BadDtype, "expected a u8 mask raster");
    if (file.channel_ids.size() != 1) throw FormatError(FormatErrorKind::BadDimensions, "expected one channel");
    try {
        return CloudMask(file.width, file.height, *values);
    } catch (const InvalidArgument& e) {
        throw FormatError(FormatErrorKind::BadPayloadValue, e.what());
    }
}

Bytes encode_volume(const HydrometeorVolume& volume) {
    const std::size_t plane = volume.plane_size();
    const std::size_t species = volume.species().size();
    Writer out;
    out.reserve(kVolumeHeaderBytes + kIdBytes * species + 4 * plane * species * volume.levels());
    out.raw("GMSV", 4);
    out.u8(kVersion);
    out.u8(static_cast<std::uint8_t>(DType::F32));
    out.u16(0);
    out.u32(checked_u32(volume.width(), "width"));
    out.u32(checked_u32(volume.height(), "height"));
    out.u32(checked_u32(volume.levels(), "level count"));
    out.u32(checked_u32(species, "species count"));
    for (auto s : volume.species()) out.id(std::string(to_string(s)));
    for (std::size_t level = 0; level < volume.levels(); ++level) {
        for (std::size_t s = 0; s < species; ++s) {
            for (std::size_t p = 0; p < plane; ++p) {
                const auto f = static_cast<float>(volume.at(s, level, p));
                if (!std::isfinite(f)) throw InvalidArgument("GMSV: value out of f32 range");
                out.f32(f);
            }
        }
    }
    return out.take();
}

HydrometeorVolume decode_volume(std::span<const std::uint8_t> bytes) {
    Reader in(bytes);
    check_magic(in, "GMSV");
    in.need(kVolumeHeaderBytes - 4, "header");
    check_version(in);
    const auto dtype_code = in.u8();
    if (dtype_code != static_cast<std::uint8_t>(DType::F32)) {
        throw FormatError(FormatErrorKind::BadDtype, "volumes must be f32, got code " + std::to_string(dtype_code));
    }
    if (in.u16() != 0) throw FormatError(FormatErrorKind::BadHeader, "reserved field must be zero");
    const std::uint32_t width = in.u32();
    const std::uint32_t height = in.u32();
    const std::uint32_t levels = in.u32();
    const std::uint32_t species_count = in.u32();
    if (width == 0 || height == 0 || levels == 0 || species_count == 0) {
        throw FormatError(FormatErrorKind::BadDimensions, "width, height, levels and species must be positive");
    }
    const std::size_t plane = checked_product({width, height});
    const std::size_t count = checked_product({width, height, levels, species_count});
    const std::size_t payload_bytes = checked_product({width, height, levels, species_count, 4});

    in.need(checked_product({species_count, kIdBytes}), "species ids");
    std::vector<Species> species;
    for (std::uint32_t s = 0; s < species_count; ++s) {
        const auto id = read_id(in);
        const auto parsed = parse_species(id);
        if (!parsed) throw FormatError(FormatErrorKind::BadChannelId, "unknown species '" + id + "'");
        species.push_back(*parsed);
    }
    in.need(payload_bytes, "payload");
    std::vector<double> values(count);
    for (std::size_t level = 0; level < levels; ++level) {
        for (std::size_t s = 0; s < species_count; ++s) {
            for (std::size_t p = 0; p < plane; ++p) {
                const float f = in.f32();
                if (!std::isfinite(f)) throw FormatError(FormatErrorKind::NonFinite, "payload contains NaN or Inf");
                if (f < 0.0f) throw FormatError(FormatErrorKind::BadPayloadValue, "negative mixing ratio");
                values[(s * levels + level) * plane + p] = f;
            }
        }
    }
    if (in.remaining() != 0) {
        throw FormatError(FormatErrorKind::TrailingBytes, std::to_string(in.remaining()) + " bytes after payload");
    }
    try {
        return HydrometeorVolume(width, height, levels, std::move(species), std::move(values));
    } catch (const InvalidArgument& e) {
        throw FormatError(FormatErrorKind::BadChannelId, e.what());
    }
}

Bytes read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
    return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("error while writing '" + path.string() + "'");
}

MultiChannelImage read_raster_file(const std::filesystem::path& path, Units units) {
    return to_image(decode_raster(read_file_bytes(path)), units);
}

SegmentMap read_segment_map(const std::filesystem::path& path, ClearLabel clear) {
    return to_segment_map(decode_raster(read_file_bytes(path)), clear);
}

CloudMask read_cloud_mask(const std::filesystem::path& path) {
    return to_cloud_mask(decode_raster(read_file_bytes(path)));
}

HydrometeorVolume read_volume_file(const std::filesystem::path& path) {
    return decode_volume(read_file_bytes(path));
}

void write_raster_file(const MultiChannelImage& image, const std::filesystem::path& path) {
    write_file_bytes(path, encode_raster(to_raster_file(image)));
}

void write_raster_file(const SegmentMap& segments, const std::filesystem::path& path) {
    write_file_bytes(path, encode_raster(to_raster_file(segments)));
}

void write_raster_file(const CloudMask& mask, const std::filesystem::path& path) {
    write_file_bytes(path, encode_raster(to_raster_file(mask)));
}

void write_volume_file(const HydrometeorVolume& volume, const std::filesystem::path& path) {
    write_file_bytes(path, encode_volume(volume));
}

}  // namespace gms
