#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "gms/raster_io.hpp"
#include "oracles.hpp"

using namespace gms;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "gms_test_grid";
    std::filesystem::create_directories(dir);
    return dir / name;
}

Bytes header(const char* magic, std::uint8_t version, std::uint8_t dtype, std::uint32_t w, std::uint32_t h,
             std::uint32_t channels) {
    Bytes b(magic, magic + 4);
    b.push_back(version);
    b.push_back(dtype);
    b.push_back(0);
    b.push_back(0);
    for (std::uint32_t v : {w, h, channels}) {
        for (int s = 0; s < 32; s += 8) b.push_back(static_cast<std::uint8_t>(v >> s));
    }
    return b;
}

void append_id(Bytes& b, const std::string& id) {
    b.insert(b.end(), id.begin(), id.end());
    b.insert(b.end(), 16 - id.size(), 0);
}

void append_f32(Bytes& b, float f) {
    const auto u = std::bit_cast<std::uint32_t>(f);
    for (int s = 0; s < 32; s += 8) b.push_back(static_cast<std::uint8_t>(u >> s));
}

FormatErrorKind decode_error_kind(const Bytes& b) {
    try {
        decode_raster(b);
    } catch (const FormatError& e) {
        return e.kind();
    }
    FAIL("decode unexpectedly succeeded");
    return FormatErrorKind::BadHeader;
}

}  // namespace

TEST_SUITE("grid types") {
    TEST_CASE("Raster2D rejects bad shapes and non-finite values") {
        CHECK_THROWS_AS(Raster2D(0, 1, {}), InvalidArgument);
        CHECK_THROWS_AS(Raster2D(2, 2, {1, 2, 3}), InvalidArgument);
        CHECK_THROWS_AS(Raster2D(1, 1, {std::numeric_limits<double>::quiet_NaN()}), InvalidArgument);
        CHECK_THROWS_AS(Raster2D(1, 1, {std::numeric_limits<double>::infinity()}), InvalidArgument);
        const Raster2D r(3, 2, {1, 2, 3, 4, 5, 6});
        CHECK(r.at(1, 0) == 4);
    }

    TEST_CASE("MultiChannelImage invariants") {
        const auto a = Raster2D::filled(2, 2, 1.0);
        CHECK_THROWS_AS(MultiChannelImage({}), InvalidArgument);
        CHECK_THROWS_AS(MultiChannelImage({{"a", a}, {"a", a}}), InvalidArgument);
        CHECK_THROWS_AS(MultiChannelImage({{"a", a}, {"b", Raster2D::filled(3, 2, 1.0)}}), InvalidArgument);
        CHECK_THROWS_AS(MultiChannelImage({{"seventeen_chars__", a}}), InvalidArgument);
        CHECK_THROWS_AS(MultiChannelImage({{"has space", a}}), InvalidArgument);
        const MultiChannelImage img({{"a", a}, {"b", a}});
        CHECK(img.select({"b"}).channels().front().id == "b");
        CHECK_THROWS_AS(img.select({"c"}), InvalidArgument);
    }

    TEST_CASE("MarkerMap requires consecutive, connected labels") {
        CHECK_NOTHROW(MarkerMap(3, 1, {1, 0, 2}));
        CHECK_THROWS_AS(MarkerMap(3, 1, {1, 0, 3}), InvalidArgument);   // gap
        CHECK_THROWS_AS(MarkerMap(3, 1, {1, 0, 1}), InvalidArgument);   // split label
        CHECK_NOTHROW(MarkerMap(2, 2, {1, 0, 0, 1}));                   // diagonal is connected
        CHECK(MarkerMap(2, 2, {0, 0, 0, 0}).count() == 0);
    }

    TEST_CASE("SegmentMap label set") {
        CHECK_NOTHROW(SegmentMap(2, 1, {1, 2}));
        CHECK_THROWS_AS(SegmentMap(2, 1, {0, 1}), InvalidArgument);
        CHECK_NOTHROW(SegmentMap(2, 1, {0, 1}, ClearLabel::Allowed));
        CHECK_THROWS_AS(SegmentMap(2, 1, {1, 3}), InvalidArgument);
        CHECK(SegmentMap(2, 1, {0, 0}, ClearLabel::Allowed).region_count() == 0);
    }

    TEST_CASE("CloudMask flags are boolean") {
        CHECK_THROWS_AS(CloudMask(1, 1, {2}), InvalidArgument);
        CHECK(CloudMask(2, 1, {1, 0}).count() == 1);
    }

    TEST_CASE("label_components matches union-find oracle") {
        std::mt19937_64 rng(7);
        std::bernoulli_distribution coin(0.45);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t w = 1 + rng() % 16;
            const std::size_t h = 1 + rng() % 16;
            std::vector<std::uint8_t> mask(w * h);
            for (auto& m : mask) m = coin(rng);
            const auto got = label_components(w, h, mask);
            const auto ref = oracle::components(w, h, mask);
            CHECK(got.count == oracle::count_components(w, h, mask));
            // Same partition, and labels increase with first-pixel order.
            std::map<std::size_t, std::uint32_t> seen;
            std::uint32_t last = 0;
            for (std::size_t p = 0; p < mask.size(); ++p) {
                if (!mask[p]) {
                    CHECK(got.labels[p] == 0);
                    continue;
                }
                auto [it, inserted] = seen.emplace(ref[p], got.labels[p]);
                if (inserted) {
                    CHECK(got.labels[p] == last + 1);
                    last = got.labels[p];
                } else {
                    CHECK(it->second == got.labels[p]);
                }
            }
        }
    }
}

TEST_SUITE("GMS1 codec") {
    TEST_CASE("decodes a single 2x2 f32 channel") {
        Bytes b = header("GMS1", 1, 1, 2, 2, 1);
        append_id(b, "ir_window");
        for (float v : {280.f, 281.f, 282.f, 283.f}) append_f32(b, v);
        const auto img = to_image(decode_raster(b));
        REQUIRE(img.channel_count() == 1);
        CHECK(img.channels()[0].id == "ir_window");
        CHECK(img.width() == 2);
        CHECK(img.height() == 2);
        const auto v = img.channels()[0].raster.values();
        CHECK(std::vector<double>(v.begin(), v.end()) == std::vector<double>{280, 281, 282, 283});
        CHECK(encode_raster(decode_raster(b)) == b);
    }

    TEST_CASE("mask and segment payload bytes") {
        const Bytes mask = encode_raster(to_raster_file(CloudMask(1, 1, {1})));
        REQUIRE(mask.size() == 20 + 16 + 1);
        CHECK(mask[5] == 2);
        CHECK(mask.back() == 0x01);

        const Bytes seg = encode_raster(to_raster_file(SegmentMap(2, 1, {1, 2})));
        REQUIRE(seg.size() == 20 + 16 + 8);
        CHECK(seg[5] == 3);
        CHECK(Bytes(seg.end() - 8, seg.end()) == Bytes{1, 0, 0, 0, 2, 0, 0, 0});
    }

    TEST_CASE("empty channel list is rejected") {
        RasterFile f;
        f.width = 1;
        f.height = 1;
        f.payload = std::vector<float>{};
        CHECK_THROWS_AS(encode_raster(f), InvalidArgument);
    }

    TEST_CASE("each malformation reports its own error kind") {
        Bytes good = header("GMS1", 1, 1, 1, 1, 1);
        append_id(good, "a");
        append_f32(good, 1.0f);
        REQUIRE_NOTHROW(decode_raster(good));

        Bytes b = good;
        b[0] = 'X';
        CHECK(decode_error_kind(b) == FormatErrorKind::BadMagic);

        b = good;
        b[4] = 2;
        CHECK(decode_error_kind(b) == FormatErrorKind::BadVersion);

        b = good;
        b[5] = 9;
        CHECK(decode_error_kind(b) == FormatErrorKind::BadDtype);

        b = good;
        b[6] = 1;
        CHECK(decode_error_kind(b) == FormatErrorKind::BadHeader);

        b = good;
        b.pop_back();
        CHECK(decode_error_kind(b) == FormatErrorKind::Truncated);

        b = good;
        b.push_back(0);
        CHECK(decode_error_kind(b) == FormatErrorKind::TrailingBytes);

        b = good;
        b.resize(b.size() - 4);
        append_f32(b, std::numeric_limits<float>::quiet_NaN());
        CHECK(decode_error_kind(b) == FormatErrorKind::NonFinite);

        b = header("GMS1", 1, 1, 0, 1, 1);
        CHECK(decode_error_kind(b) == FormatErrorKind::BadDimensions);

        b = header("GMS1", 1, 3, 0xffffffffu, 0xffffffffu, 0xffffffffu);
        CHECK(decode_error_kind(b) == FormatErrorKind::DimensionOverflow);

        b = header("GMS1", 1, 1, 1, 1, 1);
        append_id(b, "a");
        b[20 + 3] = 'z';  // non-zero byte after the terminator
        append_f32(b, 1.0f);
        CHECK(decode_error_kind(b) == FormatErrorKind::BadChannelId);

        CHECK(decode_error_kind(Bytes{'G', 'M'}) == FormatErrorKind::Truncated);
    }

    TEST_CASE("typed conversion errors") {
        const auto mask_file = to_raster_file(CloudMask(1, 1, {1}));
        CHECK_THROWS_AS(to_image(mask_file), FormatError);
        CHECK_THROWS_AS(to_segment_map(mask_file, ClearLabel::Allowed), FormatError);
        RasterFile bad_mask = mask_file;
        bad_mask.payload = std::vector<std::uint8_t>{7};
        CHECK_THROWS_AS(to_cloud_mask(bad_mask), FormatError);
        RasterFile zero_seg = to_raster_file(SegmentMap(1, 1, {0}, ClearLabel::Allowed));
        CHECK_NOTHROW(to_segment_map(zero_seg, ClearLabel::Allowed));
        CHECK_THROWS_AS(to_segment_map(zero_seg, ClearLabel::Forbidden), FormatError);
    }

    TEST_CASE("property: byte round trip for all dtypes") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 60; ++trial) {
            RasterFile f;
            f.width = static_cast<std::uint32_t>(1 + rng() % 9);
            f.height = static_cast<std::uint32_t>(1 + rng() % 9);
            const std::size_t channels = 1 + rng() % 3;
            for (std::size_t c = 0; c < channels; ++c) f.channel_ids.push_back("ch" + std::to_string(c));
            const std::size_t n = f.width * f.height * channels;
            switch (trial % 3) {
                case 0: {
                    std::vector<float> v(n);
                    for (auto& x : v) x = std::bit_cast<float>(static_cast<std::uint32_t>(rng()) & 0xbf7fffffu);
                    f.payload = v;
                    break;
                }
                case 1: {
                    std::vector<std::uint8_t> v(n);
                    for (auto& x : v) x = static_cast<std::uint8_t>(rng());
                    f.payload = v;
                    break;
                }
                default: {
                    std::vector<std::uint32_t> v(n);
                    for (auto& x : v) x = static_cast<std::uint32_t>(rng());
                    f.payload = v;
                }
            }
            const Bytes bytes = encode_raster(f);
            const RasterFile back = decode_raster(bytes);
            CHECK(back == f);
            CHECK(encode_raster(back) == bytes);
        }
    }

    TEST_CASE("files round trip through disk") {
        const MultiChannelImage img({{"ir_window", Raster2D(2, 1, {250.5, 260.25})},
                                     {"water_vapor", Raster2D(2, 1, {230.0, 231.0})}});
        const auto path = temp_path("image.gms");
        write_raster_file(img, path);
        const auto bytes = read_file_bytes(path);
        CHECK(read_raster_file(path).channels()[1].raster == img.channels()[1].raster);
        write_raster_file(read_raster_file(path), path);
        CHECK(read_file_bytes(path) == bytes);

        const SegmentMap seg(2, 2, {1, 1, 2, 3});
        write_raster_file(seg, temp_path("seg.gms"));
        CHECK(read_segment_map(temp_path("seg.gms"), ClearLabel::Forbidden) == seg);

        const CloudMask mask(2, 2, {0, 1, 1, 0});
        write_raster_file(mask, temp_path("mask.gms"));
        CHECK(read_cloud_mask(temp_path("mask.gms")) == mask);

        CHECK_THROWS_AS(read_raster_file(temp_path("missing.gms")), IoError);
        CHECK_THROWS_AS(write_raster_file(mask, temp_path("no_such_dir") / "x.gms"), IoError);
    }
}

TEST_SUITE("GMSV codec") {
    TEST_CASE("layout: level is the slowest axis") {
        // 1x1, 2 levels, 2 species: values [species][level] = {{1,2},{3,4}}
        const HydrometeorVolume vol(1, 1, 2, {Species::CloudWater, Species::Rain}, {1, 2, 3, 4});
        const Bytes b = encode_volume(vol);
        REQUIRE(b.size() == 24 + 32 + 16);
        CHECK(std::string(b.begin(), b.begin() + 4) == "GMSV");
        CHECK(b[16] == 2);  // level_count
        CHECK(b[20] == 2);  // species_count
        CHECK(std::string(reinterpret_cast<const char*>(&b[24])) == "cloud_water");
        CHECK(std::string(reinterpret_cast<const char*>(&b[40])) == "rain");
        std::vector<float> payload;
        for (std::size_t i = 56; i < b.size(); i += 4) {
            std::uint32_t u = b[i] | (b[i + 1] << 8) | (b[i + 2] << 16) | (static_cast<std::uint32_t>(b[i + 3]) << 24);
            payload.push_back(std::bit_cast<float>(u));
        }
        CHECK(payload == std::vector<float>{1, 3, 2, 4});
        CHECK(decode_volume(b) == vol);
    }

    TEST_CASE("property: byte round trip") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<float> q(0.0f, 1e-3f);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t w = 1 + rng() % 6, h = 1 + rng() % 6, levels = 1 + rng() % 5;
            std::vector<Species> sp{Species::CloudWater, Species::CloudIce, Species::Rain, Species::Snow,
                                    Species::Graupel};
            sp.resize(1 + rng() % 5);
            std::vector<double> v(w * h * levels * sp.size());
            for (auto& x : v) x = q(rng);
            const HydrometeorVolume vol(w, h, levels, sp, v);
            const Bytes bytes = encode_volume(vol);
            CHECK(decode_volume(bytes) == vol);
            CHECK(encode_volume(decode_volume(bytes)) == bytes);
        }
    }

    TEST_CASE("volume errors") {
        const Bytes good = encode_volume(HydrometeorVolume(1, 1, 1, {Species::Snow}, {1e-6}));
        Bytes b = good;
        b[3] = '1';
        CHECK_THROWS_AS(decode_volume(b), FormatError);
        b = good;
        b[24] = 'x';  // unknown species id
        CHECK_THROWS_AS(decode_volume(b), FormatError);
        b = good;
        b.back() = 0x80 | b.back();  // negative mixing ratio
        CHECK_THROWS_AS(decode_volume(b), FormatError);
        CHECK_THROWS_AS(HydrometeorVolume(1, 1, 1, {Species::Snow}, {-1.0}), InvalidArgument);
        CHECK_THROWS_AS(HydrometeorVolume(1, 1, 1, {Species::Snow, Species::Snow}, {0, 0}), InvalidArgument);
    }
}
