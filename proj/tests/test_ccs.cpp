#include <doctest.h>

#include <cmath>
#include <random>

#include "gms/baseline_ccs.hpp"
#include "oracles.hpp"

using namespace gms;

namespace {

// Concentric scene: value by Chebyshev distance from the center.
Raster2D rings(std::size_t n, std::size_t core, std::size_t skirt) {
    std::vector<double> v(n * n);
    const long c = static_cast<long>(n / 2);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t col = 0; col < n; ++col) {
            const auto d = static_cast<std::size_t>(
                std::max(std::labs(static_cast<long>(r) - c), std::labs(static_cast<long>(col) - c)));
            v[r * n + col] = d <= core ? 210.0 : d <= skirt ? 250.0 : 290.0;
        }
    }
    return Raster2D(n, n, v);
}

}  // namespace

TEST_SUITE("baseline_ccs") {
    TEST_CASE("config validation") {
        CHECK_NOTHROW(CcsConfig{}.validate());
        CHECK_THROWS_AS((CcsConfig{{220, 220, 253}, 253, 50}.validate()), InvalidArgument);
        CHECK_THROWS_AS((CcsConfig{{220, 235, 250}, 253, 50}.validate()), InvalidArgument);
        CHECK_THROWS_AS((CcsConfig{{253}, 253, 0}.validate()), InvalidArgument);
        CHECK_THROWS_AS((CcsConfig{{}, 253, 5}.validate()), InvalidArgument);
    }

    TEST_CASE("cold core inside a skirt is one patch covering every pixel <= 253 K") {
        const auto bt = rings(31, 3, 9);
        const auto seg = ccs_segment(bt);
        CHECK(seg.region_count() == 1);
        for (std::size_t p = 0; p < bt.size(); ++p) CHECK((seg[p] == 1) == (bt[p] <= 253.0));
    }

    TEST_CASE("warm cloud is invisible") {
        std::vector<double> v(40 * 40, 290.0);
        for (std::size_t r = 10; r < 30; ++r)
            for (std::size_t c = 10; c < 30; ++c) v[r * 40 + c] = 265.0;
        const auto seg = ccs_segment(Raster2D(40, 40, v));
        CHECK(seg.region_count() == 0);
        CHECK(ccs_cloud_mask(seg).count() == 0);
    }

    TEST_CASE("two seeds meet along a 240 K bridge") {
        const std::size_t w = 40, h = 15;
        std::vector<double> v(w * h, 290.0);
        for (std::size_t r = 2; r < 13; ++r) {
            for (std::size_t c = 2; c < 13; ++c) v[r * w + c] = 210.0;
            for (std::size_t c = 27; c < 38; ++c) v[r * w + c] = 210.0;
        }
        for (std::size_t r = 6; r < 9; ++r)
            for (std::size_t c = 13; c < 27; ++c) v[r * w + c] = 240.0;
        const auto seg = ccs_segment(Raster2D(w, h, v), CcsConfig{{220, 235, 253}, 253, 10});
        CHECK(seg.region_count() == 2);
        std::size_t left = 0, right = 0;
        for (std::size_t r = 6; r < 9; ++r) {
            for (std::size_t c = 13; c < 27; ++c) {
                CHECK(seg[r * w + c] != 0);
                left += seg[r * w + c] == seg[7 * w + 5];
                right += seg[r * w + c] == seg[7 * w + 30];
            }
        }
        CHECK(left + right == 42);
        CHECK(left == right);  // equal-BT frontier advances from both ends in step
        CHECK(oracle::labels_connected(w, h, seg.labels()));
        CHECK(seg[7 * w + 5] != seg[7 * w + 30]);
    }

    TEST_CASE("property: patches are seeded, capped, connected, and cover seeded cold components") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t w = 4 + rng() % 24, h = 4 + rng() % 24;
            const auto bt = oracle::random_raster(rng, w, h, 200, 300);
            const CcsConfig cfg{{220, 235, 253}, 253, 1 + rng() % 12};
            const auto seg = ccs_segment(bt, cfg);

            std::vector<std::uint8_t> capped(bt.size());
            for (std::size_t p = 0; p < bt.size(); ++p) capped[p] = bt[p] <= 253.0;
            const auto comp = oracle::components(w, h, capped);
            std::map<std::size_t, std::size_t> area;
            std::set<std::size_t> seeded;
            for (std::size_t p = 0; p < bt.size(); ++p) {
                if (!comp[p]) continue;
                ++area[comp[p]];
                if (bt[p] <= 220.0) seeded.insert(comp[p]);
            }
            for (std::size_t p = 0; p < bt.size(); ++p) {
                const bool expect = comp[p] && seeded.count(comp[p]) && area[comp[p]] >= cfg.min_area;
                CHECK((seg[p] != 0) == expect);
            }
            CHECK(oracle::labels_connected(w, h, seg.labels()));
            CHECK(ccs_segment(bt, cfg) == seg);
        }
    }

    TEST_CASE("cloud mask is the patch support") {
        CHECK(ccs_cloud_mask(SegmentMap(3, 1, {0, 0, 0}, ClearLabel::Allowed)).count() == 0);
        const auto m = ccs_cloud_mask(SegmentMap(3, 1, {0, 1, 1}, ClearLabel::Allowed));
        CHECK(std::vector<std::uint8_t>(m.flags().begin(), m.flags().end()) == std::vector<std::uint8_t>{0, 1, 1});
    }
}
