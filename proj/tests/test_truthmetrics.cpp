#include <doctest.h>

#include <json.hpp>
#include <random>

#include "gms/truthmetrics.hpp"
#include "oracles.hpp"

using namespace gms;

namespace {

CloudMask mask_of(std::size_t w, std::size_t h, std::size_t cloudy_prefix) {
    std::vector<std::uint8_t> f(w * h, 0);
    std::fill(f.begin(), f.begin() + static_cast<long>(cloudy_prefix), 1);
    return CloudMask(w, h, f);
}

}  // namespace

TEST_SUITE("truthmetrics") {
    TEST_CASE("species are summed per level") {
        // 1 pixel, 1 level: 3e-7 + 9e-7 = 1.2e-6 > 1e-6.
        const HydrometeorVolume vol(1, 1, 1, {Species::CloudWater, Species::CloudIce}, {3e-7, 9e-7});
        CHECK(derive_truth_mask(vol)[0]);
    }

    TEST_CASE("sum then max, not max then sum") {
        // cloud_water peaks at level 0, cloud_ice at level 1; never co-located above 1e-6.
        const std::vector<double> v{6e-7, 0.0, 0.0, 6e-7};  // [species][level]
        const HydrometeorVolume vol(1, 1, 2, {Species::CloudWater, Species::CloudIce}, v);
        double sum_then_max = 0.0, max_then_sum = 0.0;
        for (std::size_t l = 0; l < 2; ++l) sum_then_max = std::max(sum_then_max, vol.at(0, l, 0) + vol.at(1, l, 0));
        for (std::size_t s = 0; s < 2; ++s) max_then_sum += std::max(vol.at(s, 0, 0), vol.at(s, 1, 0));
        REQUIRE(sum_then_max <= kTruthThreshold);
        REQUIRE(max_then_sum > kTruthThreshold);
        CHECK_FALSE(derive_truth_mask(vol)[0]);
    }

    TEST_CASE("all-zero volume is clear; threshold is strict") {
        CHECK(derive_truth_mask(HydrometeorVolume(3, 2, 4, {Species::Rain}, std::vector<double>(24, 0.0))).count() == 0);
        CHECK_FALSE(derive_truth_mask(HydrometeorVolume(1, 1, 1, {Species::Rain}, {1e-6}))[0]);
        CHECK(derive_truth_mask(HydrometeorVolume(1, 1, 1, {Species::Rain}, {1e-6}), 5e-7)[0]);
    }

    TEST_CASE("contingency examples") {
        const auto truth = mask_of(5, 4, 7);
        CHECK(contingency(truth, truth) == ContingencyTable{7, 0, 0, 13});
        CHECK(contingency(CloudMask::all(5, 4, false), truth) == ContingencyTable{0, 7, 0, 13});
        CHECK_THROWS_AS(contingency(truth, mask_of(4, 5, 7)), InvalidArgument);
    }

    TEST_CASE("property: contingency equals per-pixel tally") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t w = 1 + rng() % 20, h = 1 + rng() % 20;
            std::vector<std::uint8_t> a(w * h), b(w * h);
            for (auto& x : a) x = rng() % 2;
            for (auto& x : b) x = rng() % 2;
            const CloudMask pred(w, h, a), truth(w, h, b);
            const auto t = contingency(pred, truth);
            CHECK(t == oracle::tally(pred, truth));
            CHECK(t.total() == w * h);
        }
    }

    TEST_CASE("worked table") {
        const auto r = verify({40, 10, 5, 45});
        CHECK(*r.pod == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(*r.undetected_error_rate == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(*r.far == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(*r.far_conventional == doctest::Approx(5.0 / 45.0).epsilon(1e-12));
        CHECK(*r.bias == doctest::Approx(0.9).epsilon(1e-12));
        CHECK(*r.ets == doctest::Approx(17.5 / 32.5).epsilon(1e-12));
    }

    TEST_CASE("perfect and degenerate tables") {
        const auto perfect = verify({12, 0, 0, 30});
        CHECK(*perfect.pod == 1.0);
        CHECK(*perfect.undetected_error_rate == 0.0);
        CHECK(*perfect.far == 0.0);
        CHECK(*perfect.bias == 1.0);
        CHECK(*perfect.ets == 1.0);

        const ContingencyTable t{0, 8, 0, 12};
        const auto miss = verify(t);
        CHECK(*miss.pod == 0.0);
        CHECK(*miss.undetected_error_rate == 1.0);
        CHECK(*miss.far == 0.0);
        const double hr = 8.0 * 0.0 / 20.0;
        CHECK(*miss.ets == doctest::Approx(-hr / (8.0 - hr)));
        CHECK_FALSE(miss.far_conventional.has_value());

        CHECK_THROWS_AS(verify({}), InvalidArgument);
        const auto clear = verify({0, 0, 0, 9});
        CHECK_FALSE(clear.pod.has_value());
        CHECK_FALSE(clear.bias.has_value());
        CHECK_FALSE(clear.ets.has_value());
    }

    TEST_CASE("property: pod + ur == 1 and swap symmetry") {
        std::mt19937_64 rng(4);
        for (int trial = 0; trial < 500; ++trial) {
            const ContingencyTable t{rng() % 1000, 1 + rng() % 1000, rng() % 1000, rng() % 1000};
            const auto r = verify(t);
            CHECK(*r.pod + *r.undetected_error_rate == 1.0);
            // Swapping prediction and truth exchanges misses and false alarms; ETS is symmetric.
            const auto s = verify({t.hits, t.false_alarms, t.misses, t.correct_negatives});
            if (r.ets && s.ets) CHECK(*r.ets == doctest::Approx(*s.ets).epsilon(1e-12));
            if (s.bias && r.bias) CHECK(*r.bias * *s.bias == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    TEST_CASE("JSON report keeps key order and writes null for undefined scores") {
        const auto j = nlohmann::ordered_json::parse(to_json(verify({0, 0, 2, 3})));
        std::vector<std::string> keys;
        for (const auto& [k, v] : j.items()) keys.push_back(k);
        CHECK(keys == std::vector<std::string>{"pod", "far", "far_conventional", "undetected_error_rate", "bias",
                                               "ets", "hits", "misses", "false_alarms", "correct_negatives"});
        CHECK(j["pod"].is_null());
        CHECK(j["far"].get<double>() == doctest::Approx(0.4));
        CHECK(j["correct_negatives"].get<int>() == 3);
    }
}
