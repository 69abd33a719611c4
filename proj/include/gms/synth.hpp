#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gms/grid.hpp"
#include "gms/hydrometeor.hpp"

namespace gms {

enum class CloudProfile { Gaussian };
enum class SceneChannel { IrWindow, WaterVapor };

std::string_view to_string(SceneChannel channel);
std::string_view to_string(CloudProfile profile);

struct CloudSpec {
    double center_row = 0.0;
    double center_col = 0.0;
    double radius_px = 1.0;
    double min_bt = 220.0;                   // kelvin at the cloud center
    CloudProfile profile = CloudProfile::Gaussian;
    double hydrometeor_peak = 1e-4;          // kg/kg at the cloud center

    friend bool operator==(const CloudSpec&, const CloudSpec&) = default;
};

struct SceneSpec {
    std::size_t width = 128;
    std::size_t height = 128;
    double background_bt = 290.0;
    std::vector<CloudSpec> clouds;
    std::vector<SceneChannel> channels{SceneChannel::IrWindow};
    double noise_sigma = 0.5;
    std::uint64_t rng_seed = 0;

    void validate() const;

    friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

struct Scene {
    MultiChannelImage image;
    HydrometeorVolume volume;
};

inline constexpr std::size_t kSceneLevels = 5;
inline constexpr double kWaterVaporOffset = 10.0;  // kelvin
inline constexpr double kWaterVaporDamping = 0.6;
inline constexpr double kTruthDepression = 2.0;    // kelvin

/// Noiseless cloud depression (kelvin) at every pixel: the maximum over
/// clouds of A * exp(-r^2 / (2 R^2)) for r <= R and 0 beyond, where
/// A = background_bt - min_bt and R = radius_px. Clouds therefore have a
/// sharp edge with Gaussian shading inside.
std::vector<double> cloud_depression(const SceneSpec& spec);

/// Brightness temperature channels plus a 5-level hydrometeor volume whose
/// truth mask is exactly {depression > 2 K}. Output values are rounded to
/// f32 so in-memory scenes equal what the file codecs store.
Scene generate_scene(const SceneSpec& spec);

/// Deterministic standard normal deviate for (seed, stream, index).
double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

std::vector<std::string> preset_names();
std::optional<SceneSpec> preset_scene(std::string_view name, std::uint64_t seed);

/// `key = value` text form. Clouds are `cloud.<i>.<field>` groups with
/// consecutive indices from 0.
std::string format_scene_spec(const SceneSpec& spec);
SceneSpec parse_scene_spec(std::string_view text);

}  // namespace gms
