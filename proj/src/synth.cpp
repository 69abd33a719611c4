#include "gms/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "gms/truthmetrics.hpp"

namespace gms {

namespace {

constexpr double kColdCloudLimit = 253.0;  // kelvin; colder clouds carry ice
// Plume values are pushed this far from the truth threshold so the mask
// survives f32 storage unchanged.
constexpr double kThresholdMargin = 0.01;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
}

double round_f32(double v) {
    return static_cast<double>(static_cast<float>(v));
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string_view to_string(SceneChannel channel) {
    return channel == SceneChannel::IrWindow ? "ir_window" : "water_vapor";
}

std::string_view to_string(CloudProfile) {
    return "gaussian";
}

double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const std::uint64_t key = splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
    const double u1 = unit_open(splitmix64(key ^ (2 * index)));
    const double u2 = unit_open(splitmix64(key ^ (2 * index + 1)));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void SceneSpec::validate() const {
    if (width == 0 || height == 0) throw InvalidArgument("SceneSpec: width and height must be positive");
    if (!std::isfinite(background_bt) || background_bt <= 0.0) {
        throw InvalidArgument("SceneSpec: background_bt must be a positive temperature");
    }
    if (!std::isfinite(noise_sigma) || noise_sigma < 0.0) {
        throw InvalidArgument("SceneSpec: noise_sigma must be non-negative");
    }
    if (channels.empty()) throw InvalidArgument("SceneSpec: at least one channel required");
    for (std::size_t i = 0; i < channels.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (channels[i] == channels[j]) throw InvalidArgument("SceneSpec: duplicate channel");
        }
    }
    for (std::size_t i = 0; i < clouds.size(); ++i) {
        const auto& c = clouds[i];
        const std::string which = "SceneSpec: cloud " + std::to_string(i);
        if (!(c.center_row >= 0.0 && c.center_row <= static_cast<double>(height - 1) && c.center_col >= 0.0 &&
              c.center_col <= static_cast<double>(width - 1))) {
            throw InvalidArgument(which + " center lies outside the grid");
        }
        if (!std::isfinite(c.radius_px) || c.radius_px <= 0.0) {
            throw InvalidArgument(which + " radius_px must be positive");
        }
        if (!std::isfinite(c.min_bt) || !(c.min_bt < background_bt - kTruthDepression)) {
            throw InvalidArgument(which + " min_bt must be more than 2 K below background_bt");
        }
        if (!std::isfinite(c.hydrometeor_peak) || !(c.hydrometeor_peak > kTruthThreshold)) {
            throw InvalidArgument(which + " hydrometeor_peak must exceed the 1e-6 kg/kg truth threshold");
        }
    }
}

namespace {

// Depression of one cloud at a pixel, and the index of the dominant cloud.
struct Dominant {
    double depression = 0.0;
    std::size_t cloud = 0;
    bool any = false;
};

std::vector<Dominant> dominant_clouds(const SceneSpec& spec) {
    std::vector<Dominant> out(spec.width * spec.height);
    for (std::size_t ci = 0; ci < spec.clouds.size(); ++ci) {
        const auto& c = spec.clouds[ci];
        const double amplitude = spec.background_bt - c.min_bt;
        const double r2max = c.radius_px * c.radius_px;
        const auto row0 = static_cast<std::size_t>(std::max(0.0, std::floor(c.center_row - c.radius_px)));
        const auto row1 = static_cast<std::size_t>(
            std::min(static_cast<double>(spec.height - 1), std::ceil(c.center_row + c.radius_px)));
        const auto col0 = static_cast<std::size_t>(std::max(0.0, std::floor(c.center_col - c.radius_px)));
        const auto col1 = static_cast<std::size_t>(
            std::min(static_cast<double>(spec.width - 1), std::ceil(c.center_col + c.radius_px)));
        for (std::size_t r = row0; r <= row1; ++r) {
            for (std::size_t col = col0; col <= col1; ++col) {
                const double dr = static_cast<double>(r) - c.center_row;
                const double dc = static_cast<double>(col) - c.center_col;
                const double d2 = dr * dr + dc * dc;
                if (d2 > r2max) continue;
                const double depression = amplitude * std::exp(-d2 / (2.0 * r2max));
                auto& slot = out[r * spec.width + col];
                if (!slot.any || depression > slot.depression) slot = {depression, ci, true};
            }
        }
    }
    return out;
}

std::vector<double> box_mean3(const std::vector<double>& v, std::size_t w, std::size_t h) {
    std::vector<double> out(v.size());
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            double sum = 0.0;
            int n = 0;
            for (std::size_t rr = r > 0 ? r - 1 : 0; rr <= std::min(h - 1, r + 1); ++rr) {
                for (std::size_t cc = c > 0 ? c - 1 : 0; cc <= std::min(w - 1, c + 1); ++cc) {
                    sum += v[rr * w + cc];
                    ++n;
                }
            }
            out[r * w + c] = sum / n;
        }
    }
    return out;
}

}  // namespace

std::vector<double> cloud_depression(const SceneSpec& spec) {
    spec.validate();
    const auto dom = dominant_clouds(spec);
    std::vector<double> out(dom.size());
    for (std::size_t p = 0; p < dom.size(); ++p) out[p] = dom[p].depression;
    return out;
}

Scene generate_scene(const SceneSpec& spec) {
    spec.validate();
    const std::size_t w = spec.width;
    const std::size_t h = spec.height;
    const std::size_t plane = w * h;
    const auto dom = dominant_clouds(spec);
    std::vector<double> depression(plane);
    for (std::size_t p = 0; p < plane; ++p) depression[p] = dom[p].depression;

    std::vector<Channel> channels;
    for (const auto ch : spec.channels) {
        std::vector<double> values(plane);
        std::uint64_t stream = 0;
        if (ch == SceneChannel::IrWindow) {
            for (std::size_t p = 0; p < plane; ++p) values[p] = spec.background_bt - depression[p];
        } else {
            stream = 1;
            const auto smooth = box_mean3(depression, w, h);
            for (std::size_t p = 0; p < plane; ++p) {
                values[p] = spec.background_bt + kWaterVaporOffset - kWaterVaporDamping * smooth[p];
            }
        }
        if (spec.noise_sigma > 0.0) {
            for (std::size_t p = 0; p < plane; ++p) {
                values[p] += spec.noise_sigma * counter_normal(spec.rng_seed, stream, p);
            }
        }
        for (auto& v : values) v = round_f32(v);
        channels.push_back({std::string(to_string(ch)), Raster2D(w, h, std::move(values), Units::Kelvin)});
    }

    // Each column carries the plume of its dominant cloud in a single species,
    // with a triangular vertical weight equal to 1 at the peak level, so the
    // species-summed column maximum is exactly the horizontal plume value.
    const std::vector<Species> species{Species::CloudWater, Species::CloudIce, Species::Rain, Species::Snow,
                                       Species::Graupel};
    std::vector<double> q(species.size() * kSceneLevels * plane, 0.0);
    for (std::size_t p = 0; p < plane; ++p) {
        if (!dom[p].any || dom[p].depression <= 0.0) continue;
        const auto& c = spec.clouds[dom[p].cloud];
        const double amplitude = spec.background_bt - c.min_bt;
        const double exponent = std::log(c.hydrometeor_peak / kTruthThreshold) / std::log(amplitude / kTruthDepression);
        double value = kTruthThreshold * std::pow(dom[p].depression / kTruthDepression, exponent);
        if (dom[p].depression > kTruthDepression) {
            value = std::max(value, kTruthThreshold * (1.0 + kThresholdMargin));
        } else {
            value = std::min(value, kTruthThreshold * (1.0 - kThresholdMargin));
        }
        const bool cold = c.min_bt < kColdCloudLimit;
        const std::size_t s = cold ? 1 : 0;  // cloud_ice : cloud_water
        const double peak_level = cold ? 3.0 : 1.0;
        for (std::size_t level = 0; level < kSceneLevels; ++level) {
            const double weight = std::max(0.0, 1.0 - std::abs(static_cast<double>(level) - peak_level) / 2.0);
            q[(s * kSceneLevels + level) * plane + p] = round_f32(value * weight);
        }
    }
    return {MultiChannelImage(std::move(channels)), HydrometeorVolume(w, h, kSceneLevels, species, std::move(q))};
}

std::vector<std::string> preset_names() {
    return {"harvey_like", "wyoming_like", "warm_stratiform", "mixed"};
}

std::optional<SceneSpec> preset_scene(std::string_view name, std::uint64_t seed) {
    SceneSpec spec;
    spec.rng_seed = seed;
    spec.channels = {SceneChannel::IrWindow, SceneChannel::WaterVapor};
    auto cloud = [](double row, double col, double radius, double min_bt, double peak) {
        return CloudSpec{row, col, radius, min_bt, CloudProfile::Gaussian, peak};
    };
    if (name == "warm_stratiform") {
        spec.clouds = {
            cloud(36, 40, 20, 262, 4e-4),
            cloud(88, 92, 24, 266, 3e-4),
            cloud(28, 102, 14, 268, 2e-4),
            cloud(98, 30, 16, 259, 5e-4),
        };
    } else if (name == "wyoming_like") {
        spec.clouds = {
            cloud(30, 30, 9, 210, 6e-3),  cloud(40, 72, 11, 212, 5e-3), cloud(84, 50, 8, 215, 4e-3),
            cloud(92, 100, 12, 210, 6e-3), cloud(58, 108, 7, 220, 3e-3),
        };
    } else if (name == "harvey_like") {
        spec.width = 160;
        spec.height = 160;
        spec.clouds.push_back(cloud(80, 80, 28, 200, 8e-3));
        // Rain bands trailing the core along a spiral.
        for (int k = 0; k < 7; ++k) {
            const double theta = 0.9 * k;
            const double r = 30.0 + 5.5 * k;
            spec.clouds.push_back(cloud(80 + r * std::sin(theta), 80 + r * std::cos(theta), 12.0 - k,
                                        212.0 + 3.0 * k, 4e-3));
        }
        spec.clouds.push_back(cloud(18, 22, 11, 264, 4e-4));
        spec.clouds.push_back(cloud(140, 20, 12, 262, 4e-4));
        spec.clouds.push_back(cloud(20, 140, 10, 267, 3e-4));
    } else if (name == "mixed") {
        // One convective cell among warm clouds. Several strong cold edges
        // would lift the Otsu threshold above the warm edges.
        spec.clouds = {
            cloud(40, 40, 14, 205, 6e-3),  cloud(34, 98, 16, 262, 4e-4), cloud(96, 34, 18, 266, 3e-4),
            cloud(92, 96, 14, 260, 3e-4), cloud(66, 70, 9, 268, 2e-4),
        };
    } else {
        return std::nullopt;
    }
    return spec;
}

std::string format_scene_spec(const SceneSpec& spec) {
    std::ostringstream out;
    out << "width = " << spec.width << "\n";
    out << "height = " << spec.height << "\n";
    out << "background_bt = " << format_double(spec.background_bt) << "\n";
    out << "noise_sigma = " << format_double(spec.noise_sigma) << "\n";
    out << "rng_seed = " << spec.rng_seed << "\n";
    out << "channels = ";
    for (std::size_t i = 0; i < spec.channels.size(); ++i) out << (i ? "," : "") << to_string(spec.channels[i]);
    out << "\n";
    for (std::size_t i = 0; i < spec.clouds.size(); ++i) {
        const auto& c = spec.clouds[i];
        const std::string k = "cloud." + std::to_string(i) + ".";
        out << k << "center_row = " << format_double(c.center_row) << "\n";
        out << k << "center_col = " << format_double(c.center_col) << "\n";
        out << k << "radius_px = " << format_double(c.radius_px) << "\n";
        out << k << "min_bt = " << format_double(c.min_bt) << "\n";
        out << k << "profile = " << to_string(c.profile) << "\n";
        out << k << "hydrometeor_peak = " << format_double(c.hydrometeor_peak) << "\n";
    }
    return out.str();
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw InvalidArgument("scene spec: bad value for '" + std::string(key) + "': '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

SceneSpec parse_scene_spec(std::string_view text) {
    SceneSpec spec;
    spec.clouds.clear();
    std::map<std::size_t, CloudSpec> clouds;
    std::map<std::size_t, unsigned> cloud_fields;  // bit per required field
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidArgument("scene spec line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));

        if (key == "width") {
            spec.width = parse_number<std::size_t>(value, key);
        } else if (key == "height") {
            spec.height = parse_number<std::size_t>(value, key);
        } else if (key == "background_bt") {
            spec.background_bt = parse_number<double>(value, key);
        } else if (key == "noise_sigma") {
            spec.noise_sigma = parse_number<double>(value, key);
        } else if (key == "rng_seed") {
            spec.rng_seed = parse_number<std::uint64_t>(value, key);
        } else if (key == "channels") {
            spec.channels.clear();
            std::string_view rest = value;
            while (true) {
                const auto comma = rest.find(',');
                const auto id = trim(rest.substr(0, comma));
                if (id == "ir_window") {
                    spec.channels.push_back(SceneChannel::IrWindow);
                } else if (id == "water_vapor") {
                    spec.channels.push_back(SceneChannel::WaterVapor);
                } else {
                    throw InvalidArgument("scene spec: unknown channel '" + std::string(id) + "'");
                }
                if (comma == std::string_view::npos) break;
                rest = rest.substr(comma + 1);
            }
        } else if (key.starts_with("cloud.")) {
            const auto rest = key.substr(6);
            const auto dot = rest.find('.');
            if (dot == std::string_view::npos) {
                throw InvalidArgument("scene spec: malformed cloud key '" + std::string(key) + "'");
            }
            const auto index = parse_number<std::size_t>(rest.substr(0, dot), key);
            const auto field = rest.substr(dot + 1);
            auto& c = clouds[index];
            auto& seen = cloud_fields[index];
            if (field == "center_row") {
                c.center_row = parse_number<double>(value, key);
                seen |= 1u;
            } else if (field == "center_col") {
                c.center_col = parse_number<double>(value, key);
                seen |= 2u;
            } else if (field == "radius_px") {
                c.radius_px = parse_number<double>(value, key);
                seen |= 4u;
            } else if (field == "min_bt") {
                c.min_bt = parse_number<double>(value, key);
                seen |= 8u;
            } else if (field == "hydrometeor_peak") {
                c.hydrometeor_peak = parse_number<double>(value, key);
                seen |= 16u;
            } else if (field == "profile") {
                if (value != "gaussian") {
                    throw InvalidArgument("scene spec: unknown profile '" + std::string(value) + "'");
                }
                c.profile = CloudProfile::Gaussian;
            } else {
                throw InvalidArgument("scene spec: unknown cloud field '" + std::string(field) + "'");
            }
        } else {
            throw InvalidArgument("scene spec: unknown key '" + std::string(key) + "'");
        }
    }
    std::size_t expected = 0;
    for (auto& [index, c] : clouds) {
        if (index != expected++) throw InvalidArgument("scene spec: cloud indices must be consecutive from 0");
        if (cloud_fields[index] != 31u) {
            throw InvalidArgument("scene spec: cloud " + std::to_string(index) +
                                  " needs center_row, center_col, radius_px, min_bt and hydrometeor_peak");
        }
        spec.clouds.push_back(c);
    }
    spec.validate();
    return spec;
}

}  // namespace gms
