#include "gms/hydrometeor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "gms/error.hpp"

namespace gms {

namespace {

constexpr std::array<std::pair<Species, std::string_view>, 5> kSpeciesNames{{
    {Species::CloudWater, "cloud_water"},
    {Species::CloudIce, "cloud_ice"},
    {Species::Rain, "rain"},
    {Species::Snow, "snow"},
    {Species::Graupel, "graupel"},
}};

}  // namespace

std::string_view to_string(Species species) {
    for (const auto& [s, name] : kSpeciesNames) {
        if (s == species) return name;
    }
    return "unknown";
}

std::optional<Species> parse_species(std::string_view id) {
    for (const auto& [s, name] : kSpeciesNames) {
        if (name == id) return s;
    }
    return std::nullopt;
}

HydrometeorVolume::HydrometeorVolume(std::size_t width, std::size_t height, std::size_t levels,
                                     std::vector<Species> species, std::vector<double> values)
    : width_(width), height_(height), levels_(levels), species_(std::move(species)),
      values_(std::move(values)) {
    if (width_ == 0 || height_ == 0 || levels_ == 0) {
        throw InvalidArgument("HydrometeorVolume: width, height and levels must be positive");
    }
    if (species_.empty()) throw InvalidArgument("HydrometeorVolume: at least one species required");
    for (std::size_t i = 0; i < species_.size(); ++i) {
        if (std::find(species_.begin(), species_.begin() + static_cast<std::ptrdiff_t>(i), species_[i]) !=
            species_.begin() + static_cast<std::ptrdiff_t>(i)) {
            throw InvalidArgument("HydrometeorVolume: duplicate species");
        }
    }
    constexpr auto kMax = std::numeric_limits<std::size_t>::max();
    if (width_ > kMax / height_ || width_ * height_ > kMax / levels_ ||
        width_ * height_ * levels_ > kMax / species_.size() ||
        width_ * height_ * levels_ * species_.size() != values_.size()) {
        throw InvalidArgument("HydrometeorVolume: payload length does not match dimensions");
    }
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidArgument("HydrometeorVolume: mixing ratios must be finite and non-negative");
        }
    }
}

}  // namespace gms
