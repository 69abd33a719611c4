#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gms {

enum class Species { CloudWater, CloudIce, Rain, Snow, Graupel };

std::string_view to_string(Species species);
std::optional<Species> parse_species(std::string_view id);

/// Hydrometeor mixing ratios (kg/kg), laid out [species][level][row][col].
class HydrometeorVolume {
public:
    HydrometeorVolume(std::size_t width, std::size_t height, std::size_t levels,
                      std::vector<Species> species, std::vector<double> values);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t levels() const noexcept { return levels_; }
    const std::vector<Species>& species() const noexcept { return species_; }
    std::span<const double> values() const noexcept { return values_; }

    std::size_t plane_size() const noexcept { return width_ * height_; }
    double at(std::size_t species_index, std::size_t level, std::size_t pixel) const {
        return values_[(species_index * levels_ + level) * plane_size() + pixel];
    }

    friend bool operator==(const HydrometeorVolume&, const HydrometeorVolume&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::size_t levels_;
    std::vector<Species> species_;
    std::vector<double> values_;
};

}  // namespace gms
