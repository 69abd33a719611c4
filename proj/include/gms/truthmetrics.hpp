#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gms/grid.hpp"
#include "gms/hydrometeor.hpp"

namespace gms {

inline constexpr double kTruthThreshold = 1e-6;  // kg/kg

/// Cloudy where the column maximum of the species-summed mixing ratio
/// exceeds `threshold`. Species are summed per level before the vertical max.
CloudMask derive_truth_mask(const HydrometeorVolume& volume, double threshold = kTruthThreshold);

struct ContingencyTable {
    std::uint64_t hits = 0;               // TP
    std::uint64_t misses = 0;             // FN
    std::uint64_t false_alarms = 0;       // FP
    std::uint64_t correct_negatives = 0;  // TN

    std::uint64_t total() const noexcept { return hits + misses + false_alarms + correct_negatives; }

    friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;
};

ContingencyTable contingency(const CloudMask& prediction, const CloudMask& truth);

/// Categorical scores. A metric whose denominator is zero is std::nullopt.
///
///   pod   = TP / (TP+FN)          undetected_error_rate = FN / (TP+FN)
///   far   = FP / (FP+TN)          (false alarms per not-observed event)
///   far_conventional = FP / (TP+FP)
///   bias  = (TP+FP) / (TP+FN)
///   ets   = (TP - R) / (TP+FN+FP - R),  R = (TP+FN)(TP+FP) / total
struct VerificationReport {
    ContingencyTable table;
    std::optional<double> pod;
    std::optional<double> far;
    std::optional<double> far_conventional;
    std::optional<double> undetected_error_rate;
    std::optional<double> bias;
    std::optional<double> ets;
};

VerificationReport verify(const ContingencyTable& table);

/// Flat JSON object; undefined metrics serialize as null.
std::string to_json(const VerificationReport& report);

}  // namespace gms
