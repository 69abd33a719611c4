#include "gms/truthmetrics.hpp"

#include <algorithm>

#include <json.hpp>

namespace gms {

CloudMask derive_truth_mask(const HydrometeorVolume& volume, double threshold) {
    const std::size_t plane = volume.plane_size();
    const std::size_t species = volume.species().size();
    std::vector<std::uint8_t> flags(plane, 0);
    for (std::size_t p = 0; p < plane; ++p) {
        double column_max = 0.0;
        for (std::size_t level = 0; level < volume.levels(); ++level) {
            double total = 0.0;
            for (std::size_t s = 0; s < species; ++s) total += volume.at(s, level, p);
            column_max = std::max(column_max, total);
        }
        flags[p] = column_max > threshold ? 1 : 0;
    }
    return CloudMask(volume.width(), volume.height(), std::move(flags));
}

ContingencyTable contingency(const CloudMask& prediction, const CloudMask& truth) {
    if (prediction.width() != truth.width() || prediction.height() != truth.height()) {
        throw InvalidArgument("contingency: masks differ in size (" + std::to_string(prediction.width()) + "x" +
                              std::to_string(prediction.height()) + " vs " + std::to_string(truth.width()) + "x" +
                              std::to_string(truth.height()) + ")");
    }
    ContingencyTable t;
    for (std::size_t p = 0; p < prediction.size(); ++p) {
        const bool pred = prediction[p];
        const bool obs = truth[p];
        if (pred && obs) {
            ++t.hits;
        } else if (obs) {
            ++t.misses;
        } else if (pred) {
            ++t.false_alarms;
        } else {
            ++t.correct_negatives;
        }
    }
    return t;
}

namespace {

std::optional<double> ratio(double numerator, double denominator) {
    if (denominator == 0.0) return std::nullopt;
    return numerator / denominator;
}

}  // namespace

VerificationReport verify(const ContingencyTable& table) {
    if (table.total() == 0) throw InvalidArgument("verify: empty contingency table");
    const auto tp = static_cast<double>(table.hits);
    const auto fn = static_cast<double>(table.misses);
    const auto fp = static_cast<double>(table.false_alarms);
    const auto tn = static_cast<double>(table.correct_negatives);
    const double observed = tp + fn;
    const double not_observed = fp + tn;
    const double hits_random = observed * (tp + fp) / static_cast<double>(table.total());

    VerificationReport r;
    r.table = table;
    r.pod = ratio(tp, observed);
    r.undetected_error_rate = ratio(fn, observed);
    r.far = ratio(fp, not_observed);
    r.far_conventional = ratio(fp, tp + fp);
    r.bias = ratio(tp + fp, observed);
    r.ets = ratio(tp - hits_random, tp + fn + fp - hits_random);
    return r;
}

std::string to_json(const VerificationReport& report) {
    auto value = [](const std::optional<double>& v) -> nlohmann::ordered_json {
        return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    nlohmann::ordered_json j;
    j["pod"] = value(report.pod);
    j["far"] = value(report.far);
    j["far_conventional"] = value(report.far_conventional);
    j["undetected_error_rate"] = value(report.undetected_error_rate);
    j["bias"] = value(report.bias);
    j["ets"] = value(report.ets);
    j["hits"] = report.table.hits;
    j["misses"] = report.table.misses;
    j["false_alarms"] = report.table.false_alarms;
    j["correct_negatives"] = report.table.correct_negatives;
    return j.dump(2) + "\n";
}

}  // namespace gms
