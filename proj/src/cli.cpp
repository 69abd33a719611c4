#include "gms/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gms/baseline_ccs.hpp"
#include "gms/pipeline.hpp"
#include "gms/raster_io.hpp"
#include "gms/synth.hpp"
#include "gms/truthmetrics.hpp"

namespace gms::cli {

namespace {

// Bad input data (as opposed to bad flags): exit code 2.
class InputError : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct GradientArgs {
    std::size_t scales = 5;
    std::vector<std::string> channels;
    bool normalize = false;

    void add_to(CLI::App& app) {
        app.add_option("--scales", scales, "Number of structuring-element scales")
            ->check(CLI::Range(std::size_t{1}, std::size_t{64}))
            ->capture_default_str();
        app.add_option("--channels", channels, "Comma-separated channel ids (default: all)")->delimiter(',');
        app.add_flag("--normalize-channels", normalize, "Scale each channel gradient by its maximum before summing");
    }

    GradientConfig config() const { return {scales, normalize}; }
};

MultiChannelImage select_channels(const MultiChannelImage& image, const std::vector<std::string>& ids) {
    if (ids.empty()) return image;
    for (const auto& id : ids) {
        if (!image.has_channel(id)) throw UsageError("input has no channel '" + id + "'");
    }
    return image.select(ids);
}

struct Gradient {
    std::string input;
    std::string output;
    GradientArgs gradient;

    CLI::App* add_to(CLI::App& app) {
        auto* sub = app.add_subcommand("gradient", "Write the multiscale multispectral gradient of a scene");
        sub->add_option("--input", input, "GMS1 scene")->required();
        sub->add_option("--output", output, "GMS1 gradient output")->required();
        gradient.add_to(*sub);
        return sub;
    }

    int run(std::ostream&) const {
        const auto image = select_channels(read_raster_file(input), gradient.channels);
        const auto field = multispectral_gradient(image, gradient.config());
        write_raster_file(MultiChannelImage({{"gradient", field.raster()}}), output);
        return kOk;
    }
};

struct Segment {
    std::string input;
    std::string segments_out;
    std::string mask_out;
    std::string stats_out;
    std::string bt_channel;
    GradientArgs gradient;
    std::size_t bins = kDefaultHistogramBins;
    std::size_t min_seed_area = kDefaultMinSeedArea;
    std::size_t min_area = 0;
    double clear_sky_cutoff = kDefaultClearSkyCutoff;

    CLI::App* add_to(CLI::App& app) {
        auto* sub = app.add_subcommand("segment", "Gradient watershed cloud segmentation");
        sub->add_option("--input", input, "GMS1 scene")->required();
        sub->add_option("--segments", segments_out, "GMS1 u32 segment map output")->required();
        sub->add_option("--mask", mask_out, "GMS1 u8 cloud mask output")->required();
        sub->add_option("--stats", stats_out, "Per-region statistics CSV output");
        sub->add_option("--bt-channel", bt_channel, "Channel used for cloud/clear classification");
        gradient.add_to(*sub);
        sub->add_option("--bins", bins, "Otsu histogram bins")
            ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20))
            ->capture_default_str();
        sub->add_option("--min-seed-area", min_seed_area, "Smallest marker component kept (pixels)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--min-area", min_area, "Merge regions smaller than this (0 disables)")
            ->capture_default_str();
        sub->add_option("--clear-sky-cutoff", clear_sky_cutoff, "Regions with mean BT below this are cloud (K)")
            ->capture_default_str();
        return sub;
    }

    int run(std::ostream&) const {
        const auto image = read_raster_file(input);
        select_channels(image, gradient.channels);
        if (!bt_channel.empty() && !image.has_channel(bt_channel)) {
            throw UsageError("input has no channel '" + bt_channel + "'");
        }
        GmsConfig cfg;
        cfg.gradient = gradient.config();
        cfg.channels = gradient.channels;
        cfg.bt_channel = bt_channel;
        cfg.histogram_bins = bins;
        cfg.min_seed_area = min_seed_area;
        cfg.min_area = min_area;
        cfg.clear_sky_cutoff = clear_sky_cutoff;
        const auto result = run_gms(image, cfg);

        write_raster_file(result.segments, segments_out);
        write_raster_file(result.classification.mask, mask_out);
        if (!stats_out.empty()) {
            std::ostringstream csv;
            csv << "label,area,mean_bt,min_bt,mean_gradient,is_cloud\n";
            for (const auto& r : result.classification.regions) {
                csv << r.label << ',' << r.area << ',' << format_double(r.mean_bt) << ','
                    << format_double(r.min_bt) << ',' << format_double(r.mean_gradient) << ','
                    << (r.is_cloud ? 1 : 0) << '\n';
            }
            const std::string text = csv.str();
            write_file_bytes(stats_out, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
        }
        return kOk;
    }
};

struct Ccs {
    std::string input;
    std::string segments_out;
    std::string mask_out;
    std::string bt_channel;
    std::vector<double> levels{220.0, 235.0, 253.0};
    std::size_t min_area = 50;

    CLI::App* add_to(CLI::App& app) {
        auto* sub = app.add_subcommand("ccs", "Threshold region-growing baseline segmentation");
        sub->add_option("--input", input, "GMS1 scene")->required();
        sub->add_option("--segments", segments_out, "GMS1 u32 segment map output (0 = clear)")->required();
        sub->add_option("--mask", mask_out, "GMS1 u8 cloud mask output")->required();
        sub->add_option("--bt-channel", bt_channel, "Brightness temperature channel");
        sub->add_option("--levels", levels, "Ascending threshold levels in K; the last is the cap")
            ->delimiter(',')
            ->capture_default_str();
        sub->add_option("--min-area", min_area, "Merge or drop patches smaller than this (pixels)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        return sub;
    }

    int run(std::ostream&) const {
        CcsConfig cfg;
        cfg.threshold_levels = levels;
        cfg.max_threshold = levels.empty() ? 0.0 : levels.back();
        cfg.min_area = min_area;
        try {
            cfg.validate();
        } catch (const InvalidArgument& e) {
            throw UsageError(e.what());
        }
        const auto image = read_raster_file(input);
        if (!bt_channel.empty() && !image.has_channel(bt_channel)) {
            throw UsageError("input has no channel '" + bt_channel + "'");
        }
        const auto segments = ccs_segment(brightness_channel(image, bt_channel), cfg);
        write_raster_file(segments, segments_out);
        write_raster_file(ccs_cloud_mask(segments), mask_out);
        return kOk;
    }
};

struct TruthMask {
    std::string input;
    std::string output;
    double threshold = kTruthThreshold;

    CLI::App* add_to(CLI::App& app) {
        auto* sub = app.add_subcommand("truth-mask", "Cloud mask from hydrometeor mixing ratios");
        sub->add_option("--input", input, "GMSV hydrometeor volume")->required();
        sub->add_option("--output", output, "GMS1 u8 cloud mask output")->required();
        sub->add_option("--threshold", threshold, "Mixing-ratio threshold (kg/kg)")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        return sub;
    }

    int run(std::ostream&) const {
        write_raster_file(derive_truth_mask(read_volume_file(input), threshold), output);
        return kOk;
    }
};

struct Evaluate {
    std::string prediction;
    std::string truth;
    std::string output;

    CLI::App* add_to(CLI::App& app) {
        auto* sub = app.add_subcommand("evaluate", "Contingency table and verification scores as JSON");
        sub->add_option("--prediction", prediction, "Predicted GMS1 cloud mask")->required();
        sub->add_option("--truth", truth, "Reference GMS1 cloud mask")->required();
        sub->add_option("--output", output, "JSON report path (default: stdout)");
        return sub;
    }

    int run(std::ostream& out) const {
        const auto pred = read_cloud_mask(prediction);
        const auto ref = read_cloud_mask(truth);
        if (pred.width() != ref.width() || pred.height() != ref.height()) {
            throw InputError("masks differ in size: " + std::to_string(pred.width()) + "x" +
                             std::to_string(pred.height()) + " vs " + std::to_string(ref.width()) + "x" +
                             std::to_string(ref.height()));
        }
        const std::string json = to_json(verify(contingency(pred, ref)));
        if (output.empty()) {
            out << json;
        } else {
            write_file_bytes(output, std::span(reinterpret_cast<const std::uint8_t*>(json.data()), json.size()));
        }
        return kOk;
    }
};

struct Synth {
    std::string preset;
    std::string spec_file;
    std::optional<std::uint64_t> seed;
    std::optional<double> noise_sigma;
    std::string scene_out;
    std::string volume_out;
    std::string spec_out;

    CLI::App* add_to(CLI::App& app) {
        auto* sub = app.add_subcommand("synth", "Generate a synthetic scene and hydrometeor volume");
        auto* p = sub->add_option("--preset", preset, "One of: harvey_like, wyoming_like, warm_stratiform, mixed");
        auto* f = sub->add_option("--spec-file", spec_file, "Scene spec (key = value text)");
        p->excludes(f);
        sub->add_option("--seed", seed, "Noise seed (preset default 42; overrides the spec file)");
        sub->add_option("--noise-sigma", noise_sigma, "Override noise standard deviation (K)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--scene", scene_out, "GMS1 brightness temperature output")->required();
        sub->add_option("--volume", volume_out, "GMSV hydrometeor volume output");
        sub->add_option("--write-spec", spec_out, "Also write the effective scene spec");
        return sub;
    }

    int run(std::ostream&) const {
        SceneSpec spec;
        if (!preset.empty()) {
            auto found = preset_scene(preset, seed.value_or(42));
            if (!found) throw UsageError("unknown preset '" + preset + "'");
            spec = *found;
        } else if (!spec_file.empty()) {
            const auto bytes = read_file_bytes(spec_file);
            try {
                spec = parse_scene_spec(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
            } catch (const InvalidArgument& e) {
                throw InputError(e.what());
            }
            if (seed) spec.rng_seed = *seed;
        } else {
            throw UsageError("one of --preset or --spec-file is required");
        }
        if (noise_sigma) spec.noise_sigma = *noise_sigma;

        const auto scene = generate_scene(spec);
        write_raster_file(scene.image, scene_out);
        if (!volume_out.empty()) write_volume_file(scene.volume, volume_out);
        if (!spec_out.empty()) {
            const std::string text = format_scene_spec(spec);
            write_file_bytes(spec_out, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
        }
        return kOk;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gradient-based multispectral cloud segmentation", "gms"};
    app.require_subcommand(1);
    Gradient gradient;
    Segment segment;
    Ccs ccs;
    TruthMask truth_mask;
    Evaluate evaluate;
    Synth synth;
    auto* gradient_cmd = gradient.add_to(app);
    auto* segment_cmd = segment.add_to(app);
    auto* ccs_cmd = ccs.add_to(app);
    auto* truth_cmd = truth_mask.add_to(app);
    auto* evaluate_cmd = evaluate.add_to(app);
    auto* synth_cmd = synth.add_to(app);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "gms: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (gradient_cmd->parsed()) return gradient.run(out);
        if (segment_cmd->parsed()) return segment.run(out);
        if (ccs_cmd->parsed()) return ccs.run(out);
        if (truth_cmd->parsed()) return truth_mask.run(out);
        if (evaluate_cmd->parsed()) return evaluate.run(out);
        if (synth_cmd->parsed()) return synth.run(out);
    } catch (const UsageError& e) {
        err << "gms: " << e.what() << "\n";
        return kUsage;
    } catch (const InputError& e) {
        err << "gms: " << e.what() << "\n";
        return kIoOrFormat;
    } catch (const FormatError& e) {
        err << "gms: " << e.what() << "\n";
        return kIoOrFormat;
    } catch (const IoError& e) {
        err << "gms: " << e.what() << "\n";
        return kIoOrFormat;
    } catch (const PreconditionError& e) {
        err << "gms: " << e.what() << "\n";
        return kAlgorithmPrecondition;
    } catch (const InvalidArgument& e) {
        err << "gms: " << e.what() << "\n";
        return kUsage;
    }
    err << "gms: no subcommand\n";
    return kUsage;
}

}  // namespace gms::cli
