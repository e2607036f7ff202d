#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "regionpaint/renderer.hpp"
#include "regionpaint/segmentation.hpp"
#include "regionpaint/sequencing.hpp"
#include "regionpaint/stroke_geometry.hpp"
#include "regionpaint/vectorization.hpp"

namespace regionpaint {

struct SequencingOptions {
    Linkage linkage = Linkage::average;
    std::optional<double> cluster_distance_cutoff;  // unset: 15% of the image diagonal
    int tsp_two_opt_max_passes = 50;

    friend bool operator==(const SequencingOptions&, const SequencingOptions&) = default;
};

struct DecompositionOptions {
    std::optional<double> delta;   // unset: 0.5% of the image area
    std::optional<double> p_grid;  // unset: sqrt(delta)
    int p_group = 0;               // 0: ceil(area / delta) capped at 64

    friend bool operator==(const DecompositionOptions&, const DecompositionOptions&) = default;
};

struct RenderSettings {
    BlendMode blend_mode = BlendMode::paper;
    FramePolicy frame_policy;
    std::string brush;  // RGBA PNG; empty selects the built-in brush
    bool clip_to_region = true;  // false lets the brush footprint spill past the region
    bool write_frames = true;
    bool animation = false;  // assemble frames into an animated PNG
    int frame_delay_ms = 40;

    friend bool operator==(const RenderSettings&, const RenderSettings&) = default;
};

struct RunConfig {
    SegmentationConfig segmentation;
    TraceConfig trace;
    SequencingOptions sequencing;
    DecompositionOptions decomposition;
    RenderSettings render;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
};

bool operator==(const RunConfig& a, const RunConfig& b);

void validate(const RunConfig& cfg);

SequencingConfig resolve_sequencing(const RunConfig& cfg, int width, int height);
DecompositionConfig resolve_decomposition(const RunConfig& cfg, int width, int height);

std::string_view to_string(Linkage linkage);
Linkage linkage_from_string(std::string_view name);

nlohmann::json to_json(const RunConfig& cfg);

/// Missing keys keep their defaults; unknown keys are rejected with their
/// full dotted path.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace regionpaint
