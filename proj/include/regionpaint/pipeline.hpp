#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "regionpaint/config.hpp"
#include "regionpaint/program.hpp"
#include "regionpaint/renderer.hpp"
#include "regionpaint/segmentation.hpp"

namespace regionpaint {

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct RunReport {
    std::string input;
    int width = 0;
    int height = 0;
    std::size_t segments = 0;
    std::size_t regions = 0;
    std::size_t strokes = 0;
    std::size_t strokes_applied = 0;
    std::size_t frames = 0;
    std::optional<Fidelity> fidelity;  // against the input image, when available
    std::vector<StageTiming> timings;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
};

/// Segments from the label map when one is given (or the config asks for
/// one), otherwise from the built-in segmenter. Paint order, residual first.
std::vector<SegmentMask> segment_stage(const RgbImage& image, const RunConfig& cfg, const LabelMap* labels);

/// Vector regions of every segment, as a program without strokes. Region ids
/// are global and follow segment order.
StrokeProgram vectorize_stage(const RgbImage& image, const std::vector<SegmentMask>& segments, const RunConfig& cfg,
                              const std::string& input_path);

/// Orders the program's regions and replaces its strokes.
void sequence_stage(StrokeProgram& program);

BrushTemplate brush_for(const RunConfig& cfg);
RenderOptions render_options(const RunConfig& cfg);

struct PaintResult {
    StrokeProgram program;
    RenderResult render;
    RunReport report;
};

/// All stages in memory.
PaintResult paint_image(const RgbImage& image, const RunConfig& cfg, const LabelMap* labels,
                        const std::string& input_path, const FrameSink& sink = {});

/// Renders a program into cfg.out_dir: frames/frame_NNNNNN.png per the frame
/// policy, final.png, optionally animation.png, and report.json. The report
/// passed in is completed and returned.
RunReport render_to_directory(const StrokeProgram& program, const RunConfig& cfg, const RgbImage* reference,
                              RunReport report = {});

/// Full run from files: writes program.json next to the render outputs.
RunReport paint_to_directory(const std::filesystem::path& input, const RunConfig& cfg,
                             const std::optional<std::filesystem::path>& label_map = std::nullopt);

/// Re-renders a saved program using only its embedded config; `out_dir`
/// overrides where the outputs go.
RunReport replay_to_directory(const std::filesystem::path& program_path,
                              const std::optional<std::filesystem::path>& out_dir = std::nullopt);

}  // namespace regionpaint
