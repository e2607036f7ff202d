#include "regionpaint/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>

#include "regionpaint/error.hpp"
#include "regionpaint/image_io.hpp"
#include "regionpaint/sequencing.hpp"
#include "regionpaint/stroke_geometry.hpp"
#include "regionpaint/vectorization.hpp"

namespace regionpaint {
namespace {

namespace fs = std::filesystem;

class StageClock {
  public:
    explicit StageClock(RunReport& report) : report_(report) {}

    template <typename F>
    auto run(const char* stage, F&& f) {
        const auto t0 = std::chrono::steady_clock::now();
        struct Record {
            RunReport& report;
            const char* stage;
            std::chrono::steady_clock::time_point t0;
            ~Record() {
                const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
                report.timings.push_back({stage, dt.count()});
            }
        } record{report_, stage, t0};
        return f();
    }

  private:
    RunReport& report_;
};

std::string frame_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06zu.png", index + 1);
    return buf;
}

VectorRegion region_from_record(const RegionRecord& r, double tolerance) {
    VectorRegion v;
    v.id = r.id;
    v.source_segment_id = r.segment_id;
    v.path = r.path;
    v.holes = r.holes;
    v.fill = r.fill;
    update_region_metrics(v, tolerance);
    return v;
}

}  // namespace

nlohmann::json RunReport::to_json() const {
    nlohmann::json j;
    j["input"] = input;
    j["width"] = width;
    j["height"] = height;
    j["segments"] = segments;
    j["regions"] = regions;
    j["strokes"] = strokes;
    j["strokes_applied"] = strokes_applied;
    j["frames"] = frames;
    if (fidelity) {
        j["mse"] = fidelity->mse;
        // JSON has no infinity; identical images report psnr as null.
        j["psnr"] = std::isinf(fidelity->psnr) ? nlohmann::json(nullptr) : nlohmann::json(fidelity->psnr);
        j["identical"] = fidelity->mse == 0.0;
    }
    nlohmann::json t = nlohmann::json::object();
    for (const StageTiming& s : timings) t[s.stage] = s.seconds;
    j["timings_s"] = t;
    j["warnings"] = warnings;
    return j;
}

std::vector<SegmentMask> segment_stage(const RgbImage& image, const RunConfig& cfg, const LabelMap* labels) {
    if (!labels && cfg.segmentation.method == SegmentationMethod::label_map)
        throw StageError("segmentation", "input", "config selects label_map segmentation but no label map was given");
    try {
        return extract_segments(image, cfg.segmentation, labels);
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError("segmentation", labels ? "label map" : "input image", e.what());
    }
}

StrokeProgram vectorize_stage(const RgbImage& image, const std::vector<SegmentMask>& segments, const RunConfig& cfg,
                              const std::string& input_path) {
    StrokeProgram program;
    program.input_path = input_path;
    program.width = image.width();
    program.height = image.height();
    program.config = cfg;
    int next_id = 0;
    for (const SegmentMask& seg : segments) {
        std::vector<VectorRegion> regions;
        try {
            regions = vectorize_segment(seg, image, cfg.trace);
        } catch (const Error& e) {
            throw StageError("vectorization", "segment " + std::to_string(seg.id()), e.what());
        }
        for (VectorRegion& r : regions)
            program.regions.push_back({next_id++, seg.id(), r.fill, std::move(r.path), std::move(r.holes)});
    }
    return program;
}

void sequence_stage(StrokeProgram& program) {
    const RunConfig& cfg = program.config;
    std::vector<VectorRegion> regions;
    for (const RegionRecord& r : program.regions) regions.push_back(region_from_record(r, cfg.trace.flatten_tolerance));

    std::vector<SequencedRegion> order;
    try {
        order = sequence_regions(regions, resolve_sequencing(cfg, program.width, program.height));
    } catch (const Error& e) {
        throw StageError("sequencing", "region set", e.what());
    }

    const DecompositionConfig deco = resolve_decomposition(cfg, program.width, program.height);
    program.strokes.clear();
    int rank = 0;
    for (const SequencedRegion& s : order) {
        const VectorRegion& r = regions[s.region_index];
        std::vector<StrokeParams> strokes;
        try {
            strokes = strokes_for_region(flatten_to_polygon(r, cfg.trace.flatten_tolerance), r.fill, deco);
        } catch (const Error& e) {
            throw StageError("stroke_geometry", "region " + std::to_string(r.id), e.what());
        }
        for (const StrokeParams& p : strokes) program.strokes.push_back({rank++, s.segment_id, s.group_id, r.id, p});
    }
}

BrushTemplate brush_for(const RunConfig& cfg) {
    return cfg.render.brush.empty() ? default_brush() : load_brush(cfg.render.brush);
}

RenderOptions render_options(const RunConfig& cfg) {
    RenderOptions o;
    o.blend_mode = cfg.render.blend_mode;
    o.frame_policy = cfg.render.frame_policy;
    o.flatten_tolerance = cfg.trace.flatten_tolerance;
    o.clip_to_region = cfg.render.clip_to_region;
    return o;
}

PaintResult paint_image(const RgbImage& image, const RunConfig& cfg, const LabelMap* labels,
                        const std::string& input_path, const FrameSink& sink) {
    validate(cfg);
    PaintResult out;
    RunReport& report = out.report;
    report.input = input_path;
    report.width = image.width();
    report.height = image.height();
    StageClock clock(report);

    const auto segments = clock.run("segmentation", [&] { return segment_stage(image, cfg, labels); });
    report.segments = segments.size();
    out.program = clock.run("vectorization", [&] { return vectorize_stage(image, segments, cfg, input_path); });
    report.regions = out.program.regions.size();
    clock.run("sequencing", [&] {
        sequence_stage(out.program);
        return 0;
    });
    report.strokes = out.program.strokes.size();
    const BrushTemplate brush = brush_for(cfg);
    out.render = clock.run("rendering", [&] { return render_sequence(out.program, brush, render_options(cfg), sink); });
    report.strokes_applied = out.render.strokes_applied;
    report.frames = out.render.frames;
    report.warnings = out.render.warnings;
    report.fidelity = fidelity(to_rgb8(out.render.final_canvas), image);
    return out;
}

RunReport render_to_directory(const StrokeProgram& program, const RunConfig& cfg, const RgbImage* reference,
                              RunReport report) {
    const fs::path out_dir = cfg.out_dir;
    fs::create_directories(out_dir);
    const fs::path frame_dir = out_dir / "frames";
    if (cfg.render.write_frames) fs::create_directories(frame_dir);
    report.width = program.width;
    report.height = program.height;
    report.regions = program.regions.size();
    report.strokes = program.strokes.size();
    if (report.segments == 0) {
        std::set<int> ids;
        for (const RegionRecord& r : program.regions) ids.insert(r.segment_id);
        report.segments = ids.size();
    }
    if (report.input.empty()) report.input = program.input_path;

    StageClock clock(report);
    std::vector<fs::path> frame_files;
    FrameSink sink;
    if (cfg.render.write_frames) {
        sink = [&](std::size_t index, const Canvas& canvas, const PixelRect&) {
            frame_files.push_back(frame_dir / frame_name(index));
            write_png(frame_files.back(), to_rgb8(canvas.pixels));
        };
    }
    const BrushTemplate brush = brush_for(cfg);
    const RenderResult result =
        clock.run("rendering", [&] { return render_sequence(program, brush, render_options(cfg), sink); });
    report.frames = result.frames;
    report.strokes_applied = result.strokes_applied;
    report.warnings.insert(report.warnings.end(), result.warnings.begin(), result.warnings.end());

    const RgbImage final_image = to_rgb8(result.final_canvas);
    clock.run("output", [&] {
        write_png(out_dir / "final.png", final_image);
        if (cfg.render.animation && !frame_files.empty()) {
            if (animated_png_supported())
                write_animated_png(out_dir / "animation.png", frame_files, cfg.render.frame_delay_ms);
            else
                report.warnings.push_back("animation skipped: libpng was built without APNG support");
        }
        return 0;
    });
    if (reference) report.fidelity = fidelity(final_image, *reference);

    std::ofstream rep(out_dir / "report.json");
    rep << report.to_json().dump(2) << "\n";
    return report;
}

RunReport paint_to_directory(const fs::path& input, const RunConfig& cfg_in, const std::optional<fs::path>& label_map) {
    RunConfig cfg = cfg_in;
    validate(cfg);
    RunReport report;
    report.input = input.string();
    StageClock clock(report);

    const RgbImage image = clock.run("load", [&] { return read_rgb(input); });
    std::optional<LabelMap> labels;
    if (label_map) {
        labels = read_label_map(*label_map);
        cfg.segmentation.method = SegmentationMethod::label_map;
    }
    const auto segments =
        clock.run("segmentation", [&] { return segment_stage(image, cfg, labels ? &*labels : nullptr); });
    report.segments = segments.size();
    StrokeProgram program =
        clock.run("vectorization", [&] { return vectorize_stage(image, segments, cfg, input.string()); });
    clock.run("sequencing", [&] {
        sequence_stage(program);
        return 0;
    });
    fs::create_directories(cfg.out_dir);
    save_program(fs::path(cfg.out_dir) / "program.json", program);
    return render_to_directory(program, cfg, &image, std::move(report));
}

RunReport replay_to_directory(const fs::path& program_path, const std::optional<fs::path>& out_dir) {
    const StrokeProgram program = load_program(program_path);
    RunConfig cfg = program.config;
    if (out_dir) cfg.out_dir = out_dir->string();
    std::optional<RgbImage> reference;
    if (!program.input_path.empty() && fs::exists(program.input_path)) {
        RgbImage img = read_rgb(program.input_path);
        if (img.same_size(program.width, program.height)) reference = std::move(img);
    }
    RunReport report;
    report.input = program.input_path;
    return render_to_directory(program, cfg, reference ? &*reference : nullptr, std::move(report));
}

}  // namespace regionpaint
