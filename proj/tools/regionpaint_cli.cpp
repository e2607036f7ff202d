// regionpaint: paint an image region by region with rectangular strokes.
//
//   regionpaint paint     --input photo.png --out-dir out
//   regionpaint segment   --input photo.png --out-dir seg
//   regionpaint vectorize --input photo.png --label-map seg/labels.png --out-dir vec
//   regionpaint sequence  --input vec/regions.json --out-dir seq
//   regionpaint render    --input seq/program.json --out-dir out
//   regionpaint replay    --replay out/program.json --out-dir again

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "regionpaint/config.hpp"
#include "regionpaint/error.hpp"
#include "regionpaint/image_io.hpp"
#include "regionpaint/pipeline.hpp"
#include "regionpaint/program.hpp"
#include "regionpaint/svg.hpp"

namespace fs = std::filesystem;
using namespace regionpaint;

namespace {

struct Flags {
    std::string input;
    std::string config;
    std::string label_map;
    std::string brush;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string frame_policy;
    std::string blend_mode;
    std::string replay;
};

RunConfig base_config(const Flags& f) {
    RunConfig cfg = f.config.empty() ? RunConfig{} : load_run_config(f.config);
    return cfg;
}

void apply_overrides(RunConfig& cfg, const Flags& f) {
    if (f.seed) {
        cfg.seed = *f.seed;
        cfg.segmentation.seed = *f.seed;
    }
    if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
    if (!f.brush.empty()) cfg.render.brush = f.brush;
    if (!f.frame_policy.empty()) cfg.render.frame_policy = frame_policy_from_string(f.frame_policy);
    if (!f.blend_mode.empty()) cfg.render.blend_mode = blend_mode_from_string(f.blend_mode);
    if (!f.label_map.empty()) cfg.segmentation.method = SegmentationMethod::label_map;
    validate(cfg);
}

std::optional<LabelMap> labels_of(const Flags& f) {
    if (f.label_map.empty()) return std::nullopt;
    return read_label_map(f.label_map);
}

void print_report(const RunReport& r) {
    std::cout << "segments " << r.segments << ", regions " << r.regions << ", strokes " << r.strokes << ", frames "
              << r.frames;
    if (r.fidelity) {
        std::cout << ", mse " << r.fidelity->mse << ", psnr ";
        if (std::isinf(r.fidelity->psnr))
            std::cout << "inf";
        else
            std::cout << r.fidelity->psnr << " dB";
    }
    std::cout << "\n";
    for (const std::string& w : r.warnings) std::cerr << "warning: " << w << "\n";
}

int run_paint(const Flags& f) {
    if (!f.replay.empty()) {
        print_report(replay_to_directory(f.replay, f.out_dir.empty() ? std::nullopt : std::optional<fs::path>(f.out_dir)));
        return 0;
    }
    if (f.input.empty()) throw Error("paint needs --input (or --replay)");
    RunConfig cfg = base_config(f);
    apply_overrides(cfg, f);
    std::optional<fs::path> lm;
    if (!f.label_map.empty()) lm = f.label_map;
    print_report(paint_to_directory(f.input, cfg, lm));
    return 0;
}

int run_segment(const Flags& f) {
    RunConfig cfg = base_config(f);
    apply_overrides(cfg, f);
    const RgbImage image = read_rgb(f.input);
    const auto labels = labels_of(f);
    const auto segments = segment_stage(image, cfg, labels ? &*labels : nullptr);
    fs::create_directories(cfg.out_dir);
    write_label_map(fs::path(cfg.out_dir) / "labels.png", to_label_map(segments, image.width(), image.height()));
    nlohmann::json j;
    j["input"] = f.input;
    j["width"] = image.width();
    j["height"] = image.height();
    j["segments"] = nlohmann::json::array();
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const PixelRect& b = segments[i].bbox();
        j["segments"].push_back({{"label", i + 1},
                                 {"area", segments[i].area()},
                                 {"bbox", {b.x0, b.y0, b.x1, b.y1}}});
    }
    std::ofstream(fs::path(cfg.out_dir) / "segments.json") << j.dump(2) << "\n";
    std::cout << "segments " << segments.size() << "\n";
    return 0;
}

int run_vectorize(const Flags& f) {
    RunConfig cfg = base_config(f);
    apply_overrides(cfg, f);
    const RgbImage image = read_rgb(f.input);
    const auto labels = labels_of(f);
    const auto segments = segment_stage(image, cfg, labels ? &*labels : nullptr);
    const StrokeProgram regions = vectorize_stage(image, segments, cfg, f.input);
    fs::create_directories(cfg.out_dir);
    save_program(fs::path(cfg.out_dir) / "regions.json", regions);
    write_svg(fs::path(cfg.out_dir) / "regions.svg", regions);
    std::cout << "segments " << segments.size() << ", regions " << regions.regions.size() << "\n";
    return 0;
}

int run_sequence(const Flags& f) {
    StrokeProgram program = load_program(f.input);
    if (!f.config.empty()) {
        RunConfig cfg = load_run_config(f.config);
        program.config = cfg;
    }
    apply_overrides(program.config, f);
    sequence_stage(program);
    fs::create_directories(program.config.out_dir);
    save_program(fs::path(program.config.out_dir) / "program.json", program);
    std::cout << "regions " << program.regions.size() << ", strokes " << program.strokes.size() << "\n";
    return 0;
}

int run_render(const Flags& f) {
    StrokeProgram program = load_program(f.input);
    RunConfig cfg = program.config;
    if (!f.config.empty()) cfg = load_run_config(f.config);
    apply_overrides(cfg, f);
    std::optional<RgbImage> reference;
    if (!program.input_path.empty() && fs::exists(program.input_path)) reference = read_rgb(program.input_path);
    if (reference && !reference->same_size(program.width, program.height)) reference.reset();
    print_report(render_to_directory(program, cfg, reference ? &*reference : nullptr));
    return 0;
}

int run_replay(const Flags& f) {
    const std::string path = !f.replay.empty() ? f.replay : f.input;
    if (path.empty()) throw Error("replay needs --replay <program.json>");
    print_report(replay_to_directory(path, f.out_dir.empty() ? std::nullopt : std::optional<fs::path>(f.out_dir)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Region-driven stroke-based painting"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        auto* in = sub->add_option("--input", f.input, "input image (or stage file)");
        if (needs_input) in->required();
        sub->add_option("--config", f.config, "JSON run configuration");
        sub->add_option("--out-dir", f.out_dir, "output directory");
        sub->add_option("--seed", f.seed, "global seed");
    };
    auto add_segment_flags = [&](CLI::App* sub) {
        sub->add_option("--label-map", f.label_map, "16-bit label map PNG (0 = unlabeled) used instead of the built-in segmenter");
    };
    auto add_render_flags = [&](CLI::App* sub) {
        sub->add_option("--brush", f.brush, "RGBA brush template PNG");
        sub->add_option("--frame-policy", f.frame_policy, "auto | stroke | every:K | region | group | segment | none");
        sub->add_option("--blend-mode", f.blend_mode, "paper | source_over");
    };

    CLI::App* paint = app.add_subcommand("paint", "run every stage and render");
    add_common(paint, false);
    add_segment_flags(paint);
    add_render_flags(paint);
    paint->add_option("--replay", f.replay, "re-render a saved program instead");

    CLI::App* segment = app.add_subcommand("segment", "write the segment label map");
    add_common(segment, true);
    add_segment_flags(segment);

    CLI::App* vectorize = app.add_subcommand("vectorize", "write vector regions (regions.json)");
    add_common(vectorize, true);
    add_segment_flags(vectorize);

    CLI::App* sequence = app.add_subcommand("sequence", "order regions and fit strokes (program.json)");
    add_common(sequence, true);

    CLI::App* render = app.add_subcommand("render", "render a stroke program");
    add_common(render, true);
    add_render_flags(render);

    CLI::App* replay = app.add_subcommand("replay", "re-render a program with its embedded config");
    replay->add_option("--replay,--input", f.replay, "stroke program")->required();
    replay->add_option("--out-dir", f.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (paint->parsed()) return run_paint(f);
        if (segment->parsed()) return run_segment(f);
        if (vectorize->parsed()) return run_vectorize(f);
        if (sequence->parsed()) return run_sequence(f);
        if (render->parsed()) return run_render(f);
        if (replay->parsed()) return run_replay(f);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
