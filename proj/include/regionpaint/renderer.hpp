#pragma once

#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "regionpaint/raster.hpp"
#include "regionpaint/stroke_geometry.hpp"

namespace regionpaint {

struct StrokeProgram;
struct StrokeRecord;

enum class BlendMode {
    /// C_r = (C_b * C_o) * (1 - A_o) + C_b * A_o,  A_r = A_b * (1 - A_o) + A_o
    paper,
    /// Overlay composited over base with ordinary source-over.
    source_over,
};

std::string_view to_string(BlendMode mode);
BlendMode blend_mode_from_string(std::string_view name);

struct FramePolicy {
    enum class Kind { automatic, stroke, every, region, group, segment, none };
    Kind kind = Kind::automatic;
    int every = 1;              // for Kind::every
    int automatic_limit = 2000; // automatic: per stroke up to this many strokes, then per group

    friend bool operator==(const FramePolicy&, const FramePolicy&) = default;
};

/// "auto", "stroke", "every:K", "region", "group", "segment" or "none".
FramePolicy frame_policy_from_string(std::string_view text);
std::string to_string(const FramePolicy& policy);

/// RGB holds a grayscale texture, alpha the footprint. Channels in [0, 1].
struct BrushTemplate {
    RgbaRaster pixels;

    double aspect() const { return double(pixels.width()) / double(pixels.height()); }
};

/// Procedural brush: a squarish superellipse footprint with longitudinal
/// bristle streaks, generated from a fixed seed so every build paints alike.
BrushTemplate default_brush();
BrushTemplate brush_from_image(const Rgba8Image& image);
BrushTemplate load_brush(const std::filesystem::path& path);

/// Pixels whose centers may fall inside the stroke rectangle.
PixelRect stroke_window(const StrokeParams& s);

/// Brush mapped onto the pixel grid of `window` (canvas coordinates): the
/// template is stretched to w x h, rotated by theta about (x, y) and sampled
/// bilinearly in one pass, RGB multiplied by the stroke color. Pixels outside
/// the rectangle get alpha 0.
RgbaRaster sample_brush(const BrushTemplate& brush, const StrokeParams& s, const PixelRect& window);

/// The transformed brush on its own, in a raster just large enough for the
/// rotated rectangle (centered). Throws when w or h is below one pixel.
RgbaRaster transform_brush(const BrushTemplate& brush, const StrokeParams& s);

/// RGB = fill, alpha = mask.
RgbaRaster make_base(const Bitmap& mask, Rgb fill);

RgbaRaster blend(const RgbaRaster& base, const RgbaRaster& overlay, BlendMode mode = BlendMode::paper);

struct StrokePatch {
    RgbaRaster base;
    RgbaRaster overlay;
    int x = 0;  // top-left on the canvas
    int y = 0;
};

struct Canvas {
    RgbaRaster pixels;
    Bitmap painted;             // pixels any stroke has touched with nonzero alpha
    std::size_t painted_count = 0;
    int t = 0;
};

/// Opaque white canvas.
Canvas make_canvas(int width, int height);

/// Composites blend(base, overlay) over the canvas at the patch origin with
/// source-over using the blended alpha. Returns the canvas rectangle that
/// was touched; nullopt when the patch lies entirely outside. `t` advances
/// either way.
std::optional<PixelRect> apply_stroke(Canvas& canvas, const StrokePatch& patch, BlendMode mode = BlendMode::paper);

struct Fidelity {
    double mse = 0.0;
    double psnr = std::numeric_limits<double>::infinity();  // +inf for identical images
};

Fidelity fidelity(const RgbImage& rendered, const RgbImage& reference);
Fidelity fidelity(const RgbaRaster& rendered, const RgbaRaster& reference);

/// Paints strokes one at a time. The base of each stroke is the region's
/// outer polygon clipped to the stroke rectangle.
class StrokeRenderer {
  public:
    /// With `clip_to_region` the overlay's alpha is multiplied by the base
    /// mask, so a stroke never paints outside its region.
    StrokeRenderer(int width, int height, BrushTemplate brush, BlendMode mode, bool clip_to_region = true);

    /// Returns the touched canvas rectangle, or nullopt when the stroke was
    /// skipped (a warning is recorded).
    std::optional<PixelRect> paint(const StrokeParams& s, std::span<const Point2> region_polygon,
                                   const std::string& label = "stroke");

    StrokePatch make_patch(const StrokeParams& s, std::span<const Point2> region_polygon) const;

    const Canvas& canvas() const { return canvas_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

  private:
    Canvas canvas_;
    BrushTemplate brush_;
    BlendMode mode_;
    bool clip_;
    std::vector<std::string> warnings_;
};

struct RenderOptions {
    BlendMode blend_mode = BlendMode::paper;
    FramePolicy frame_policy;
    double flatten_tolerance = 0.25;
    bool clip_to_region = true;
};

/// Called after each stroke that closes a frame. `changed` covers every pixel
/// that differs from the previous frame.
using FrameSink = std::function<void(std::size_t frame_index, const Canvas& canvas, const PixelRect& changed)>;

struct RenderResult {
    RgbaRaster final_canvas;
    std::size_t frames = 0;
    std::size_t strokes_applied = 0;
    std::vector<std::string> warnings;
};

/// Replays the program's strokes in order onto a fresh canvas.
RenderResult render_sequence(const StrokeProgram& program, const BrushTemplate& brush, const RenderOptions& options,
                             const FrameSink& sink = {});

}  // namespace regionpaint
