#include "regionpaint/renderer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <random>

#include "regionpaint/error.hpp"
#include "regionpaint/image_io.hpp"
#include "regionpaint/program.hpp"
#include "regionpaint/vectorization.hpp"

namespace regionpaint {
namespace {

double unit(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

// Smooth 1-D pattern in [0, 1] built from a few random sinusoids.
std::vector<double> streak_profile(std::mt19937_64& rng, int n) {
    const double freqs[] = {3.0, 7.0, 13.0, 23.0};
    const double amps[] = {0.4, 0.3, 0.2, 0.1};
    double phase[4];
    for (double& p : phase) p = 2.0 * kPi * unit(rng);
    std::vector<double> v(n);
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i < n; ++i) {
        const double t = (i + 0.5) / n;
        double s = 0.15 * (unit(rng) - 0.5);
        for (int k = 0; k < 4; ++k) s += amps[k] * std::sin(2.0 * kPi * freqs[k] * t + phase[k]);
        v[i] = s;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    for (double& s : v) s = (s - lo) / (hi - lo);
    return v;
}

void check_same_size(const RgbaRaster& a, const RgbaRaster& b) {
    if (!a.same_size(b))
        throw Error("raster size mismatch: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                    std::to_string(b.width()) + "x" + std::to_string(b.height()));
}

}  // namespace

std::string_view to_string(BlendMode mode) { return mode == BlendMode::paper ? "paper" : "source_over"; }

BlendMode blend_mode_from_string(std::string_view name) {
    if (name == "paper") return BlendMode::paper;
    if (name == "source_over") return BlendMode::source_over;
    throw Error("unknown blend mode '" + std::string(name) + "' (expected paper or source_over)");
}

FramePolicy frame_policy_from_string(std::string_view text) {
    FramePolicy p;
    using K = FramePolicy::Kind;
    if (text == "auto") p.kind = K::automatic;
    else if (text == "stroke") p.kind = K::stroke;
    else if (text == "region") p.kind = K::region;
    else if (text == "group") p.kind = K::group;
    else if (text == "segment") p.kind = K::segment;
    else if (text == "none") p.kind = K::none;
    else if (text.starts_with("every:")) {
        const std::string_view num = text.substr(6);
        int k = 0;
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
        if (ec != std::errc{} || ptr != num.data() + num.size() || k < 1)
            throw Error("frame policy every:K needs a positive integer K, got '" + std::string(text) + "'");
        p.kind = K::every;
        p.every = k;
    } else {
        throw Error("unknown frame policy '" + std::string(text) +
                    "' (expected auto, stroke, every:K, region, group, segment or none)");
    }
    return p;
}

std::string to_string(const FramePolicy& policy) {
    using K = FramePolicy::Kind;
    switch (policy.kind) {
        case K::automatic: return "auto";
        case K::stroke: return "stroke";
        case K::every: return "every:" + std::to_string(policy.every);
        case K::region: return "region";
        case K::group: return "group";
        case K::segment: return "segment";
        case K::none: return "none";
    }
    return "auto";
}

BrushTemplate default_brush() {
    constexpr int tw = 128, th = 48;
    std::mt19937_64 rng(0x5eedb125ULL);
    const std::vector<double> tone = streak_profile(rng, th);
    const std::vector<double> density = streak_profile(rng, th);
    BrushTemplate brush{RgbaRaster(tw, th)};
    for (int j = 0; j < th; ++j) {
        for (int i = 0; i < tw; ++i) {
            const double nx = (i + 0.5) / tw * 2.0 - 1.0;
            const double ny = (j + 0.5) / th * 2.0 - 1.0;
            const double r = std::pow(std::pow(std::abs(nx), 10.0) + std::pow(std::abs(ny), 10.0), 1.0 / 10.0);
            const double foot = std::clamp((1.0 - r) / 0.03, 0.0, 1.0);
            // Bristle marks fade in and out along the stroke.
            const double along = 0.5 + 0.5 * std::sin(2.0 * kPi * (nx * 0.75 + tone[j]));
            const double gray = 0.86 + 0.14 * (0.7 * tone[j] + 0.3 * along);
            double* px = brush.pixels.pixel(i, j);
            px[0] = px[1] = px[2] = gray;
            px[3] = foot * (0.9 + 0.1 * density[j]);
        }
    }
    return brush;
}

BrushTemplate brush_from_image(const Rgba8Image& image) {
    if (image.empty()) throw Error("brush template is empty");
    BrushTemplate brush{to_rgba_float(image)};
    bool any = false;
    for (std::size_t i = 0; i < brush.pixels.pixel_count() && !any; ++i) any = brush.pixels.data()[i * 4 + 3] > 0.0;
    if (!any) throw Error("brush template has an empty footprint (alpha is 0 everywhere)");
    return brush;
}

BrushTemplate load_brush(const std::filesystem::path& path) { return brush_from_image(read_rgba(path)); }

PixelRect stroke_window(const StrokeParams& s) {
    OrientedRect rect{{s.x, s.y}, s.w, s.h, s.theta};
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (const Point2& c : rect.corners()) {
        x0 = std::min(x0, c.x);
        y0 = std::min(y0, c.y);
        x1 = std::max(x1, c.x);
        y1 = std::max(y1, c.y);
    }
    return {static_cast<int>(std::floor(x0 - 0.5)), static_cast<int>(std::floor(y0 - 0.5)),
            static_cast<int>(std::ceil(x1 - 0.5)) + 1, static_cast<int>(std::ceil(y1 - 0.5)) + 1};
}

namespace {

// Removes rounding noise from texel coordinates that should be integral.
double snap(double t) {
    const double r = std::round(t);
    return std::abs(t - r) < 1e-9 ? r : t;
}

}  // namespace

RgbaRaster sample_brush(const BrushTemplate& brush, const StrokeParams& s, const PixelRect& window) {
    const RgbaRaster& tex = brush.pixels;
    const int tw = tex.width(), th = tex.height();
    if (tw == 0 || th == 0) throw Error("brush template is empty");
    const double tint[3] = {s.r / 255.0, s.g / 255.0, s.b / 255.0};
    const OrientedRect rect{{s.x, s.y}, s.w, s.h, s.theta};
    const Point2 aw = rect.axis_w(), ah = rect.axis_h();

    RgbaRaster out(window.width(), window.height());
    for (int y = window.y0; y < window.y1; ++y) {
        for (int x = window.x0; x < window.x1; ++x) {
            double* o = out.pixel(x - window.x0, y - window.y0);
            const Point2 q = Point2{x + 0.5, y + 0.5} - rect.center;
            const double dx = dot(q, aw), dy = dot(q, ah);
            if (std::abs(dx) > s.w / 2 || std::abs(dy) > s.h / 2) {
                o[0] = tint[0];
                o[1] = tint[1];
                o[2] = tint[2];
                o[3] = 0.0;
                continue;
            }
            const double u = std::clamp(snap((dx / s.w + 0.5) * tw - 0.5), 0.0, double(tw - 1));
            const double v = std::clamp(snap((dy / s.h + 0.5) * th - 0.5), 0.0, double(th - 1));
            const int u0 = static_cast<int>(u), v0 = static_cast<int>(v);
            if (u == u0 && v == v0) {
                // On a texel center: copy it, so an unscaled brush maps exactly.
                const double* t = tex.pixel(u0, v0);
                for (int c = 0; c < 3; ++c) o[c] = std::clamp(t[c], 0.0, 1.0) * tint[c];
                o[3] = std::clamp(t[3], 0.0, 1.0);
                continue;
            }
            const int u1 = std::min(u0 + 1, tw - 1), v1 = std::min(v0 + 1, th - 1);
            const double fu = u - u0, fv = v - v0;
            const double wts[4] = {(1 - fu) * (1 - fv), fu * (1 - fv), (1 - fu) * fv, fu * fv};
            const double* src[4] = {tex.pixel(u0, v0), tex.pixel(u1, v0), tex.pixel(u0, v1), tex.pixel(u1, v1)};
            // Premultiplied interpolation keeps transparent texels from
            // bleeding their color into the footprint edge.
            double acc[3] = {0, 0, 0}, alpha = 0;
            for (int k = 0; k < 4; ++k) {
                if (wts[k] == 0.0) continue;
                const double a = src[k][3] * wts[k];
                alpha += a;
                for (int c = 0; c < 3; ++c) acc[c] += src[k][c] * a;
            }
            for (int c = 0; c < 3; ++c) {
                double val = 0;
                if (alpha > 0) {
                    val = acc[c] / alpha;
                } else {
                    for (int k = 0; k < 4; ++k) val += src[k][c] * wts[k];
                }
                o[c] = std::clamp(val, 0.0, 1.0) * tint[c];
            }
            o[3] = std::clamp(alpha, 0.0, 1.0);
        }
    }
    return out;
}

RgbaRaster transform_brush(const BrushTemplate& brush, const StrokeParams& s) {
    if (!(s.w >= 1.0) || !(s.h >= 1.0)) throw Error("stroke is smaller than one pixel");
    const double t = deg_to_rad(s.theta);
    const double ew = std::abs(s.w * std::cos(t)) + std::abs(s.h * std::sin(t));
    const double eh = std::abs(s.w * std::sin(t)) + std::abs(s.h * std::cos(t));
    const int W = std::max(1, static_cast<int>(std::ceil(ew - 1e-9)));
    const int H = std::max(1, static_cast<int>(std::ceil(eh - 1e-9)));
    StrokeParams centered = s;
    centered.x = W / 2.0;
    centered.y = H / 2.0;
    return sample_brush(brush, centered, {0, 0, W, H});
}

RgbaRaster make_base(const Bitmap& mask, Rgb fill) {
    if (count_set(mask) == 0) throw Error("base mask is empty");
    RgbaRaster base(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            double* p = base.pixel(x, y);
            p[0] = fill.r / 255.0;
            p[1] = fill.g / 255.0;
            p[2] = fill.b / 255.0;
            p[3] = mask.at(x, y) ? 1.0 : 0.0;
        }
    }
    return base;
}

RgbaRaster blend(const RgbaRaster& base, const RgbaRaster& overlay, BlendMode mode) {
    check_same_size(base, overlay);
    RgbaRaster out(base.width(), base.height());
    const std::size_t n = base.pixel_count();
    const double* b = base.data().data();
    const double* o = overlay.data().data();
    double* r = out.data().data();
    for (std::size_t i = 0; i < n; ++i, b += 4, o += 4, r += 4) {
        const double ao = o[3], ab = b[3];
        if (mode == BlendMode::paper) {
            for (int c = 0; c < 3; ++c) r[c] = (b[c] * o[c]) * (1.0 - ao) + b[c] * ao;
            r[3] = ab * (1.0 - ao) + ao;
        } else {
            const double ar = ao + ab * (1.0 - ao);
            for (int c = 0; c < 3; ++c) r[c] = ar > 0 ? (o[c] * ao + b[c] * ab * (1.0 - ao)) / ar : b[c];
            r[3] = ar;
        }
    }
    return out;
}

Canvas make_canvas(int width, int height) {
    Canvas c;
    c.pixels = RgbaRaster(width, height, 1.0);
    c.painted = Bitmap(width, height);
    return c;
}

std::optional<PixelRect> apply_stroke(Canvas& canvas, const StrokePatch& patch, BlendMode mode) {
    ++canvas.t;
    const RgbaRaster result = blend(patch.base, patch.overlay, mode);
    const PixelRect placed{patch.x, patch.y, patch.x + result.width(), patch.y + result.height()};
    const PixelRect clip = intersect(placed, canvas.pixels.rect());
    if (clip.empty()) return std::nullopt;
    for (int y = clip.y0; y < clip.y1; ++y) {
        for (int x = clip.x0; x < clip.x1; ++x) {
            const double* s = result.pixel(x - patch.x, y - patch.y);
            const double a = s[3];
            if (a <= 0.0) continue;
            double* d = canvas.pixels.pixel(x, y);
            for (int c = 0; c < 3; ++c) d[c] = s[c] * a + d[c] * (1.0 - a);
            d[3] = a + d[3] * (1.0 - a);
            std::uint8_t& p = canvas.painted.at(x, y);
            if (!p) {
                p = 1;
                ++canvas.painted_count;
            }
        }
    }
    return clip;
}

Fidelity fidelity(const RgbImage& rendered, const RgbImage& reference) {
    if (!rendered.same_size(reference)) throw Error("fidelity needs equally sized images");
    double sum = 0;
    const auto& a = rendered.data();
    const auto& b = reference.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = (double(a[i]) - double(b[i])) / 255.0;
        sum += d * d;
    }
    Fidelity f;
    f.mse = a.empty() ? 0.0 : sum / double(a.size());
    if (f.mse > 0) f.psnr = 10.0 * std::log10(1.0 / f.mse);
    return f;
}

Fidelity fidelity(const RgbaRaster& rendered, const RgbaRaster& reference) {
    check_same_size(rendered, reference);
    double sum = 0;
    const std::size_t n = rendered.pixel_count();
    for (std::size_t i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c) {
            const double d = rendered.data()[i * 4 + c] - reference.data()[i * 4 + c];
            sum += d * d;
        }
    Fidelity f;
    f.mse = n == 0 ? 0.0 : sum / double(3 * n);
    if (f.mse > 0) f.psnr = 10.0 * std::log10(1.0 / f.mse);
    return f;
}

StrokeRenderer::StrokeRenderer(int width, int height, BrushTemplate brush, BlendMode mode, bool clip_to_region)
    : canvas_(make_canvas(width, height)), brush_(std::move(brush)), mode_(mode), clip_(clip_to_region) {}

StrokePatch StrokeRenderer::make_patch(const StrokeParams& s, std::span<const Point2> region_polygon) const {
    const PixelRect window = intersect(stroke_window(s), canvas_.pixels.rect());
    StrokePatch patch;
    patch.x = window.x0;
    patch.y = window.y0;
    if (window.empty()) return patch;
    Bitmap mask(window.width(), window.height(), 1);
    if (!region_polygon.empty()) {
        const std::vector<std::vector<Point2>> loops{{region_polygon.begin(), region_polygon.end()}};
        mask = rasterize_loops(loops, window);
    }
    const OrientedRect rect{{s.x, s.y}, s.w, s.h, s.theta};
    for (int y = window.y0; y < window.y1; ++y)
        for (int x = window.x0; x < window.x1; ++x)
            if (!rect.contains({x + 0.5, y + 0.5}, 0.0)) mask.at(x - window.x0, y - window.y0) = 0;
    if (count_set(mask) == 0) return patch;
    patch.base = make_base(mask, {s.r, s.g, s.b});
    patch.overlay = sample_brush(brush_, s, window);
    if (clip_) {
        const std::size_t n = mask.pixel_count();
        for (std::size_t i = 0; i < n; ++i)
            if (!mask.data()[i]) patch.overlay.data()[i * 4 + 3] = 0.0;
    }
    return patch;
}

std::optional<PixelRect> StrokeRenderer::paint(const StrokeParams& s, std::span<const Point2> region_polygon,
                                               const std::string& label) {
    if (!(s.w >= 1.0) || !(s.h >= 1.0)) {
        warnings_.push_back(label + ": skipped, smaller than one pixel");
        return std::nullopt;
    }
    const StrokePatch patch = make_patch(s, region_polygon);
    if (patch.base.empty()) {
        warnings_.push_back(label + ": skipped, covers no pixel of its region on the canvas");
        return std::nullopt;
    }
    return apply_stroke(canvas_, patch, mode_);
}

RenderResult render_sequence(const StrokeProgram& program, const BrushTemplate& brush, const RenderOptions& options,
                             const FrameSink& sink) {
    validate(program);
    StrokeRenderer renderer(program.width, program.height, brush, options.blend_mode, options.clip_to_region);
    std::map<int, std::vector<Point2>> polygons;
    for (const RegionRecord& r : program.regions) polygons[r.id] = flatten_path(r.path, options.flatten_tolerance);

    using K = FramePolicy::Kind;
    FramePolicy policy = options.frame_policy;
    if (policy.kind == K::automatic)
        policy.kind = program.strokes.size() <= static_cast<std::size_t>(policy.automatic_limit) ? K::stroke : K::group;

    RenderResult result;
    PixelRect changed{};
    const auto& strokes = program.strokes;
    for (std::size_t i = 0; i < strokes.size(); ++i) {
        const StrokeRecord& s = strokes[i];
        const auto touched = renderer.paint(s.params, polygons.at(s.region_id), "stroke rank " + std::to_string(s.rank));
        if (touched) {
            ++result.strokes_applied;
            changed = changed.empty() ? *touched
                                      : PixelRect{std::min(changed.x0, touched->x0), std::min(changed.y0, touched->y0),
                                                  std::max(changed.x1, touched->x1), std::max(changed.y1, touched->y1)};
        }
        const bool last = i + 1 == strokes.size();
        bool emit = false;
        switch (policy.kind) {
            case K::stroke: emit = true; break;
            case K::every: emit = (i + 1) % static_cast<std::size_t>(policy.every) == 0 || last; break;
            case K::region: emit = last || strokes[i + 1].region_id != s.region_id; break;
            case K::group:
                emit = last || strokes[i + 1].group_id != s.group_id || strokes[i + 1].segment_id != s.segment_id;
                break;
            case K::segment: emit = last || strokes[i + 1].segment_id != s.segment_id; break;
            case K::none:
            case K::automatic: break;
        }
        if (emit) {
            if (sink) sink(result.frames, renderer.canvas(), changed);
            ++result.frames;
            changed = {};
        }
    }
    result.final_canvas = renderer.canvas().pixels;
    result.warnings = renderer.warnings();
    return result;
}

}  // namespace regionpaint
