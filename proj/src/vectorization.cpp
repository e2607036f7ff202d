#include "regionpaint/vectorization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>

#include "regionpaint/error.hpp"

namespace regionpaint {

void validate(const TraceConfig& cfg) {
    if (cfg.colors_per_segment < 1) throw Error("trace.colors_per_segment must be >= 1");
    if (!(cfg.fit_tolerance > 0.0)) throw Error("trace.fit_tolerance must be positive");
    if (!(cfg.corner_angle_threshold > 0.0)) throw Error("trace.corner_angle_threshold must be positive");
    if (!(cfg.flatten_tolerance > 0.0)) throw Error("trace.flatten_tolerance must be positive");
    if (cfg.min_region_area < 1) throw Error("trace.min_region_area must be >= 1");
}

// ---------------------------------------------------------------------------
// Color layers

namespace {

struct ColorEntry {
    std::array<double, 3> rgb;
    std::uint32_t key;
    std::uint64_t count;
};

std::uint32_t pack(Rgb c) { return (std::uint32_t(c.r) << 16) | (std::uint32_t(c.g) << 8) | c.b; }

std::array<double, 3> weighted_mean(const std::vector<ColorEntry>& entries, const std::vector<std::size_t>& idx) {
    std::array<double, 3> sum{};
    double n = 0;
    for (std::size_t i : idx) {
        for (int c = 0; c < 3; ++c) sum[c] += entries[i].rgb[c] * entries[i].count;
        n += entries[i].count;
    }
    for (double& v : sum) v /= n;
    return sum;
}

// Median cut on the histogram, then Lloyd iterations. Returns a cluster per entry.
std::vector<int> cluster_colors(const std::vector<ColorEntry>& entries, int k) {
    std::vector<std::vector<std::size_t>> boxes(1);
    boxes[0].resize(entries.size());
    std::iota(boxes[0].begin(), boxes[0].end(), std::size_t{0});

    auto range_of = [&](const std::vector<std::size_t>& box, int& channel) {
        double best = -1;
        for (int c = 0; c < 3; ++c) {
            double lo = 255, hi = 0;
            for (std::size_t i : box) lo = std::min(lo, entries[i].rgb[c]), hi = std::max(hi, entries[i].rgb[c]);
            if (hi - lo > best) best = hi - lo, channel = c;
        }
        return best;
    };

    while (static_cast<int>(boxes.size()) < k) {
        int pick = -1, pick_channel = 0;
        double pick_range = 0;
        for (std::size_t b = 0; b < boxes.size(); ++b) {
            if (boxes[b].size() < 2) continue;
            int ch = 0;
            const double r = range_of(boxes[b], ch);
            if (r > pick_range) pick = static_cast<int>(b), pick_range = r, pick_channel = ch;
        }
        if (pick < 0) break;
        auto& box = boxes[pick];
        std::sort(box.begin(), box.end(), [&](std::size_t l, std::size_t r) {
            if (entries[l].rgb[pick_channel] != entries[r].rgb[pick_channel])
                return entries[l].rgb[pick_channel] < entries[r].rgb[pick_channel];
            return entries[l].key < entries[r].key;
        });
        std::uint64_t total = 0;
        for (std::size_t i : box) total += entries[i].count;
        std::uint64_t acc = 0;
        std::size_t cut = 1;
        for (std::size_t j = 0; j + 1 < box.size(); ++j) {
            acc += entries[box[j]].count;
            cut = j + 1;
            if (2 * acc >= total) break;
        }
        std::vector<std::size_t> upper(box.begin() + static_cast<std::ptrdiff_t>(cut), box.end());
        box.resize(cut);
        boxes.push_back(std::move(upper));
    }

    std::vector<std::array<double, 3>> centers;
    for (const auto& box : boxes) centers.push_back(weighted_mean(entries, box));

    std::vector<int> assign(entries.size(), -1);
    for (int iter = 0; iter < 16; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            int best = 0;
            double best_d = INFINITY;
            for (std::size_t c = 0; c < centers.size(); ++c) {
                double d = 0;
                for (int ch = 0; ch < 3; ++ch) d += (entries[i].rgb[ch] - centers[c][ch]) * (entries[i].rgb[ch] - centers[c][ch]);
                if (d < best_d) best_d = d, best = static_cast<int>(c);
            }
            if (assign[i] != best) assign[i] = best, changed = true;
        }
        if (!changed) break;
        std::vector<std::vector<std::size_t>> members(centers.size());
        for (std::size_t i = 0; i < entries.size(); ++i) members[assign[i]].push_back(i);
        for (std::size_t c = 0; c < centers.size(); ++c)
            if (!members[c].empty()) centers[c] = weighted_mean(entries, members[c]);
    }
    return assign;
}

}  // namespace

std::vector<ColorLayer> quantize_segment_colors(const SegmentMask& segment, const RgbImage& image, int k) {
    if (k < 1) throw Error("colors per segment must be >= 1");
    if (!image.same_size(segment.image_width(), segment.image_height()))
        throw Error("segment mask and image dimensions differ");
    k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(k), segment.area()));

    const PixelRect& bb = segment.bbox();
    std::map<std::uint32_t, std::uint64_t> histogram;
    for (int y = bb.y0; y < bb.y1; ++y)
        for (int x = bb.x0; x < bb.x1; ++x)
            if (segment.contains(x, y)) ++histogram[pack(rgb_at(image, x, y))];

    std::vector<ColorEntry> entries;
    std::map<std::uint32_t, std::size_t> entry_of;
    for (const auto& [key, count] : histogram) {
        entry_of[key] = entries.size();
        entries.push_back({{double(key >> 16), double((key >> 8) & 255), double(key & 255)}, key, count});
    }

    std::vector<int> cluster(entries.size());
    if (static_cast<int>(entries.size()) <= k)
        std::iota(cluster.begin(), cluster.end(), 0);
    else
        cluster = cluster_colors(entries, k);

    const int clusters = *std::max_element(cluster.begin(), cluster.end()) + 1;
    std::vector<std::vector<std::uint32_t>> pixels(clusters);
    std::vector<std::array<std::uint64_t, 3>> sums(clusters, {0, 0, 0});
    for (int y = bb.y0; y < bb.y1; ++y) {
        for (int x = bb.x0; x < bb.x1; ++x) {
            if (!segment.contains(x, y)) continue;
            const Rgb c = rgb_at(image, x, y);
            const int cl = cluster[entry_of[pack(c)]];
            pixels[cl].push_back(static_cast<std::uint32_t>(y * image.width() + x));
            sums[cl][0] += c.r, sums[cl][1] += c.g, sums[cl][2] += c.b;
        }
    }

    std::vector<ColorLayer> layers;
    for (int cl = 0; cl < clusters; ++cl) {
        if (pixels[cl].empty()) continue;
        const double n = static_cast<double>(pixels[cl].size());
        const Rgb mean{static_cast<std::uint8_t>(std::lround(sums[cl][0] / n)),
                       static_cast<std::uint8_t>(std::lround(sums[cl][1] / n)),
                       static_cast<std::uint8_t>(std::lround(sums[cl][2] / n))};
        layers.push_back({SegmentMask::from_pixels(image.width(), image.height(), pixels[cl], cl), mean});
    }
    std::stable_sort(layers.begin(), layers.end(), [](const ColorLayer& l, const ColorLayer& r) {
        if (l.mask.area() != r.mask.area()) return l.mask.area() > r.mask.area();
        return pack(l.color) < pack(r.color);
    });
    for (std::size_t i = 0; i < layers.size(); ++i) layers[i].mask.set_id(static_cast<int>(i));
    return layers;
}

// ---------------------------------------------------------------------------
// Contour tracing

namespace {

constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};

std::vector<int> label_components(const Bitmap& layer) {
    const int w = layer.width();
    const int h = layer.height();
    std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
    std::vector<int> stack;
    int next = 0;
    for (int start = 0; start < w * h; ++start) {
        if (!layer.data()[start] || label[start] >= 0) continue;
        label[start] = next;
        stack.push_back(start);
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            const int x = v % w, y = v / w;
            for (int d = 0; d < 4; ++d) {
                const int nx = x + kDx[d], ny = y + kDy[d];
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                const int u = ny * w + nx;
                if (layer.data()[u] && label[u] < 0) label[u] = next, stack.push_back(u);
            }
        }
        ++next;
    }
    return label;
}

}  // namespace

std::vector<TracedContour> trace_contours(const Bitmap& layer, Point2 origin) {
    const int w = layer.width();
    const int h = layer.height();
    auto set = [&](int x, int y) { return x >= 0 && y >= 0 && x < w && y < h && layer.at(x, y) != 0; };
    const std::vector<int> component = label_components(layer);

    struct CrackEdge {
        int x, y, dir, owner;
    };
    std::vector<CrackEdge> edges;
    const int vw = w + 1;
    std::vector<std::array<int, 2>> outgoing(static_cast<std::size_t>(vw) * (h + 1), {-1, -1});
    auto add = [&](int x, int y, int dir, int owner) {
        auto& slot = outgoing[static_cast<std::size_t>(y) * vw + x];
        slot[slot[0] < 0 ? 0 : 1] = static_cast<int>(edges.size());
        edges.push_back({x, y, dir, owner});
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!set(x, y)) continue;
            const int owner = component[static_cast<std::size_t>(y) * w + x];
            if (!set(x, y - 1)) add(x, y, 0, owner);
            if (!set(x + 1, y)) add(x + 1, y, 1, owner);
            if (!set(x, y + 1)) add(x + 1, y + 1, 2, owner);
            if (!set(x - 1, y)) add(x, y + 1, 3, owner);
        }
    }

    std::vector<bool> used(edges.size(), false);
    std::vector<TracedContour> out;
    for (std::size_t first = 0; first < edges.size(); ++first) {
        if (used[first]) continue;
        TracedContour contour;
        contour.component = edges[first].owner;
        std::size_t cur = first;
        for (std::size_t guard = 0; guard <= edges.size(); ++guard) {
            used[cur] = true;
            const CrackEdge& e = edges[cur];
            contour.points.push_back({origin.x + e.x, origin.y + e.y});
            const int ex = e.x + kDx[e.dir], ey = e.y + kDy[e.dir];
            const auto& slot = outgoing[static_cast<std::size_t>(ey) * vw + ex];
            int next = slot[0];
            // Saddle: turn toward the pixel being followed (4-connected foreground).
            if (slot[1] >= 0 && edges[slot[1]].dir == (e.dir + 1) % 4) next = slot[1];
            if (next < 0) throw Error("contour tracing lost the boundary");
            if (static_cast<std::size_t>(next) == first) break;
            cur = static_cast<std::size_t>(next);
        }
        contour.hole = signed_area(contour.points) < 0.0;
        out.push_back(std::move(contour));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Curve fitting

namespace {

double bernstein(int i, double u) {
    const double s = 1.0 - u;
    switch (i) {
        case 0: return s * s * s;
        case 1: return 3 * u * s * s;
        case 2: return 3 * u * u * s;
        default: return u * u * u;
    }
}

Point2 normalized(Point2 v) {
    const double n = norm(v);
    return n > 0 ? v / n : Point2{};
}

class ContourFitter {
  public:
    ContourFitter(const std::vector<Point2>& pts, double tol, CurvePath& out) : d_(pts), tol_(tol), out_(out) {}

    void fit(std::size_t first, std::size_t last, Point2 t1, Point2 t2) {
        if (last - first == 1 || near_straight(first, last)) {
            out_.push_back(CurveSegment::line(d_[first], d_[last]));
            return;
        }
        if (!(norm(t1) > 0)) t1 = normalized(d_[last] - d_[first]);
        if (!(norm(t2) > 0)) t2 = normalized(d_[first] - d_[last]);

        std::vector<double> u = chord_parameters(first, last);
        std::array<Point2, 4> bez = generate(first, last, u, t1, t2);
        std::size_t split = 0;
        double err = max_error(first, last, bez, u, split);
        if (err <= tol_) return emit(first, last, bez, u);
        if (err <= 4.0 * tol_) {
            for (int i = 0; i < 6; ++i) {
                reparameterize(first, last, u, bez);
                bez = generate(first, last, u, t1, t2);
                err = max_error(first, last, bez, u, split);
                if (err <= tol_) return emit(first, last, bez, u);
            }
        }
        split = std::clamp(split, first + 1, last - 1);
        const std::size_t k = std::min<std::size_t>({2, split - first, last - split});
        Point2 center = normalized(d_[split - k] - d_[split + k]);
        if (!(norm(center) > 0)) center = normalized(d_[split - 1] - d_[split + 1]);
        fit(first, split, t1, center);
        fit(split, last, center * -1.0, t2);
    }

  private:
    bool near_straight(std::size_t first, std::size_t last) const {
        for (std::size_t i = first + 1; i < last; ++i)
            if (point_segment_distance(d_[i], d_[first], d_[last]) > tol_) return false;
        return true;
    }

    std::vector<double> chord_parameters(std::size_t first, std::size_t last) const {
        std::vector<double> u(last - first + 1, 0.0);
        for (std::size_t i = first + 1; i <= last; ++i) u[i - first] = u[i - first - 1] + distance(d_[i], d_[i - 1]);
        const double total = u.back();
        for (double& v : u) v = total > 0 ? v / total : 0.0;
        return u;
    }

    std::array<Point2, 4> generate(std::size_t first, std::size_t last, const std::vector<double>& u,
                                   Point2 t1, Point2 t2) const {
        const Point2 p0 = d_[first];
        const Point2 p3 = d_[last];
        double c00 = 0, c01 = 0, c11 = 0, x0 = 0, x1 = 0;
        for (std::size_t i = first; i <= last; ++i) {
            const double ui = u[i - first];
            const Point2 a0 = t1 * bernstein(1, ui);
            const Point2 a1 = t2 * bernstein(2, ui);
            c00 += dot(a0, a0);
            c01 += dot(a0, a1);
            c11 += dot(a1, a1);
            const Point2 tmp = d_[i] - (p0 * (bernstein(0, ui) + bernstein(1, ui)) +
                                        p3 * (bernstein(2, ui) + bernstein(3, ui)));
            x0 += dot(a0, tmp);
            x1 += dot(a1, tmp);
        }
        const double det = c00 * c11 - c01 * c01;
        double al = 0, ar = 0;
        if (std::abs(det) > 1e-12) {
            al = (x0 * c11 - x1 * c01) / det;
            ar = (c00 * x1 - c01 * x0) / det;
        }
        const double seg = distance(p0, p3);
        const double eps = 1e-6 * seg;
        if (al < eps || ar < eps || al > 4 * seg || ar > 4 * seg) al = ar = seg / 3.0;
        return {p0, p0 + t1 * al, p3 + t2 * ar, p3};
    }

    static Point2 eval(const std::array<Point2, 4>& b, double u) {
        return b[0] * bernstein(0, u) + b[1] * bernstein(1, u) + b[2] * bernstein(2, u) + b[3] * bernstein(3, u);
    }

    double max_error(std::size_t first, std::size_t last, const std::array<Point2, 4>& b,
                     const std::vector<double>& u, std::size_t& split) const {
        double worst = 0;
        split = (first + last) / 2;
        for (std::size_t i = first + 1; i < last; ++i) {
            const double e = distance(eval(b, u[i - first]), d_[i]);
            if (e > worst) worst = e, split = i;
        }
        return worst;
    }

    void reparameterize(std::size_t first, std::size_t last, std::vector<double>& u,
                        const std::array<Point2, 4>& b) const {
        const std::array<Point2, 3> d1{(b[1] - b[0]) * 3.0, (b[2] - b[1]) * 3.0, (b[3] - b[2]) * 3.0};
        const std::array<Point2, 2> d2{(d1[1] - d1[0]) * 2.0, (d1[2] - d1[1]) * 2.0};
        for (std::size_t i = first + 1; i < last; ++i) {
            double& t = u[i - first];
            const double s = 1 - t;
            const Point2 q = eval(b, t);
            const Point2 q1 = d1[0] * (s * s) + d1[1] * (2 * s * t) + d1[2] * (t * t);
            const Point2 q2 = d2[0] * s + d2[1] * t;
            const Point2 diff = q - d_[i];
            const double num = dot(diff, q1);
            const double den = dot(q1, q1) + dot(diff, q2);
            if (std::abs(den) > 1e-12) t = std::clamp(t - num / den, 0.0, 1.0);
        }
    }

    void emit(std::size_t first, std::size_t last, const std::array<Point2, 4>& b, const std::vector<double>& u) {
        // Degree reduction when the quadratic through the same ends still fits.
        const Point2 q = (b[1] * 3.0 + b[2] * 3.0 - b[0] - b[3]) / 4.0;
        bool quad_ok = true;
        for (std::size_t i = first + 1; i < last && quad_ok; ++i) {
            const double t = u[i - first], s = 1 - t;
            const Point2 p = b[0] * (s * s) + q * (2 * s * t) + b[3] * (t * t);
            quad_ok = distance(p, d_[i]) <= tol_;
        }
        if (quad_ok)
            out_.push_back(CurveSegment::quadratic(d_[first], q, d_[last]));
        else
            out_.push_back(CurveSegment::cubic(d_[first], b[1], b[2], d_[last]));
    }

    const std::vector<Point2>& d_;
    double tol_;
    CurvePath& out_;
};

}  // namespace

CurvePath fit_curves(std::span<const Point2> polyline, const TraceConfig& cfg) {
    validate(cfg);
    std::vector<Point2> pts;
    for (const Point2& p : polyline)
        if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
    while (pts.size() > 1 && pts.back() == pts.front()) pts.pop_back();
    if (pts.size() < 3) throw Error("degenerate contour: fewer than 3 distinct vertices");
    const double perimeter_scale = bounding_box(pts).max.x - bounding_box(pts).min.x +
                                   bounding_box(pts).max.y - bounding_box(pts).min.y;
    if (std::abs(signed_area(pts)) <= 1e-9 * std::max(1.0, perimeter_scale * perimeter_scale))
        throw Error("degenerate contour: zero area");

    const std::size_t n = pts.size();
    std::vector<double> seg_len(n);
    double perimeter = 0;
    for (std::size_t i = 0; i < n; ++i) perimeter += seg_len[i] = distance(pts[i], pts[(i + 1) % n]);
    const double support = std::min(2.0, perimeter / 6.0);

    // Walks from i along the contour until at least `support` arc length is covered.
    auto walk = [&](std::size_t i, bool forward, double& travelled) {
        travelled = 0;
        std::size_t j = i;
        for (std::size_t steps = 0; steps < n / 2; ++steps) {
            if (forward) {
                travelled += seg_len[j];
                j = (j + 1) % n;
            } else {
                j = (j + n - 1) % n;
                travelled += seg_len[j];
            }
            if (travelled >= support) break;
        }
        return j;
    };

    std::vector<double> turn(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double tb = 0, tf = 0;
        const Point2 a = pts[i] - pts[walk(i, false, tb)];
        const Point2 b = pts[walk(i, true, tf)] - pts[i];
        const double c = dot(a, b) / (norm(a) * norm(b));
        turn[i] = rad_to_deg(std::acos(std::clamp(c, -1.0, 1.0)));
    }

    std::vector<std::size_t> corners;
    for (std::size_t i = 0; i < n; ++i) {
        if (turn[i] < cfg.corner_angle_threshold) continue;
        bool is_max = true;
        for (int dir : {1, -1}) {
            double arc = 0;
            std::size_t j = i;
            for (std::size_t steps = 0; steps + 1 < n && is_max; ++steps) {
                const std::size_t prev = j;
                j = dir > 0 ? (j + 1) % n : (j + n - 1) % n;
                arc += dir > 0 ? seg_len[prev] : seg_len[j];
                if (arc >= support) break;
                if (turn[j] > turn[i] || (turn[j] == turn[i] && j < i)) is_max = false;
            }
        }
        if (is_max) corners.push_back(i);
    }

    // Break points: corners, plus smooth joins when there are fewer than two.
    struct Break {
        std::size_t index;
        bool corner;
    };
    std::vector<Break> breaks;
    for (std::size_t c : corners) breaks.push_back({c, true});
    if (breaks.empty()) {
        breaks = {{0, false}, {n / 2, false}};
    } else if (breaks.size() == 1) {
        breaks.push_back({(breaks[0].index + n / 2) % n, false});
        std::sort(breaks.begin(), breaks.end(), [](Break l, Break r) { return l.index < r.index; });
    }

    auto smooth_tangent = [&](std::size_t i) {  // direction of travel at i
        const std::size_t k = std::min<std::size_t>(2, n / 3);
        return normalized(pts[(i + k) % n] - pts[(i + n - k) % n]);
    };

    CurvePath path;
    for (std::size_t b = 0; b < breaks.size(); ++b) {
        const Break start = breaks[b];
        const Break stop = breaks[(b + 1) % breaks.size()];
        const std::size_t count = (stop.index + n - start.index) % n;
        std::vector<Point2> piece;
        for (std::size_t j = 0; j <= count; ++j) piece.push_back(pts[(start.index + j) % n]);
        const std::size_t m = piece.size() - 1;
        const std::size_t k = std::min<std::size_t>(2, m);
        const Point2 t1 = start.corner ? normalized(piece[k] - piece[0]) : smooth_tangent(start.index);
        const Point2 t2 = stop.corner ? normalized(piece[m - k] - piece[m]) : smooth_tangent(stop.index) * -1.0;
        CurvePath part;
        // Aiming at half the bound keeps pixel centres on the correct side of thin features.
        ContourFitter(piece, 0.5 * cfg.fit_tolerance, part).fit(0, m, t1, t2);
        path.insert(path.end(), part.begin(), part.end());
    }
    return path;
}

// ---------------------------------------------------------------------------
// Regions and rasterization

namespace {

struct AreaCentroid {
    double area;
    Point2 centroid;
};

AreaCentroid area_centroid(const std::vector<Point2>& p) {
    double a2 = 0, cx = 0, cy = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Point2& s = p[i];
        const Point2& t = p[(i + 1) % p.size()];
        const double c = s.x * t.y - t.x * s.y;
        a2 += c;
        cx += (s.x + t.x) * c;
        cy += (s.y + t.y) * c;
    }
    if (std::abs(a2) < 1e-12) {
        Point2 mean{};
        for (const Point2& q : p) mean = mean + q;
        return {0.0, p.empty() ? mean : mean / static_cast<double>(p.size())};
    }
    return {std::abs(a2) / 2.0, {cx / (3.0 * a2), cy / (3.0 * a2)}};
}

}  // namespace

void update_region_metrics(VectorRegion& r, double tolerance) {
    const AreaCentroid o = area_centroid(flatten_path(r.path, tolerance));
    double area = o.area;
    Point2 moment = o.centroid * o.area;
    for (const CurvePath& hole : r.holes) {
        const AreaCentroid hc = area_centroid(flatten_path(hole, tolerance));
        area -= hc.area;
        moment = moment - hc.centroid * hc.area;
    }
    if (area > 1e-9) {
        r.area = area;
        r.centroid = moment / area;
    } else {
        r.area = o.area;
        r.centroid = o.centroid;
    }
}

std::vector<VectorRegion> vectorize_segment(const SegmentMask& segment, const RgbImage& image,
                                            const TraceConfig& cfg) {
    validate(cfg);
    const std::vector<ColorLayer> layers = quantize_segment_colors(segment, image, cfg.colors_per_segment);
    std::vector<VectorRegion> regions;
    for (const ColorLayer& layer : layers) {
        const Point2 origin{double(layer.mask.bbox().x0), double(layer.mask.bbox().y0)};
        const std::vector<TracedContour> contours = trace_contours(layer.mask.local(), origin);
        std::map<int, std::size_t> outer_of;
        std::map<int, std::vector<std::size_t>> holes_of;
        for (std::size_t i = 0; i < contours.size(); ++i) {
            if (contours[i].hole)
                holes_of[contours[i].component].push_back(i);
            else
                outer_of.emplace(contours[i].component, i);
        }
        for (const auto& [comp, outer_idx] : outer_of) {
            const TracedContour& outer = contours[outer_idx];
            double pixel_area = signed_area(outer.points);
            for (std::size_t h : holes_of[comp]) pixel_area += signed_area(contours[h].points);
            if (pixel_area < cfg.min_region_area) continue;

            VectorRegion r;
            r.source_segment_id = segment.id();
            r.fill = layer.color;
            r.path = fit_curves(outer.points, cfg);
            for (std::size_t h : holes_of[comp]) r.holes.push_back(fit_curves(contours[h].points, cfg));
            update_region_metrics(r, cfg.flatten_tolerance);
            regions.push_back(std::move(r));
        }
    }
    std::stable_sort(regions.begin(), regions.end(), [](const VectorRegion& l, const VectorRegion& r) {
        if (l.area != r.area) return l.area > r.area;
        if (l.centroid.y != r.centroid.y) return l.centroid.y < r.centroid.y;
        return l.centroid.x < r.centroid.x;
    });
    for (std::size_t i = 0; i < regions.size(); ++i) regions[i].id = static_cast<int>(i);
    return regions;
}

Bitmap rasterize_loops(std::span<const std::vector<Point2>> loops, const PixelRect& window) {
    Bitmap out(window.width(), window.height());
    if (window.empty()) return out;
    std::vector<std::vector<double>> crossings(static_cast<std::size_t>(window.height()));
    for (const auto& loop : loops) {
        const std::size_t n = loop.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = loop[i];
            const Point2 b = loop[(i + 1) % n];
            if (a.y == b.y) continue;
            const double ylo = std::min(a.y, b.y), yhi = std::max(a.y, b.y);
            // Rows whose center yc satisfies ylo <= yc < yhi.
            const int r0 = std::max(window.y0, static_cast<int>(std::ceil(ylo - 0.5)));
            const int r1 = std::min(window.y1, static_cast<int>(std::ceil(yhi - 0.5)));
            for (int row = r0; row < r1; ++row) {
                const double yc = row + 0.5;
                crossings[row - window.y0].push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
    }
    for (int row = 0; row < window.height(); ++row) {
        auto& xs = crossings[row];
        std::sort(xs.begin(), xs.end());
        for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
            // Pixel x is inside when its center x + 0.5 lies in [xs[i], xs[i+1]).
            const int c0 = std::max(window.x0, static_cast<int>(std::ceil(xs[i] - 0.5)));
            const int c1 = std::min(window.x1, static_cast<int>(std::ceil(xs[i + 1] - 0.5)));
            for (int c = c0; c < c1; ++c) out.at(c - window.x0, row) = 1;
        }
    }
    return out;
}

Bitmap rasterize_region(const VectorRegion& region, int width, int height, double tolerance) {
    std::vector<std::vector<Point2>> loops;
    loops.push_back(flatten_path(region.path, tolerance));
    for (const CurvePath& h : region.holes) loops.push_back(flatten_path(h, tolerance));
    return rasterize_loops(loops, {0, 0, width, height});
}

Polygon flatten_to_polygon(const VectorRegion& region, double tolerance) {
    return Polygon{flatten_path(region.path, tolerance)};
}

}  // namespace regionpaint
