#include "regionpaint/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "regionpaint/error.hpp"

namespace regionpaint {
namespace {

std::string size_str(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

void require_same_dims(const SegmentMask& a, const SegmentMask& b) {
    if (a.image_width() != b.image_width() || a.image_height() != b.image_height())
        throw Error("segment masks have different dimensions: " +
                    size_str(a.image_width(), a.image_height()) + " vs " +
                    size_str(b.image_width(), b.image_height()));
}

std::size_t overlap_count(const SegmentMask& a, const SegmentMask& b) {
    const PixelRect r = intersect(a.bbox(), b.bbox());
    std::size_t n = 0;
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x)
            if (a.contains(x, y) && b.contains(x, y)) ++n;
    return n;
}

class DisjointSets {
  public:
    explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1), internal_(n, 0.0f) {
        std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    }
    std::uint32_t find(std::uint32_t v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }
    std::uint32_t unite(std::uint32_t a, std::uint32_t b, float weight) {
        if (size_[a] < size_[b] || (size_[a] == size_[b] && b < a)) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        internal_[a] = std::max({internal_[a], internal_[b], weight});
        return a;
    }
    std::uint32_t size(std::uint32_t root) const { return size_[root]; }
    float internal(std::uint32_t root) const { return internal_[root]; }

  private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
    std::vector<float> internal_;
};

struct Edge {
    float weight;
    std::uint32_t a;
    std::uint32_t b;
};

float color_distance(const RgbImage& img, std::uint32_t a, std::uint32_t b) {
    const std::uint8_t* p = img.data().data() + static_cast<std::size_t>(a) * 3;
    const std::uint8_t* q = img.data().data() + static_cast<std::size_t>(b) * 3;
    const float dr = float(p[0]) - float(q[0]);
    const float dg = float(p[1]) - float(q[1]);
    const float db = float(p[2]) - float(q[2]);
    return std::sqrt(dr * dr + dg * dg + db * db);
}

std::vector<Edge> grid_edges(const RgbImage& img) {
    const int w = img.width();
    const int h = img.height();
    std::vector<Edge> edges;
    edges.reserve(img.pixel_count() * 4);
    auto add = [&](int x0, int y0, int x1, int y1) {
        const auto a = static_cast<std::uint32_t>(y0 * w + x0);
        const auto b = static_cast<std::uint32_t>(y1 * w + x1);
        edges.push_back({color_distance(img, a, b), a, b});
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (x + 1 < w) add(x, y, x + 1, y);
            if (y + 1 < h) add(x, y, x, y + 1);
            if (x + 1 < w && y + 1 < h) add(x, y, x + 1, y + 1);
            if (x > 0 && y + 1 < h) add(x, y, x - 1, y + 1);
        }
    }
    // Construction order breaks weight ties, so the sort is deterministic.
    std::stable_sort(edges.begin(), edges.end(),
                     [](const Edge& l, const Edge& r) { return l.weight < r.weight; });
    return edges;
}

void absorb_small_segments(DisjointSets& sets, const std::vector<Edge>& edges, std::size_t n,
                           std::uint32_t min_area) {
    while (true) {
        std::vector<std::uint32_t> small;
        std::size_t components = 0;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (sets.find(v) != v) continue;
            ++components;
            if (sets.size(v) < min_area) small.push_back(v);
        }
        if (small.empty() || components <= 1) return;
        std::sort(small.begin(), small.end(), [&](std::uint32_t l, std::uint32_t r) {
            return sets.size(l) != sets.size(r) ? sets.size(l) < sets.size(r) : l < r;
        });

        std::map<std::uint32_t, std::vector<std::uint32_t>> neighbours;
        for (std::uint32_t s : small) neighbours[s];
        for (const Edge& e : edges) {
            const std::uint32_t ra = sets.find(e.a);
            const std::uint32_t rb = sets.find(e.b);
            if (ra == rb) continue;
            if (auto it = neighbours.find(ra); it != neighbours.end()) it->second.push_back(rb);
            if (auto it = neighbours.find(rb); it != neighbours.end()) it->second.push_back(ra);
        }

        bool merged = false;
        for (std::uint32_t s : small) {
            const std::uint32_t root = sets.find(s);
            if (sets.size(root) >= min_area) continue;
            std::uint32_t best = root;
            for (std::uint32_t nb : neighbours[s]) {
                const std::uint32_t r = sets.find(nb);
                if (r == root) continue;
                if (best == root || sets.size(r) > sets.size(best) ||
                    (sets.size(r) == sets.size(best) && r < best))
                    best = r;
            }
            if (best != root) {
                sets.unite(root, best, 0.0f);
                merged = true;
            }
        }
        if (!merged) return;
    }
}

std::vector<SegmentMask> masks_from_labels(const std::vector<std::uint32_t>& label_of, int w, int h,
                                           std::uint32_t label_count) {
    std::vector<std::vector<std::uint32_t>> pixels(label_count);
    for (std::uint32_t i = 0; i < label_of.size(); ++i) pixels[label_of[i]].push_back(i);
    std::vector<SegmentMask> out;
    out.reserve(label_count);
    for (std::uint32_t l = 0; l < label_count; ++l)
        out.push_back(SegmentMask::from_pixels(w, h, pixels[l], static_cast<int>(l)));
    return out;
}

}  // namespace

SegmentMask SegmentMask::from_bitmap(const Bitmap& full, int id) {
    SegmentMask m;
    m.id_ = id;
    m.image_width_ = full.width();
    m.image_height_ = full.height();
    m.bbox_ = full.rect();
    m.local_ = full;
    m.tighten();
    if (m.area_ == 0) throw Error("segment mask " + std::to_string(id) + " is empty");
    return m;
}

SegmentMask SegmentMask::from_pixels(int image_width, int image_height,
                                     const std::vector<std::uint32_t>& indices, int id) {
    if (indices.empty()) throw Error("segment mask " + std::to_string(id) + " is empty");
    SegmentMask m;
    m.id_ = id;
    m.image_width_ = image_width;
    m.image_height_ = image_height;
    int x0 = image_width, y0 = image_height, x1 = -1, y1 = -1;
    for (std::uint32_t i : indices) {
        const int x = static_cast<int>(i % image_width);
        const int y = static_cast<int>(i / image_width);
        x0 = std::min(x0, x), y0 = std::min(y0, y);
        x1 = std::max(x1, x), y1 = std::max(y1, y);
    }
    m.bbox_ = {x0, y0, x1 + 1, y1 + 1};
    m.local_ = Bitmap(x1 - x0 + 1, y1 - y0 + 1);
    for (std::uint32_t i : indices) {
        std::uint8_t& v = m.local_.at(static_cast<int>(i % image_width) - x0,
                                      static_cast<int>(i / image_width) - y0);
        if (!v) ++m.area_;
        v = 1;
    }
    return m;
}

Bitmap SegmentMask::to_bitmap() const {
    Bitmap full(image_width_, image_height_);
    for (int y = bbox_.y0; y < bbox_.y1; ++y)
        for (int x = bbox_.x0; x < bbox_.x1; ++x)
            if (local_.at(x - bbox_.x0, y - bbox_.y0)) full.at(x, y) = 1;
    return full;
}

void SegmentMask::subtract(const SegmentMask& other) {
    require_same_dims(*this, other);
    const PixelRect r = intersect(bbox_, other.bbox());
    bool changed = false;
    for (int y = r.y0; y < r.y1; ++y) {
        for (int x = r.x0; x < r.x1; ++x) {
            std::uint8_t& v = local_.at(x - bbox_.x0, y - bbox_.y0);
            if (v && other.contains(x, y)) {
                v = 0;
                changed = true;
            }
        }
    }
    if (changed) tighten();
}

void SegmentMask::tighten() {
    int x0 = local_.width(), y0 = local_.height(), x1 = -1, y1 = -1;
    std::size_t area = 0;
    for (int y = 0; y < local_.height(); ++y) {
        for (int x = 0; x < local_.width(); ++x) {
            if (!local_.at(x, y)) continue;
            ++area;
            x0 = std::min(x0, x), y0 = std::min(y0, y);
            x1 = std::max(x1, x), y1 = std::max(y1, y);
        }
    }
    area_ = area;
    if (area == 0) {
        bbox_ = {};
        local_ = Bitmap();
        return;
    }
    Bitmap cropped(x1 - x0 + 1, y1 - y0 + 1);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) cropped.at(x - x0, y - y0) = local_.at(x, y) ? 1 : 0;
    bbox_ = {bbox_.x0 + x0, bbox_.y0 + y0, bbox_.x0 + x1 + 1, bbox_.y0 + y1 + 1};
    local_ = std::move(cropped);
}

void validate(const SegmentationConfig& cfg) {
    if (!(cfg.iou_threshold >= 0.0 && cfg.iou_threshold <= 1.0))
        throw Error("segmentation.iou_threshold must lie in [0, 1]");
    if (cfg.granularity < 1) throw Error("segmentation.granularity must be >= 1");
    if (cfg.min_segment_area < 1) throw Error("segmentation.min_segment_area must be >= 1");
}

std::vector<SegmentMask> segment_image(const RgbImage& image, const SegmentationConfig& cfg) {
    validate(cfg);
    if (image.width() < 1 || image.height() < 1) throw Error("input image is empty");
    const std::size_t n = image.pixel_count();
    if (n == 1) return {SegmentMask::from_bitmap(Bitmap(1, 1, 1), 0)};

    const float k = 1200.0f / static_cast<float>(cfg.granularity);
    const std::vector<Edge> edges = grid_edges(image);
    DisjointSets sets(n);
    for (const Edge& e : edges) {
        std::uint32_t a = sets.find(e.a);
        std::uint32_t b = sets.find(e.b);
        if (a == b) continue;
        const float ta = sets.internal(a) + k / static_cast<float>(sets.size(a));
        const float tb = sets.internal(b) + k / static_cast<float>(sets.size(b));
        if (e.weight <= std::min(ta, tb)) sets.unite(a, b, e.weight);
    }
    absorb_small_segments(sets, edges, n, static_cast<std::uint32_t>(cfg.min_segment_area));

    // Labels in raster order of each segment's first pixel.
    std::vector<std::uint32_t> label_of(n);
    std::vector<std::uint32_t> label_of_root(n, UINT32_MAX);
    std::uint32_t next = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
        const std::uint32_t r = sets.find(v);
        if (label_of_root[r] == UINT32_MAX) label_of_root[r] = next++;
        label_of[v] = label_of_root[r];
    }
    return masks_from_labels(label_of, image.width(), image.height(), next);
}

std::vector<SegmentMask> ingest_label_map(const LabelMap& labels, int image_width, int image_height) {
    if (!labels.same_size(image_width, image_height))
        throw Error("label map is " + size_str(labels.width(), labels.height()) + " but the image is " +
                    size_str(image_width, image_height));
    std::map<std::uint16_t, std::vector<std::uint32_t>> pixels;
    for (std::uint32_t i = 0; i < labels.pixel_count(); ++i)
        if (const std::uint16_t l = labels.data()[i]; l != 0) pixels[l].push_back(i);
    if (pixels.empty()) throw Error("label map has no segments (all pixels are 0)");

    std::vector<SegmentMask> out;
    out.reserve(pixels.size());
    for (const auto& [label, idx] : pixels)
        out.push_back(SegmentMask::from_pixels(image_width, image_height, idx, label));
    return out;
}

double compute_iou(const SegmentMask& a, const SegmentMask& b) {
    require_same_dims(a, b);
    const std::size_t inter = overlap_count(a, b);
    const std::size_t uni = a.area() + b.area() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<SegmentMask> resolve_overlaps(std::vector<SegmentMask> masks, const SegmentationConfig& cfg) {
    validate(cfg);
    for (const SegmentMask& m : masks) require_same_dims(m, masks.front());
    std::stable_sort(masks.begin(), masks.end(), [](const SegmentMask& l, const SegmentMask& r) {
        if (l.area() != r.area()) return l.area() < r.area();
        if (l.bbox().y0 != r.bbox().y0) return l.bbox().y0 < r.bbox().y0;
        return l.bbox().x0 < r.bbox().x0;
    });

    std::vector<SegmentMask> kept;
    std::vector<bool> alive;
    for (SegmentMask& current : masks) {
        for (std::size_t i = 0; i < kept.size() && !current.empty(); ++i) {
            if (!alive[i]) continue;
            const std::size_t inter = overlap_count(current, kept[i]);
            if (inter == 0) continue;
            const double iou =
                static_cast<double>(inter) / static_cast<double>(current.area() + kept[i].area() - inter);
            if (iou > cfg.iou_threshold)
                alive[i] = false;
            else
                current.subtract(kept[i]);
        }
        if (current.empty()) continue;
        kept.push_back(std::move(current));
        alive.push_back(true);
    }

    std::vector<SegmentMask> out;
    for (std::size_t i = 0; i < kept.size(); ++i)
        if (alive[i]) out.push_back(std::move(kept[i]));
    return out;
}

std::vector<SegmentMask> order_segments(std::vector<SegmentMask> masks) {
    std::stable_sort(masks.begin(), masks.end(), [](const SegmentMask& l, const SegmentMask& r) {
        if (l.area() != r.area()) return l.area() > r.area();
        if (l.bbox().y0 != r.bbox().y0) return l.bbox().y0 < r.bbox().y0;
        if (l.bbox().x0 != r.bbox().x0) return l.bbox().x0 < r.bbox().x0;
        return l.id() < r.id();
    });
    return masks;
}

std::optional<SegmentMask> residual_segment(const std::vector<SegmentMask>& masks, int image_width,
                                            int image_height) {
    Bitmap full(image_width, image_height, 1);
    for (const SegmentMask& m : masks) {
        if (m.image_width() != image_width || m.image_height() != image_height)
            throw Error("segment mask dimensions do not match the image");
        for (int y = m.bbox().y0; y < m.bbox().y1; ++y)
            for (int x = m.bbox().x0; x < m.bbox().x1; ++x)
                if (m.contains(x, y)) full.at(x, y) = 0;
    }
    if (count_set(full) == 0) return std::nullopt;
    return SegmentMask::from_bitmap(full, -1);
}

std::vector<SegmentMask> extract_segments(const RgbImage& image, const SegmentationConfig& cfg,
                                          const LabelMap* labels) {
    validate(cfg);
    std::vector<SegmentMask> raw;
    if (cfg.method == SegmentationMethod::label_map) {
        if (!labels) throw Error("segmentation method is label-map but no label map was supplied");
        raw = ingest_label_map(*labels, image.width(), image.height());
    } else {
        raw = segment_image(image, cfg);
    }
    std::vector<SegmentMask> ordered = order_segments(resolve_overlaps(std::move(raw), cfg));
    std::vector<SegmentMask> out;
    if (auto residual = residual_segment(ordered, image.width(), image.height()))
        out.push_back(std::move(*residual));
    for (SegmentMask& m : ordered) out.push_back(std::move(m));
    for (std::size_t i = 0; i < out.size(); ++i) out[i].set_id(static_cast<int>(i));
    return out;
}

LabelMap to_label_map(const std::vector<SegmentMask>& masks, int image_width, int image_height) {
    if (masks.size() > 65535) throw Error("too many segments for a 16-bit label map");
    LabelMap labels(image_width, image_height);
    for (std::size_t i = 0; i < masks.size(); ++i) {
        const SegmentMask& m = masks[i];
        for (int y = m.bbox().y0; y < m.bbox().y1; ++y)
            for (int x = m.bbox().x0; x < m.bbox().x1; ++x)
                if (m.contains(x, y)) labels.at(x, y) = static_cast<std::uint16_t>(i + 1);
    }
    return labels;
}

}  // namespace regionpaint
