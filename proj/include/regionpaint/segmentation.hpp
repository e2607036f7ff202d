#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "regionpaint/raster.hpp"

namespace regionpaint {

/// One scene segment. Bits are stored cropped to the tight bounding box; the
/// mask is logically the size of the whole image.
class SegmentMask {
  public:
    SegmentMask() = default;

    /// Builds a mask from a full-image bitmap. Throws if the bitmap is empty.
    static SegmentMask from_bitmap(const Bitmap& full, int id);
    /// Builds a mask from row-major pixel indices into a width x height image.
    static SegmentMask from_pixels(int image_width, int image_height,
                                   const std::vector<std::uint32_t>& indices, int id);

    int id() const { return id_; }
    void set_id(int id) { id_ = id; }
    int image_width() const { return image_width_; }
    int image_height() const { return image_height_; }
    const PixelRect& bbox() const { return bbox_; }
    std::size_t area() const { return area_; }
    bool empty() const { return area_ == 0; }

    bool contains(int x, int y) const {
        return bbox_.contains(x, y) && local_.at(x - bbox_.x0, y - bbox_.y0) != 0;
    }
    Bitmap to_bitmap() const;
    /// Bits cropped to bbox(); pixel (x, y) of the image is local(x - x0, y - y0).
    const Bitmap& local() const { return local_; }

    /// Clears every pixel also set in `other`; re-tightens the bbox.
    void subtract(const SegmentMask& other);

    friend bool operator==(const SegmentMask&, const SegmentMask&) = default;

  private:
    void tighten();

    int id_ = 0;
    int image_width_ = 0;
    int image_height_ = 0;
    PixelRect bbox_;
    std::size_t area_ = 0;
    Bitmap local_;
};

enum class SegmentationMethod { builtin, label_map };

struct SegmentationConfig {
    SegmentationMethod method = SegmentationMethod::builtin;
    /// Detail level of the built-in segmenter, 1..; larger values produce
    /// smaller segments (the merge threshold is inversely proportional).
    int granularity = 4;
    double iou_threshold = 0.7;
    int min_segment_area = 64;
    std::uint64_t seed = 0;
};

void validate(const SegmentationConfig& cfg);

/// Graph-based region merging over the 8-connected pixel grid with RGB
/// distance edge weights, followed by absorption of segments smaller than
/// `min_segment_area` into their largest neighbour. Deterministic; the
/// result partitions the image.
std::vector<SegmentMask> segment_image(const RgbImage& image, const SegmentationConfig& cfg);

/// One mask per distinct nonzero label, ascending by label. The mask id is
/// the label value. Unlabeled pixels belong to no mask.
std::vector<SegmentMask> ingest_label_map(const LabelMap& labels, int image_width, int image_height);

double compute_iou(const SegmentMask& a, const SegmentMask& b);

/// Makes masks pairwise disjoint. Masks are visited by ascending area; when a
/// mask overlaps an earlier (smaller) one, the smaller is dropped if their IoU
/// exceeds the threshold, otherwise the shared pixels are removed from the
/// larger. Masks emptied by subtraction are dropped.
std::vector<SegmentMask> resolve_overlaps(std::vector<SegmentMask> masks, const SegmentationConfig& cfg);

/// Descending area; ties by bbox (top, left), then id.
std::vector<SegmentMask> order_segments(std::vector<SegmentMask> masks);

/// Pixels covered by none of `masks`, or nullopt when coverage is complete.
std::optional<SegmentMask> residual_segment(const std::vector<SegmentMask>& masks, int image_width,
                                            int image_height);

/// Full segmentation front end: segment (or ingest), resolve overlaps, order
/// for painting, and prepend the residual background segment. Ids are
/// renumbered to paint order starting at 0.
std::vector<SegmentMask> extract_segments(const RgbImage& image, const SegmentationConfig& cfg,
                                          const LabelMap* labels = nullptr);

/// Encodes disjoint masks as labels: mask i gets label i + 1.
LabelMap to_label_map(const std::vector<SegmentMask>& masks, int image_width, int image_height);

}  // namespace regionpaint
