#pragma once

#include <vector>

#include "regionpaint/curves.hpp"
#include "regionpaint/raster.hpp"
#include "regionpaint/segmentation.hpp"

namespace regionpaint {

struct TraceConfig {
    int colors_per_segment = 8;
    double fit_tolerance = 1.0;
    double corner_angle_threshold = 60.0;  // degrees
    double flatten_tolerance = 0.25;
    /// Connected pieces of a color layer smaller than this (px) are not traced.
    int min_region_area = 1;
};

void validate(const TraceConfig& cfg);

struct ColorLayer {
    SegmentMask mask;
    Rgb color;
};

/// Splits the segment's pixels into at most k flat color layers. When the
/// segment has no more than k distinct colors each becomes its own layer;
/// otherwise median cut followed by weighted k-means on the color histogram.
/// Layer color is the rounded mean of its pixels. Layers are ordered by pixel
/// count, largest first.
std::vector<ColorLayer> quantize_segment_colors(const SegmentMask& segment, const RgbImage& image, int k);

struct TracedContour {
    std::vector<Point2> points;  // closed, unit lattice steps
    bool hole = false;
    int component = 0;           // 4-connected component that owns the contour
};

/// Boundary contours of the set pixels on the pixel-corner lattice, with
/// 4-connected foreground. Outer contours have positive shoelace area in raw
/// pixel coordinates, holes negative. `origin` offsets every vertex.
std::vector<TracedContour> trace_contours(const Bitmap& layer, Point2 origin = {});

/// Piecewise fit of a closed polyline. Corners (turn >= threshold) split the
/// contour; near-straight runs become Line, the rest least-squares cubics
/// (reduced to quadratics where that stays within tolerance). Every vertex
/// lies within fit_tolerance of the fitted path.
CurvePath fit_curves(std::span<const Point2> polyline, const TraceConfig& cfg);

struct VectorRegion {
    int id = 0;
    int source_segment_id = 0;
    CurvePath path;                 // outer boundary
    std::vector<CurvePath> holes;
    Rgb fill;
    Point2 centroid;
    double area = 0.0;              // outer minus holes, after flattening
};

/// Recomputes area and centroid (outer minus holes) from the curves.
void update_region_metrics(VectorRegion& region, double tolerance);

/// quantize -> trace -> fit. Regions are ordered by area, largest first; ids
/// are left at their position within the segment.
std::vector<VectorRegion> vectorize_segment(const SegmentMask& segment, const RgbImage& image,
                                            const TraceConfig& cfg);

/// Even-odd scanline fill of closed loops, sampled at pixel centers, into a
/// raster covering `window`.
Bitmap rasterize_loops(std::span<const std::vector<Point2>> loops, const PixelRect& window);

/// Full-image mask of the region including its holes.
Bitmap rasterize_region(const VectorRegion& region, int width, int height, double tolerance = 0.25);

/// The region's outer boundary flattened to a polygon.
Polygon flatten_to_polygon(const VectorRegion& region, double tolerance);

}  // namespace regionpaint
