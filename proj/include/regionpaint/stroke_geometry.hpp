#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "regionpaint/geometry.hpp"
#include "regionpaint/raster.hpp"

namespace regionpaint {

/// One rectangular stroke. (x, y) is the rectangle center, w runs along the
/// long axis, theta is the counterclockwise angle of the w axis in [0, 180).
struct StrokeParams {
    double x = 0.0;
    double y = 0.0;
    double w = 1.0;
    double h = 1.0;
    double theta = 0.0;
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const StrokeParams&, const StrokeParams&) = default;
};

struct DecompositionConfig {
    double delta = 0.0;   // area threshold, px^2
    double p_grid = 0.0;  // cell edge, px
    int p_group = 0;      // strokes per region; 0 picks ceil(area / delta) capped at 64
};

void validate(const DecompositionConfig& cfg);

/// delta = 0.5% of the image area, p_grid = sqrt(delta), p_group automatic.
DecompositionConfig default_decomposition(int width, int height);

/// Stroke count used for a polygon of `area` when p_group is automatic.
int auto_group_count(double area, const DecompositionConfig& cfg);

double polygon_area(const Polygon& p);

struct GridCell {
    Polygon polygon;
    int row = 0;
    int col = 0;
};

/// Intersects `p` with the axis-aligned grid of edge p_grid anchored at its
/// bounding box's top-left corner. A cell may yield several pieces when the
/// polygon is not convex. Cells come out row-major.
std::vector<GridCell> grid_decompose(const Polygon& p, const DecompositionConfig& cfg);

struct SubRegion {
    std::vector<Polygon> cells;
    std::vector<int> cell_indices;  // into the input cell list, ascending
    double area = 0.0;
};

/// Merges cells into min(p_group, |cells|) sub-regions. The smallest group
/// repeatedly absorbs the grid-adjacent group whose union wastes the least
/// bounding-rectangle area. Output is ordered by first cell (row-major).
std::vector<SubRegion> group_cells(std::span<const GridCell> cells, int p_group);

struct OrientedRect {
    Point2 center;
    double w = 0.0;
    double h = 0.0;
    double theta = 0.0;  // degrees, counterclockwise on screen

    Point2 axis_w() const;
    Point2 axis_h() const;
    std::array<Point2, 4> corners() const;
    bool contains(Point2 p, double eps = 1e-6) const;
    double area() const { return w * h; }
};

/// Canonical form: w >= h, theta in [0, 180); for squares theta in [0, 90).
OrientedRect canonical_rect(Point2 center, double extent_u, double extent_v, Point2 u_axis);

/// Minimum-area enclosing rectangle of the points' convex hull, found by
/// testing every hull edge direction. Equal areas resolve to the longer
/// rectangle, then to the smaller theta. Throws "degenerate polygon" for
/// collinear input.
OrientedRect min_rotated_rect(std::span<const Point2> points);
OrientedRect min_rotated_rect(const Polygon& p);

double estimate_theta(const OrientedRect& rect);

StrokeParams stroke_from_rect(const OrientedRect& rect, Rgb fill);

struct StrokePlan {
    SubRegion sub_region;
    OrientedRect rect;
    StrokeParams stroke;
};

/// One stroke when the polygon is no larger than delta, otherwise one per
/// sub-region of the grid decomposition, in row-major order.
std::vector<StrokePlan> plan_strokes(const Polygon& p, Rgb fill, const DecompositionConfig& cfg);

std::vector<StrokeParams> strokes_for_region(const Polygon& p, Rgb fill, const DecompositionConfig& cfg);

}  // namespace regionpaint
