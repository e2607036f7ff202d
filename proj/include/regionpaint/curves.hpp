#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "regionpaint/geometry.hpp"

namespace regionpaint {

enum class CurveKind { Line, QuadraticBezier, CubicBezier, CircularArc, EllipticalArc };

/// 2 / 3 / 4 / 3 / 3.
int control_point_count(CurveKind kind);
std::string_view to_string(CurveKind kind);
CurveKind curve_kind_from_string(std::string_view name);

/// A typed path piece in image pixel coordinates.
///
/// Arcs are stored as (start, a point on the arc, end). A circular arc is the
/// unique circle through the three points, traversed from start through the
/// middle point to end. An elliptical arc is the same construction performed
/// in the frame where the ellipse becomes a circle: rotate by -ellipse_angle
/// (degrees, measured like every other angle in raw pixel coordinates) and
/// divide the rotated y by ellipse_ratio (minor/major axis ratio).
class CurveSegment {
  public:
    CurveSegment(CurveKind kind, std::vector<Point2> control_points, double ellipse_ratio = 1.0,
                 double ellipse_angle = 0.0);

    static CurveSegment line(Point2 a, Point2 b) { return {CurveKind::Line, {a, b}}; }
    static CurveSegment quadratic(Point2 a, Point2 c, Point2 b) {
        return {CurveKind::QuadraticBezier, {a, c, b}};
    }
    static CurveSegment cubic(Point2 a, Point2 c1, Point2 c2, Point2 b) {
        return {CurveKind::CubicBezier, {a, c1, c2, b}};
    }

    CurveKind kind() const { return kind_; }
    const std::vector<Point2>& control_points() const { return points_; }
    Point2 start() const { return points_.front(); }
    Point2 end() const { return points_.back(); }
    double ellipse_ratio() const { return ellipse_ratio_; }
    double ellipse_angle() const { return ellipse_angle_; }

    /// Point at parameter t in [0, 1].
    Point2 evaluate(double t) const;

    /// Appends a polyline approximation whose chords stay within `tolerance`
    /// of the curve. The start point is appended; the end point is not.
    void flatten_into(std::vector<Point2>& out, double tolerance) const;

    friend bool operator==(const CurveSegment&, const CurveSegment&) = default;

  private:
    CurveKind kind_;
    std::vector<Point2> points_;
    double ellipse_ratio_ = 1.0;
    double ellipse_angle_ = 0.0;
};

using CurvePath = std::vector<CurveSegment>;

/// True when consecutive segments join and the last end meets the first start.
bool is_closed(std::span<const CurveSegment> path, double eps = 1e-6);

/// Flattens a closed path into polygon vertices (no repeated closing vertex).
std::vector<Point2> flatten_path(std::span<const CurveSegment> path, double tolerance);

/// Circle through start/mid/end of an arc, in the arc's circle frame.
struct ArcFrame {
    Point2 center;
    double radius = 0.0;
    double start_angle = 0.0;  // radians, atan2 in raw coordinates
    double sweep = 0.0;        // signed radians
    bool degenerate = false;   // collinear control points: a straight segment
};
ArcFrame arc_frame(const CurveSegment& arc);

}  // namespace regionpaint
