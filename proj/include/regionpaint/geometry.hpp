#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace regionpaint {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
    friend Point2 operator*(double s, Point2 a) { return {a.x * s, a.y * s}; }
    friend Point2 operator/(Point2 a, double s) { return {a.x / s, a.y / s}; }
    friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Distance from `p` to the closed segment [a, b].
double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Integer pixel rectangle, half-open: [x0, x1) x [y0, y1).
struct PixelRect {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    bool empty() const { return x1 <= x0 || y1 <= y0; }
    bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
    friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

PixelRect intersect(const PixelRect& a, const PixelRect& b);

struct BoundingBox {
    Point2 min;
    Point2 max;
};

/// Closed polygon; the last vertex connects back to the first.
///
/// Orientation is measured with the shoelace sum on raw pixel coordinates
/// (x right, y down). A positive signed area is what `trace_contours` emits
/// for outer boundaries.
struct Polygon {
    std::vector<Point2> vertices;

    std::size_t size() const { return vertices.size(); }
    bool empty() const { return vertices.empty(); }
    const Point2& operator[](std::size_t i) const { return vertices[i]; }
};

double signed_area(std::span<const Point2> pts);
BoundingBox bounding_box(std::span<const Point2> pts);

/// Andrew's monotone chain. Returns hull vertices with positive signed
/// area, collinear points removed. Fewer than 3 points means degenerate.
std::vector<Point2> convex_hull(std::span<const Point2> pts);

/// Even-odd point containment.
bool point_in_polygon(Point2 p, std::span<const Point2> pts);

/// Rotates `p` about `center` by `degrees`, counterclockwise as seen on
/// screen (image y axis points down).
Point2 rotate_screen_ccw(Point2 p, Point2 center, double degrees);

constexpr double kPi = 3.14159265358979323846;
inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

}  // namespace regionpaint
