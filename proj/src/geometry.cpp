#include "regionpaint/geometry.hpp"

#include <algorithm>
#include <limits>

namespace regionpaint {

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + ab * t);
}

PixelRect intersect(const PixelRect& a, const PixelRect& b) {
    PixelRect r{std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1),
                std::min(a.y1, b.y1)};
    if (r.empty()) return {};
    return r;
}

double signed_area(std::span<const Point2> pts) {
    const std::size_t n = pts.size();
    if (n < 3) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = pts[i];
        const Point2& b = pts[(i + 1) % n];
        sum += a.x * b.y - b.x * a.y;
    }
    return 0.5 * sum;
}

BoundingBox bounding_box(std::span<const Point2> pts) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    BoundingBox box{{inf, inf}, {-inf, -inf}};
    for (const Point2& p : pts) {
        box.min.x = std::min(box.min.x, p.x);
        box.min.y = std::min(box.min.y, p.y);
        box.max.x = std::max(box.max.x, p.x);
        box.max.y = std::max(box.max.y, p.y);
    }
    return box;
}

std::vector<Point2> convex_hull(std::span<const Point2> input) {
    std::vector<Point2> pts(input.begin(), input.end());
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;

    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point2& p : pts) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], *it - hull[k - 2]) <= 0.0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

bool point_in_polygon(Point2 p, std::span<const Point2> pts) {
    bool inside = false;
    const std::size_t n = pts.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2& a = pts[i];
        const Point2& b = pts[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

Point2 rotate_screen_ccw(Point2 p, Point2 center, double degrees) {
    const double r = deg_to_rad(degrees);
    const double c = std::cos(r);
    const double s = std::sin(r);
    const Point2 d = p - center;
    // Screen CCW with y down is the mathematical clockwise rotation.
    return {center.x + d.x * c + d.y * s, center.y - d.x * s + d.y * c};
}

}  // namespace regionpaint
