#include "regionpaint/curves.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "regionpaint/error.hpp"

namespace regionpaint {
namespace {

struct EllipseMap {
    double ratio = 1.0;
    double cos_a = 1.0;
    double sin_a = 0.0;

    Point2 to_frame(Point2 p) const {
        const Point2 r{p.x * cos_a + p.y * sin_a, -p.x * sin_a + p.y * cos_a};
        return {r.x, r.y / ratio};
    }
    Point2 from_frame(Point2 p) const {
        const Point2 s{p.x, p.y * ratio};
        return {s.x * cos_a - s.y * sin_a, s.x * sin_a + s.y * cos_a};
    }
};

EllipseMap ellipse_map(const CurveSegment& c) {
    if (c.kind() != CurveKind::EllipticalArc) return {};
    const double a = deg_to_rad(c.ellipse_angle());
    return {c.ellipse_ratio(), std::cos(a), std::sin(a)};
}

double wrap_positive(double a) {
    const double two_pi = 2.0 * kPi;
    a = std::fmod(a, two_pi);
    return a < 0.0 ? a + two_pi : a;
}

void flatten_bezier(std::span<const Point2> p, std::vector<Point2>& out, double tol, int depth) {
    const Point2 a = p.front();
    const Point2 b = p.back();
    double dev = 0.0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) dev = std::max(dev, point_segment_distance(p[i], a, b));
    if (dev <= tol || depth >= 24) {
        out.push_back(a);
        return;
    }
    // de Casteljau split at t = 0.5.
    std::array<Point2, 4> left{}, right{}, work{};
    const std::size_t n = p.size();
    std::copy(p.begin(), p.end(), work.begin());
    left[0] = work[0];
    right[n - 1] = work[n - 1];
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = 0; i + level < n; ++i) work[i] = (work[i] + work[i + 1]) * 0.5;
        left[level] = work[0];
        right[n - 1 - level] = work[n - 1 - level];
    }
    flatten_bezier(std::span<const Point2>(left.data(), n), out, tol, depth + 1);
    flatten_bezier(std::span<const Point2>(right.data(), n), out, tol, depth + 1);
}

}  // namespace

int control_point_count(CurveKind kind) {
    switch (kind) {
        case CurveKind::Line: return 2;
        case CurveKind::QuadraticBezier: return 3;
        case CurveKind::CubicBezier: return 4;
        case CurveKind::CircularArc: return 3;
        case CurveKind::EllipticalArc: return 3;
    }
    return 0;
}

std::string_view to_string(CurveKind kind) {
    switch (kind) {
        case CurveKind::Line: return "line";
        case CurveKind::QuadraticBezier: return "quadratic";
        case CurveKind::CubicBezier: return "cubic";
        case CurveKind::CircularArc: return "circular_arc";
        case CurveKind::EllipticalArc: return "elliptical_arc";
    }
    return "?";
}

CurveKind curve_kind_from_string(std::string_view name) {
    for (CurveKind k : {CurveKind::Line, CurveKind::QuadraticBezier, CurveKind::CubicBezier,
                        CurveKind::CircularArc, CurveKind::EllipticalArc})
        if (to_string(k) == name) return k;
    throw Error("unknown curve kind '" + std::string(name) + "'");
}

CurveSegment::CurveSegment(CurveKind kind, std::vector<Point2> control_points, double ellipse_ratio,
                           double ellipse_angle)
    : kind_(kind), points_(std::move(control_points)), ellipse_ratio_(ellipse_ratio),
      ellipse_angle_(ellipse_angle) {
    if (static_cast<int>(points_.size()) != control_point_count(kind))
        throw Error(std::string(to_string(kind)) + " needs " + std::to_string(control_point_count(kind)) +
                    " control points, got " + std::to_string(points_.size()));
    if (kind == CurveKind::EllipticalArc && !(ellipse_ratio > 0.0))
        throw Error("elliptical arc axis ratio must be positive");
}

ArcFrame arc_frame(const CurveSegment& arc) {
    const EllipseMap map = ellipse_map(arc);
    const Point2 a = map.to_frame(arc.control_points()[0]);
    const Point2 m = map.to_frame(arc.control_points()[1]);
    const Point2 b = map.to_frame(arc.control_points()[2]);
    ArcFrame f;
    const double d = 2.0 * cross(m - a, b - a);
    const double scale = std::max({norm(m - a), norm(b - a), 1e-12});
    if (std::abs(d) <= 1e-12 * scale * scale) {
        f.degenerate = true;
        return f;
    }
    // Circumcenter relative to a.
    const Point2 u = m - a;
    const Point2 v = b - a;
    const double uu = dot(u, u);
    const double vv = dot(v, v);
    const Point2 c{(v.y * uu - u.y * vv) / d, (u.x * vv - v.x * uu) / d};
    f.center = a + c;
    f.radius = norm(c);
    f.start_angle = std::atan2(a.y - f.center.y, a.x - f.center.x);
    const double to_mid = wrap_positive(std::atan2(m.y - f.center.y, m.x - f.center.x) - f.start_angle);
    const double to_end = wrap_positive(std::atan2(b.y - f.center.y, b.x - f.center.x) - f.start_angle);
    f.sweep = to_mid <= to_end ? to_end : to_end - 2.0 * kPi;
    return f;
}

Point2 CurveSegment::evaluate(double t) const {
    const auto& p = points_;
    const double s = 1.0 - t;
    switch (kind_) {
        case CurveKind::Line: return p[0] * s + p[1] * t;
        case CurveKind::QuadraticBezier: return p[0] * (s * s) + p[1] * (2 * s * t) + p[2] * (t * t);
        case CurveKind::CubicBezier:
            return p[0] * (s * s * s) + p[1] * (3 * s * s * t) + p[2] * (3 * s * t * t) + p[3] * (t * t * t);
        case CurveKind::CircularArc:
        case CurveKind::EllipticalArc: {
            const ArcFrame f = arc_frame(*this);
            if (f.degenerate) return t < 0.5 ? p[0] * (1 - 2 * t) + p[1] * (2 * t) : p[1] * (2 - 2 * t) + p[2] * (2 * t - 1);
            const double ang = f.start_angle + f.sweep * t;
            const Point2 q = f.center + Point2{std::cos(ang), std::sin(ang)} * f.radius;
            return ellipse_map(*this).from_frame(q);
        }
    }
    return p[0];
}

void CurveSegment::flatten_into(std::vector<Point2>& out, double tolerance) const {
    if (!(tolerance > 0.0)) throw Error("flatten tolerance must be positive");
    switch (kind_) {
        case CurveKind::Line: out.push_back(points_[0]); return;
        case CurveKind::QuadraticBezier:
        case CurveKind::CubicBezier: flatten_bezier(points_, out, tolerance, 0); return;
        case CurveKind::CircularArc:
        case CurveKind::EllipticalArc: {
            const ArcFrame f = arc_frame(*this);
            if (f.degenerate) {
                out.push_back(points_[0]);
                out.push_back(points_[1]);
                return;
            }
            const EllipseMap map = ellipse_map(*this);
            const double frame_tol = tolerance / std::max(1.0, ellipse_ratio_);
            double step = kPi / 2.0;
            if (frame_tol < f.radius) step = std::min(step, 2.0 * std::acos(1.0 - frame_tol / f.radius));
            const int n = std::max(1, static_cast<int>(std::ceil(std::abs(f.sweep) / step)));
            out.push_back(points_[0]);
            for (int i = 1; i < n; ++i) {
                const double ang = f.start_angle + f.sweep * i / n;
                out.push_back(map.from_frame(f.center + Point2{std::cos(ang), std::sin(ang)} * f.radius));
            }
            return;
        }
    }
}

bool is_closed(std::span<const CurveSegment> path, double eps) {
    if (path.empty()) return false;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const CurveSegment& next = path[(i + 1) % path.size()];
        if (distance(path[i].end(), next.start()) > eps) return false;
    }
    return true;
}

std::vector<Point2> flatten_path(std::span<const CurveSegment> path, double tolerance) {
    std::vector<Point2> pts;
    for (const CurveSegment& c : path) c.flatten_into(pts, tolerance);
    return pts;
}

}  // namespace regionpaint
