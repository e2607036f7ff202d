#include "regionpaint/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "regionpaint/error.hpp"

namespace regionpaint {
namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string pt(Point2 p) { return num(p.x) + " " + num(p.y); }

std::string hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

void append_arc(std::ostringstream& d, const CurveSegment& c) {
    const ArcFrame f = arc_frame(c);
    const auto& p = c.control_points();
    if (f.degenerate) {
        d << " L " << pt(p[1]) << " L " << pt(p[2]);
        return;
    }
    const bool elliptical = c.kind() == CurveKind::EllipticalArc;
    const double rx = f.radius;
    const double ry = elliptical ? f.radius * c.ellipse_ratio() : f.radius;
    const double rot = elliptical ? c.ellipse_angle() : 0.0;
    // Split into two halves so a full-circle sweep stays representable.
    const Point2 half = c.evaluate(0.5);
    const int large = 0;
    const int sweep = f.sweep > 0 ? 1 : 0;
    for (const Point2& target : {half, p[2]})
        d << " A " << num(rx) << " " << num(ry) << " " << num(rot) << " " << large << " " << sweep << " " << pt(target);
}

}  // namespace

std::string svg_path_data(const CurvePath& path) {
    if (path.empty()) return {};
    std::ostringstream d;
    d << "M " << pt(path.front().start());
    for (const CurveSegment& c : path) {
        const auto& p = c.control_points();
        switch (c.kind()) {
            case CurveKind::Line: d << " L " << pt(p[1]); break;
            case CurveKind::QuadraticBezier: d << " Q " << pt(p[1]) << " " << pt(p[2]); break;
            case CurveKind::CubicBezier: d << " C " << pt(p[1]) << " " << pt(p[2]) << " " << pt(p[3]); break;
            case CurveKind::CircularArc:
            case CurveKind::EllipticalArc: append_arc(d, c); break;
        }
    }
    d << " Z";
    return d.str();
}

std::string regions_to_svg(const StrokeProgram& program) {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << program.width << "\" height=\"" << program.height
      << "\" viewBox=\"0 0 " << program.width << " " << program.height << "\">\n";
    bool open = false;
    int current = 0;
    for (const RegionRecord& r : program.regions) {
        if (!open || r.segment_id != current) {
            if (open) s << "</g>\n";
            s << "<g id=\"segment-" << r.segment_id << "\">\n";
            open = true;
            current = r.segment_id;
        }
        std::string d = svg_path_data(r.path);
        for (const CurvePath& h : r.holes) d += " " + svg_path_data(h);
        s << "  <path id=\"region-" << r.id << "\" fill=\"" << hex(r.fill) << "\" fill-rule=\"evenodd\" d=\"" << d
          << "\"/>\n";
    }
    if (open) s << "</g>\n";
    s << "</svg>\n";
    return s.str();
}

void write_svg(const std::filesystem::path& path, const StrokeProgram& program) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << regions_to_svg(program);
}

}  // namespace regionpaint
