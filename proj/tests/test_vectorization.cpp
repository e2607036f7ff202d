#include <doctest.h>

#include "regionpaint/error.hpp"
#include "regionpaint/vectorization.hpp"
#include "support.hpp"

using namespace regionpaint;
using namespace testsupport;

namespace {

double perimeter(const std::vector<Point2>& pts) {
    double len = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) len += distance(pts[i], pts[(i + 1) % pts.size()]);
    return len;
}

SegmentMask full_mask(int w, int h) { return SegmentMask::from_bitmap(Bitmap(w, h, 1), 0); }

template <typename Pred>
SegmentMask mask_where(int w, int h, Pred inside) {
    Bitmap b(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) b.at(x, y) = inside(x + 0.5, y + 0.5) ? 1 : 0;
    return SegmentMask::from_bitmap(b, 0);
}

// Closed polyline of a w x h rectangle sampled at unit steps.
std::vector<Point2> rect_polyline(double x0, double y0, int w, int h) {
    std::vector<Point2> p;
    for (int i = 0; i < w; ++i) p.push_back({x0 + i, y0});
    for (int i = 0; i < h; ++i) p.push_back({x0 + w, y0 + i});
    for (int i = 0; i < w; ++i) p.push_back({x0 + w - i, y0 + h});
    for (int i = 0; i < h; ++i) p.push_back({x0, y0 + h - i});
    return p;
}

void check_cardinality(const CurvePath& path) {
    for (const CurveSegment& c : path)
        CHECK(int(c.control_points().size()) == control_point_count(c.kind()));
}

double max_deviation(std::span<const Point2> pts, const CurvePath& path) {
    double worst = 0;
    for (const Point2& p : pts) worst = std::max(worst, distance_to_path(p, path));
    return worst;
}

}  // namespace

TEST_CASE("control point counts by kind") {
    CHECK(control_point_count(CurveKind::Line) == 2);
    CHECK(control_point_count(CurveKind::QuadraticBezier) == 3);
    CHECK(control_point_count(CurveKind::CubicBezier) == 4);
    CHECK(control_point_count(CurveKind::CircularArc) == 3);
    CHECK(control_point_count(CurveKind::EllipticalArc) == 3);
    CHECK_THROWS_AS(CurveSegment(CurveKind::CubicBezier, {{0, 0}, {1, 1}, {2, 0}}), Error);
    CHECK_THROWS_AS(CurveSegment(CurveKind::Line, {{0, 0}}), Error);
    for (CurveKind k : {CurveKind::Line, CurveKind::QuadraticBezier, CurveKind::CubicBezier, CurveKind::CircularArc,
                        CurveKind::EllipticalArc})
        CHECK(curve_kind_from_string(to_string(k)) == k);
}

TEST_CASE("quantize_segment_colors") {
    SUBCASE("solid segment gives one layer of that color") {
        const RgbImage img = solid(8, 8, {10, 20, 30});
        const auto layers = quantize_segment_colors(full_mask(8, 8), img, 4);
        REQUIRE(layers.size() == 1);
        CHECK(layers[0].color == Rgb{10, 20, 30});
        CHECK(layers[0].mask.area() == 64);
    }
    SUBCASE("two colors with k=2 match the exact-color partition") {
        RgbImage img = solid(8, 8, {200, 0, 0});
        paint_where(img, {0, 0, 200}, [](double x, double y) { return x + y > 8; });
        const auto layers = quantize_segment_colors(full_mask(8, 8), img, 2);
        REQUIRE(layers.size() == 2);
        const auto oracle = color_partition(img);
        for (const ColorLayer& l : layers) {
            const auto it = std::find_if(oracle.begin(), oracle.end(), [&](const auto& o) { return o.first == l.color; });
            REQUIRE(it != oracle.end());
            CHECK(l.mask.to_bitmap() == it->second);
        }
        CHECK(layers[0].mask.area() >= layers[1].mask.area());
    }
    SUBCASE("k=1 gives the rounded mean color") {
        RgbImage img = solid(4, 1, {0, 0, 0});
        put(img, 0, 0, {10, 100, 255});
        put(img, 1, 0, {11, 101, 0});
        put(img, 2, 0, {12, 0, 0});
        put(img, 3, 0, {13, 0, 0});
        const auto layers = quantize_segment_colors(full_mask(4, 1), img, 1);
        REQUIRE(layers.size() == 1);
        CHECK(layers[0].color == Rgb{12, 50, 64});  // 11.5, 50.25, 63.75 rounded
    }
    SUBCASE("k is clamped to the pixel count") {
        RgbImage img = solid(2, 1, {0, 0, 0});
        put(img, 1, 0, {255, 255, 255});
        CHECK(quantize_segment_colors(full_mask(2, 1), img, 8).size() == 2);
    }
    SUBCASE("many colors stay within k layers and cover every pixel") {
        RgbImage img(16, 16);
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x) put(img, x, y, {std::uint8_t(x * 16), std::uint8_t(y * 16), 77});
        const auto layers = quantize_segment_colors(full_mask(16, 16), img, 5);
        CHECK(layers.size() <= 5);
        std::size_t total = 0;
        for (const ColorLayer& l : layers) total += l.mask.area();
        CHECK(total == 256);
    }
}

TEST_CASE("trace_contours") {
    SUBCASE("single pixel") {
        Bitmap b(8, 8);
        b.at(3, 3) = 1;
        const auto cs = trace_contours(b);
        REQUIRE(cs.size() == 1);
        CHECK(perimeter(cs[0].points) == doctest::Approx(4.0));
        CHECK(signed_area(cs[0].points) == doctest::Approx(1.0));
        for (const Point2& p : cs[0].points) {
            CHECK(p.x >= 3.0);
            CHECK(p.x <= 4.0);
            CHECK(p.y >= 3.0);
            CHECK(p.y <= 4.0);
        }
    }
    SUBCASE("filled 4x4 square") {
        Bitmap b(6, 6);
        for (int y = 1; y < 5; ++y)
            for (int x = 1; x < 5; ++x) b.at(x, y) = 1;
        const auto cs = trace_contours(b);
        REQUIRE(cs.size() == 1);
        CHECK(perimeter(cs[0].points) == doctest::Approx(16.0));
        CHECK(signed_area(cs[0].points) == doctest::Approx(16.0));
    }
    SUBCASE("5x5 with a center hole has opposite orientations") {
        Bitmap b(5, 5, 1);
        b.at(2, 2) = 0;
        const auto cs = trace_contours(b);
        REQUIRE(cs.size() == 2);
        const auto outer = std::find_if(cs.begin(), cs.end(), [](const auto& c) { return !c.hole; });
        const auto hole = std::find_if(cs.begin(), cs.end(), [](const auto& c) { return c.hole; });
        REQUIRE(outer != cs.end());
        REQUIRE(hole != cs.end());
        CHECK(signed_area(outer->points) == doctest::Approx(25.0));
        CHECK(signed_area(hole->points) == doctest::Approx(-1.0));
    }
    SUBCASE("origin offsets vertices") {
        Bitmap b(1, 1, 1);
        const auto cs = trace_contours(b, {10, 20});
        REQUIRE(cs.size() == 1);
        const BoundingBox bb = bounding_box(cs[0].points);
        CHECK(bb.min.x == 10.0);
        CHECK(bb.min.y == 20.0);
    }
    SUBCASE("diagonal pixels are separate components") {
        Bitmap b(3, 3);
        b.at(0, 0) = 1;
        b.at(1, 1) = 1;
        const auto cs = trace_contours(b);
        CHECK(cs.size() == 2);
    }
}

TEST_CASE("fit_curves") {
    TraceConfig cfg;
    SUBCASE("axis-aligned rectangle gives four lines") {
        const auto poly = rect_polyline(2, 3, 10, 6);
        const CurvePath path = fit_curves(poly, cfg);
        REQUIRE(path.size() == 4);
        for (const CurveSegment& c : path) CHECK(c.kind() == CurveKind::Line);
        CHECK(is_closed(path));
        CHECK(max_deviation(poly, path) <= 1e-9);
    }
    SUBCASE("semicircle within 0.5 px uses at most two cubics") {
        cfg.fit_tolerance = 0.5;
        std::vector<Point2> poly;
        const double r = 40;
        for (int i = 0; i < 64; ++i) {
            const double a = kPi * i / 63.0;
            poly.push_back({50 + r * std::cos(a), 50 + r * std::sin(a)});
        }
        const CurvePath path = fit_curves(poly, cfg);
        int cubics = 0;
        for (const CurveSegment& c : path) cubics += c.kind() == CurveKind::CubicBezier;
        CHECK(cubics >= 1);
        CHECK(cubics <= 2);
        CHECK(max_deviation(poly, path) <= 0.5);
        CHECK(is_closed(path));
        check_cardinality(path);
    }
    SUBCASE("collinear run becomes one line with the run's endpoints") {
        std::vector<Point2> poly;
        for (int i = 0; i <= 20; ++i) poly.push_back({double(i), 0.0});
        poly.push_back({10.0, 15.0});
        const CurvePath path = fit_curves(poly, cfg);
        const auto it = std::find_if(path.begin(), path.end(), [](const CurveSegment& c) {
            return c.kind() == CurveKind::Line && c.start().y == 0.0 && c.end().y == 0.0;
        });
        REQUIRE(it != path.end());
        CHECK(std::min(it->start().x, it->end().x) == 0.0);
        CHECK(std::max(it->start().x, it->end().x) == 20.0);
    }
    SUBCASE("degenerate contour is rejected") {
        const std::vector<Point2> flat = {{0, 0}, {5, 0}, {10, 0}};
        CHECK_THROWS_WITH_AS(fit_curves(flat, cfg), doctest::Contains("degenerate contour"), Error);
    }
    SUBCASE("random smooth contours stay within tolerance") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> amp(0.0, 6.0), phase(0, 2 * kPi);
        for (int trial = 0; trial < 10; ++trial) {
            const double a1 = amp(rng), a2 = amp(rng), p1 = phase(rng), p2 = phase(rng);
            std::vector<Point2> poly;
            for (int i = 0; i < 120; ++i) {
                const double t = 2 * kPi * i / 120.0;
                const double r = 40 + a1 * std::sin(2 * t + p1) + a2 * std::cos(3 * t + p2);
                poly.push_back({64 + r * std::cos(t), 64 + r * std::sin(t)});
            }
            const CurvePath path = fit_curves(poly, cfg);
            CHECK(max_deviation(poly, path) <= cfg.fit_tolerance);
            CHECK(is_closed(path));
            check_cardinality(path);
        }
    }
}

TEST_CASE("flattening") {
    SUBCASE("quadratic passes near its midpoint") {
        const CurveSegment q = CurveSegment::quadratic({0, 0}, {1, 2}, {2, 0});
        CHECK(q.evaluate(0.5) == Point2{1, 1});
        const double tol = 0.01;
        std::vector<Point2> pts;
        q.flatten_into(pts, tol);
        pts.push_back(q.end());
        double best = 1e9;
        for (std::size_t i = 1; i < pts.size(); ++i) best = std::min(best, point_segment_distance({1, 1}, pts[i - 1], pts[i]));
        CHECK(best <= tol);
    }
    SUBCASE("quarter circle radial deviation") {
        const double r = 10, tol = 0.1;
        const CurveSegment arc(CurveKind::CircularArc,
                               {{r, 0}, {r * std::cos(kPi / 4), r * std::sin(kPi / 4)}, {0, r}});
        std::vector<Point2> pts;
        arc.flatten_into(pts, tol);
        pts.push_back(arc.end());
        REQUIRE(pts.size() >= 3);
        double worst = 0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            for (int k = 0; k <= 100; ++k) {
                const Point2 v = pts[i - 1] + (pts[i] - pts[i - 1]) * (k / 100.0);
                worst = std::max(worst, std::abs(norm(v) - r));
            }
        CHECK(worst <= tol);
    }
    SUBCASE("elliptical arc flattens within tolerance") {
        // Ellipse with semi-axes 20 and 10 rotated by 30 degrees.
        const double ang = deg_to_rad(30.0);
        auto on = [&](double t) {
            const Point2 q{20 * std::cos(t), 10 * std::sin(t)};
            return Point2{q.x * std::cos(ang) - q.y * std::sin(ang), q.x * std::sin(ang) + q.y * std::cos(ang)};
        };
        const CurveSegment arc(CurveKind::EllipticalArc, {on(0.0), on(1.0), on(2.0)}, 0.5, 30.0);
        CHECK(distance(arc.evaluate(0.5), on(1.0)) < 1e-9);
        std::vector<Point2> pts;
        arc.flatten_into(pts, 0.05);
        pts.push_back(arc.end());
        for (std::size_t i = 1; i < pts.size(); ++i) {
            const Point2 mid = (pts[i - 1] + pts[i]) * 0.5;
            double best = 1e9;
            for (int k = 0; k <= 4000; ++k) best = std::min(best, distance(mid, on(2.0 * k / 4000.0)));
            CHECK(best <= 0.05 + 1e-3);
        }
    }
    SUBCASE("all-line region flattens to its vertices") {
        VectorRegion r;
        const std::vector<Point2> v = {{0, 0}, {5, 0}, {5, 3}, {0, 3}};
        for (std::size_t i = 0; i < v.size(); ++i) r.path.push_back(CurveSegment::line(v[i], v[(i + 1) % v.size()]));
        CHECK(flatten_to_polygon(r, 0.25).vertices == v);
    }
}

TEST_CASE("rasterize_region") {
    auto square_region = [](double x0, double y0, double s) {
        VectorRegion r;
        const std::vector<Point2> v = {{x0, y0}, {x0 + s, y0}, {x0 + s, y0 + s}, {x0, y0 + s}};
        for (std::size_t i = 0; i < 4; ++i) r.path.push_back(CurveSegment::line(v[i], v[(i + 1) % 4]));
        return r;
    };
    SUBCASE("10x10 square covers 100 pixels") {
        CHECK(count_set(rasterize_region(square_region(3, 4, 10), 20, 20)) == 100);
    }
    SUBCASE("hole is subtracted") {
        VectorRegion r = square_region(0, 0, 10);
        r.holes.push_back(square_region(3, 3, 4).path);
        CHECK(count_set(rasterize_region(r, 12, 12)) == 100 - 16);
    }
    SUBCASE("fitted circle of radius 20") {
        const RgbImage img = solid(64, 64, {5, 5, 5});
        const SegmentMask disc = mask_where(64, 64, [](double x, double y) { return std::hypot(x - 32, y - 32) < 20; });
        const auto regions = vectorize_segment(disc, img, TraceConfig{});
        REQUIRE(regions.size() == 1);
        const double area = double(count_set(rasterize_region(regions[0], 64, 64)));
        CHECK(std::abs(area - kPi * 400) <= 0.03 * kPi * 400);
    }
}

TEST_CASE("vectorize_segment") {
    SUBCASE("solid square") {
        RgbImage img = solid(32, 32, {0, 0, 0});
        paint_where(img, {90, 30, 200}, [](double x, double y) { return x > 8 && x < 24 && y > 4 && y < 20; });
        const SegmentMask sq = mask_where(32, 32, [](double x, double y) { return x > 8 && x < 24 && y > 4 && y < 20; });
        const auto regions = vectorize_segment(sq, img, TraceConfig{});
        REQUIRE(regions.size() == 1);
        CHECK(regions[0].path.size() == 4);
        for (const CurveSegment& c : regions[0].path) CHECK(c.kind() == CurveKind::Line);
        CHECK(regions[0].fill == Rgb{90, 30, 200});
        CHECK(regions[0].area == doctest::Approx(256.0));
        CHECK(regions[0].centroid.x == doctest::Approx(16.0));
        CHECK(regions[0].centroid.y == doctest::Approx(12.0));
    }
    SUBCASE("two-color segment") {
        RgbImage img = solid(40, 40, {250, 250, 0});
        paint_where(img, {0, 120, 0}, [](double x, double y) { return std::hypot(x - 20, y - 20) < 10; });
        const auto regions = vectorize_segment(full_mask(40, 40), img, TraceConfig{});
        REQUIRE(regions.size() >= 2);
        CHECK(regions[0].fill == Rgb{250, 250, 0});
        CHECK(regions[0].holes.size() == 1);
        CHECK(std::any_of(regions.begin(), regions.end(), [](const auto& r) { return r.fill == Rgb{0, 120, 0}; }));
        for (std::size_t i = 1; i < regions.size(); ++i) CHECK(regions[i - 1].area >= regions[i].area);
    }
    SUBCASE("entire uniform image") {
        const auto regions = vectorize_segment(full_mask(24, 16), solid(24, 16, {1, 2, 3}), TraceConfig{});
        REQUIRE(regions.size() == 1);
        CHECK(count_set(rasterize_region(regions[0], 24, 16)) == 24 * 16);
    }
}

TEST_CASE("vector regions round trip a flat-art segmentation") {
    const RgbImage img = four_region_image(128);
    const auto segs = extract_segments(img, SegmentationConfig{});
    const TraceConfig cfg;
    for (const SegmentMask& seg : segs) {
        const auto regions = vectorize_segment(seg, img, cfg);
        Bitmap covered(128, 128);
        for (const VectorRegion& r : regions) {
            CHECK(r.source_segment_id == seg.id());
            CHECK(is_closed(r.path));
            check_cardinality(r.path);
            const Bitmap m = rasterize_region(r, 128, 128);
            for (std::size_t i = 0; i < m.data().size(); ++i) covered.data()[i] |= m.data()[i];
            const Polygon poly = flatten_to_polygon(r, cfg.flatten_tolerance);
            for (const Point2& p : poly.vertices) {
                CHECK(p.x >= seg.bbox().x0 - cfg.fit_tolerance);
                CHECK(p.x <= seg.bbox().x1 + cfg.fit_tolerance);
                CHECK(p.y >= seg.bbox().y0 - cfg.fit_tolerance);
                CHECK(p.y <= seg.bbox().y1 + cfg.fit_tolerance);
            }
        }
        std::size_t hit = 0, spill = 0;
        for (int y = 0; y < 128; ++y)
            for (int x = 0; x < 128; ++x) {
                if (!covered.at(x, y)) continue;
                if (seg.contains(x, y)) ++hit;
                else ++spill;
            }
        CHECK(double(hit) >= 0.95 * seg.area());
        CHECK(double(spill) <= 0.05 * seg.area());
    }
}

TEST_CASE("region metrics subtract holes") {
    VectorRegion r;
    const std::vector<Point2> o = {{0, 0}, {10, 0}, {10, 10}, {0, 10}};
    const std::vector<Point2> h = {{0, 0}, {0, 5}, {5, 5}, {5, 0}};
    for (std::size_t i = 0; i < 4; ++i) r.path.push_back(CurveSegment::line(o[i], o[(i + 1) % 4]));
    CurvePath hole;
    for (std::size_t i = 0; i < 4; ++i) hole.push_back(CurveSegment::line(h[i], h[(i + 1) % 4]));
    r.holes.push_back(hole);
    update_region_metrics(r, 0.25);
    CHECK(r.area == doctest::Approx(75.0));
    // (100 * (5,5) - 25 * (2.5,2.5)) / 75
    CHECK(r.centroid.x == doctest::Approx(35.0 / 6.0));
    CHECK(r.centroid.y == doctest::Approx(35.0 / 6.0));
}
