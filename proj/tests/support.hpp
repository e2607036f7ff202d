#pragma once

// Shared fixtures and oracles for the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "regionpaint/curves.hpp"
#include "regionpaint/geometry.hpp"
#include "regionpaint/raster.hpp"
#include "regionpaint/segmentation.hpp"

namespace testsupport {

using namespace regionpaint;

inline RgbImage solid(int w, int h, Rgb c) {
    RgbImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            std::uint8_t* p = img.pixel(x, y);
            p[0] = c.r;
            p[1] = c.g;
            p[2] = c.b;
        }
    return img;
}

inline void put(RgbImage& img, int x, int y, Rgb c) {
    std::uint8_t* p = img.pixel(x, y);
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
}

template <typename Pred>
void paint_where(RgbImage& img, Rgb c, Pred inside) {
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (inside(x + 0.5, y + 0.5)) put(img, x, y, c);
}

/// Beige background, blue rectangle, red disc, green triangle.
inline RgbImage four_region_image(int size = 256) {
    const double s = size / 256.0;
    RgbImage img = solid(size, size, {230, 220, 190});
    paint_where(img, {40, 70, 200}, [&](double x, double y) {
        return x >= 24 * s && x < 120 * s && y >= 28 * s && y < 110 * s;
    });
    paint_where(img, {210, 40, 40}, [&](double x, double y) {
        return std::hypot(x - 180 * s, y - 80 * s) < 48 * s;
    });
    const std::vector<Point2> tri = {{60 * s, 230 * s}, {200 * s, 236 * s}, {130 * s, 140 * s}};
    paint_where(img, {40, 160, 60}, [&](double x, double y) { return point_in_polygon({x, y}, tri); });
    return img;
}

/// Exact-color partition: one full-image bitmap per distinct color.
inline std::vector<std::pair<Rgb, Bitmap>> color_partition(const RgbImage& img) {
    std::vector<std::pair<Rgb, Bitmap>> out;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const Rgb c = rgb_at(img, x, y);
            auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == c; });
            if (it == out.end()) {
                out.push_back({c, Bitmap(img.width(), img.height())});
                it = out.end() - 1;
            }
            it->second.at(x, y) = 1;
        }
    return out;
}

/// Distance from p to a curve, by dense sampling plus segment distance.
inline double distance_to_curve(Point2 p, const CurveSegment& c, int samples = 2000) {
    double best = std::numeric_limits<double>::infinity();
    Point2 prev = c.evaluate(0.0);
    for (int i = 1; i <= samples; ++i) {
        const Point2 q = c.evaluate(double(i) / samples);
        best = std::min(best, point_segment_distance(p, prev, q));
        prev = q;
    }
    return best;
}

inline double distance_to_path(Point2 p, std::span<const CurveSegment> path, int samples = 2000) {
    double best = std::numeric_limits<double>::infinity();
    for (const CurveSegment& c : path) best = std::min(best, distance_to_curve(p, c, samples));
    return best;
}

/// Area of the minimum rectangle at orientation `deg` enclosing `pts`.
inline double rect_area_at(std::span<const Point2> pts, double deg) {
    const double a = deg_to_rad(deg);
    const Point2 u{std::cos(a), std::sin(a)};
    const Point2 v{-std::sin(a), std::cos(a)};
    double u0 = 1e300, u1 = -1e300, v0 = 1e300, v1 = -1e300;
    for (const Point2& p : pts) {
        u0 = std::min(u0, dot(p, u));
        u1 = std::max(u1, dot(p, u));
        v0 = std::min(v0, dot(p, v));
        v1 = std::max(v1, dot(p, v));
    }
    return (u1 - u0) * (v1 - v0);
}

/// Brute-force minimum over orientations in [0, 90) at `step` degrees.
inline double brute_min_rect_area(std::span<const Point2> pts, double step = 0.01) {
    double best = std::numeric_limits<double>::infinity();
    const int n = int(std::lround(90.0 / step));
    for (int i = 0; i < n; ++i) best = std::min(best, rect_area_at(pts, i * step));
    return best;
}

/// Star-shaped random polygon: sorted angles, random radii. Simple by construction.
inline std::vector<Point2> random_star_polygon(std::mt19937_64& rng, int n, Point2 c, double rmin, double rmax) {
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi), rad(rmin, rmax);
    std::vector<double> angles(n);
    for (double& a : angles) a = ang(rng);
    std::sort(angles.begin(), angles.end());
    // Keep angles distinct so no two vertices share a ray.
    for (int i = 1; i < n; ++i)
        if (angles[i] - angles[i - 1] < 1e-3) angles[i] = angles[i - 1] + 1e-3;
    std::vector<Point2> pts;
    for (double a : angles) {
        const double r = rad(rng);
        pts.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
    }
    if (signed_area(pts) < 0) std::reverse(pts.begin(), pts.end());
    return pts;
}

inline double path_length_brute(std::span<const Point2> pts) {
    std::vector<std::size_t> perm(pts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    double best = std::numeric_limits<double>::infinity();
    do {
        double len = 0;
        for (std::size_t i = 1; i < perm.size(); ++i) len += distance(pts[perm[i - 1]], pts[perm[i]]);
        best = std::min(best, len);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("regionpaint_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testsupport
