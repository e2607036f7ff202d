#include <doctest.h>

#include <map>
#include <set>

#include "regionpaint/error.hpp"
#include "regionpaint/stroke_geometry.hpp"
#include "support.hpp"

using namespace regionpaint;
using namespace testsupport;

namespace {

Polygon rect_poly(double x0, double y0, double w, double h) {
    return Polygon{{{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + h}, {x0, y0 + h}}};
}

Polygon rotated(const Polygon& p, Point2 c, double deg) {
    Polygon out;
    for (const Point2& v : p.vertices) out.vertices.push_back(rotate_screen_ccw(v, c, deg));
    return out;
}

Polygon circle_poly(Point2 c, double r, int n) {
    Polygon p;
    for (int i = 0; i < n; ++i) {
        const double a = 2 * kPi * i / n;
        p.vertices.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
    }
    return p;
}

double angle_diff_mod180(double a, double b) {
    double d = std::fmod(a - b, 180.0);
    if (d < 0) d += 180.0;
    return std::min(d, 180.0 - d);
}

DecompositionConfig deco(double delta, double p_grid, int p_group) {
    DecompositionConfig c;
    c.delta = delta;
    c.p_grid = p_grid;
    c.p_group = p_group;
    return c;
}

std::vector<GridCell> cells_of(const Polygon& p, double g) { return grid_decompose(p, deco(1.0, g, 0)); }

}  // namespace

TEST_CASE("polygon_area") {
    CHECK(polygon_area(rect_poly(0, 0, 1, 1)) == 1.0);
    CHECK(polygon_area(Polygon{{{0, 0}, {4, 0}, {0, 3}}}) == 6.0);
    CHECK(polygon_area(Polygon{{{0, 0}, {0, 3}, {4, 0}}}) == 6.0);

    SUBCASE("random 10-gon matches a Monte-Carlo estimate") {
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 3; ++trial) {
            const auto pts = random_star_polygon(rng, 10, {50, 50}, 15, 45);
            const BoundingBox bb = bounding_box(pts);
            std::uniform_real_distribution<double> ux(bb.min.x, bb.max.x), uy(bb.min.y, bb.max.y);
            const int n = 1000000;
            int hits = 0;
            for (int i = 0; i < n; ++i) hits += point_in_polygon({ux(rng), uy(rng)}, pts);
            const double mc = double(hits) / n * (bb.max.x - bb.min.x) * (bb.max.y - bb.min.y);
            CHECK(std::abs(polygon_area(Polygon{pts}) - mc) <= 0.005 * mc);
        }
    }
}

TEST_CASE("grid_decompose") {
    SUBCASE("10x10 square, cell 5") {
        const auto cells = cells_of(rect_poly(3, 7, 10, 10), 5);
        REQUIRE(cells.size() == 4);
        for (const GridCell& c : cells) CHECK(polygon_area(c.polygon) == doctest::Approx(25.0));
        CHECK(cells[0].row == 0);
        CHECK(cells[0].col == 0);
        CHECK(cells[1].col == 1);
        CHECK(cells[2].row == 1);
    }
    SUBCASE("grid larger than the polygon") {
        const Polygon sq = rect_poly(0, 0, 10, 10);
        const auto cells = cells_of(sq, 20);
        REQUIRE(cells.size() == 1);
        CHECK(polygon_area(cells[0].polygon) == doctest::Approx(100.0));
        for (const Point2& v : cells[0].polygon.vertices)
            CHECK(std::find(sq.vertices.begin(), sq.vertices.end(), v) != sq.vertices.end());
    }
    SUBCASE("area is conserved for circles and random polygons") {
        const Polygon circle = circle_poly({40, 40}, 30, 90);
        for (double g : {3.0, 7.5, 11.0, 40.0}) {
            double sum = 0;
            for (const GridCell& c : cells_of(circle, g)) sum += polygon_area(c.polygon);
            CHECK(std::abs(sum - polygon_area(circle)) <= 1e-6 * polygon_area(circle));
        }
        std::mt19937_64 rng(8);
        for (int trial = 0; trial < 40; ++trial) {
            const Polygon p{random_star_polygon(rng, 5 + trial % 30, {60, 60}, 5, 55)};
            double sum = 0;
            const auto cells = cells_of(p, 4.0 + trial % 9);
            for (const GridCell& c : cells) {
                sum += polygon_area(c.polygon);
                CHECK(signed_area(c.polygon.vertices) > 0);
            }
            CHECK(std::abs(sum - polygon_area(p)) <= 1e-6 * polygon_area(p));
        }
    }
    SUBCASE("a concave polygon can yield several pieces in one cell") {
        // Arch: the lower grid row cuts through both legs.
        const Polygon u{{{0, 0}, {10, 0}, {10, 20}, {7, 20}, {7, 3}, {3, 3}, {3, 20}, {0, 20}}};
        const auto cells = cells_of(u, 10.0);
        double sum = 0;
        std::map<std::pair<int, int>, int> per_cell;
        for (const GridCell& c : cells) {
            sum += polygon_area(c.polygon);
            ++per_cell[{c.row, c.col}];
        }
        CHECK(sum == doctest::Approx(polygon_area(u)));
        CHECK(per_cell[{0, 0}] == 1);
        CHECK(per_cell[{1, 0}] == 2);
    }
}

TEST_CASE("group_cells") {
    SUBCASE("p_group equal to the cell count is the identity") {
        const auto cells = cells_of(rect_poly(0, 0, 10, 10), 5);
        const auto groups = group_cells(cells, 4);
        REQUIRE(groups.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) CHECK(groups[i].cell_indices == std::vector<int>{int(i)});
    }
    SUBCASE("four cells in a row, two groups of two") {
        const auto cells = cells_of(rect_poly(0, 0, 20, 5), 5);
        REQUIRE(cells.size() == 4);
        const auto groups = group_cells(cells, 2);
        REQUIRE(groups.size() == 2);
        CHECK(groups[0].cell_indices == std::vector<int>{0, 1});
        CHECK(groups[1].cell_indices == std::vector<int>{2, 3});
        CHECK(groups[0].area == doctest::Approx(50.0));
    }
    SUBCASE("one cell, many groups") {
        const auto cells = cells_of(rect_poly(0, 0, 3, 3), 5);
        REQUIRE(cells.size() == 1);
        CHECK(group_cells(cells, 8).size() == 1);
    }
    SUBCASE("groups partition the cells and are contiguous") {
        const Polygon circle = circle_poly({50, 50}, 45, 64);
        const auto cells = cells_of(circle, 9);
        for (int p : {1, 3, 7, 16}) {
            const auto groups = group_cells(cells, p);
            CHECK(int(groups.size()) == std::min<int>(p, int(cells.size())));
            std::set<int> all;
            double area = 0;
            for (const SubRegion& g : groups) {
                area += g.area;
                for (int i : g.cell_indices) CHECK(all.insert(i).second);
                // Grid-adjacency connectivity inside each group.
                std::set<int> reached = {g.cell_indices.front()};
                bool grew = true;
                while (grew) {
                    grew = false;
                    for (int i : g.cell_indices)
                        if (!reached.count(i))
                            for (int j : reached)
                                if (std::abs(cells[i].row - cells[j].row) + std::abs(cells[i].col - cells[j].col) <= 1) {
                                    reached.insert(i);
                                    grew = true;
                                    break;
                                }
                }
                CHECK(reached.size() == g.cell_indices.size());
            }
            CHECK(all.size() == cells.size());
            CHECK(area == doctest::Approx(polygon_area(circle)));
            for (std::size_t i = 1; i < groups.size(); ++i)
                CHECK(groups[i - 1].cell_indices.front() < groups[i].cell_indices.front());
        }
    }
}

TEST_CASE("min_rotated_rect") {
    SUBCASE("axis-aligned 4x2") {
        const OrientedRect r = min_rotated_rect(rect_poly(1, 1, 4, 2));
        CHECK(r.center.x == doctest::Approx(3.0));
        CHECK(r.center.y == doctest::Approx(2.0));
        CHECK(r.w == doctest::Approx(4.0));
        CHECK(r.h == doctest::Approx(2.0));
        CHECK(r.theta == 0.0);
        CHECK(estimate_theta(r) == 0.0);
    }
    SUBCASE("the same rectangle rotated by 30 degrees") {
        const OrientedRect r = min_rotated_rect(rotated(rect_poly(1, 1, 4, 2), {3, 2}, 30.0));
        CHECK(r.w == doctest::Approx(4.0).epsilon(1e-9));
        CHECK(r.h == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(std::abs(r.theta - 30.0) <= 1e-6);
        CHECK(std::abs(estimate_theta(r) - 30.0) <= 1e-6);
    }
    SUBCASE("a tall rectangle is reported with w along its long side") {
        const OrientedRect r = min_rotated_rect(rect_poly(0, 0, 2, 5));
        CHECK(r.w == doctest::Approx(5.0));
        CHECK(r.h == doctest::Approx(2.0));
        CHECK(r.theta == doctest::Approx(90.0));
    }
    SUBCASE("squares break the tie toward the smaller angle") {
        const Polygon sq = rotated(rect_poly(0, 0, 10, 10), {5, 5}, 45.0);
        const OrientedRect a = min_rotated_rect(sq);
        CHECK(a.theta >= 0.0);
        CHECK(a.theta < 90.0);
        CHECK(a.theta == doctest::Approx(45.0));
        Polygon shifted = sq;
        std::rotate(shifted.vertices.begin(), shifted.vertices.begin() + 1, shifted.vertices.end());
        CHECK(min_rotated_rect(shifted).theta == a.theta);
        CHECK(min_rotated_rect(rect_poly(0, 0, 7, 7)).theta == 0.0);
    }
    SUBCASE("collinear input is degenerate") {
        const std::vector<Point2> line = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
        CHECK_THROWS_WITH_AS(min_rotated_rect(line), "degenerate polygon", Error);
    }
    SUBCASE("random convex 12-gons match the angle sweep") {
        std::mt19937_64 rng(12);
        for (int trial = 0; trial < 5; ++trial) {
            const auto hull = convex_hull(random_star_polygon(rng, 12, {0, 0}, 20, 30));
            const OrientedRect r = min_rotated_rect(hull);
            const double sweep = brute_min_rect_area(hull);
            CHECK(r.area() <= sweep * (1 + 1e-9));
            CHECK(std::abs(r.area() - sweep) <= 1e-3 * sweep);
        }
    }
    SUBCASE("containment, minimality and rotation equivariance on random polygons") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> phi(0.0, 360.0);
        for (int trial = 0; trial < 40; ++trial) {
            const Polygon p{random_star_polygon(rng, 3 + trial % 38, {100, 100}, 10, 60)};
            const OrientedRect r = min_rotated_rect(p);
            CHECK(r.w >= r.h);
            CHECK(r.theta >= 0.0);
            CHECK(r.theta < 180.0);
            for (const Point2& v : p.vertices) CHECK(r.contains(v, 1e-6));
            const BoundingBox bb = bounding_box(p.vertices);
            CHECK(r.area() <= (bb.max.x - bb.min.x) * (bb.max.y - bb.min.y) * (1 + 1e-12));

            const double f = phi(rng);
            const OrientedRect q = min_rotated_rect(rotated(p, {100, 100}, f));
            CHECK(std::abs(q.w - r.w) <= 1e-6);
            CHECK(std::abs(q.h - r.h) <= 1e-6);
            CHECK(angle_diff_mod180(q.theta, r.theta + f) <= 1e-4);
        }
    }
    SUBCASE("corners and axes agree with the angle convention") {
        OrientedRect r = min_rotated_rect(rotated(rect_poly(0, 0, 6, 2), {3, 1}, 90.0));
        CHECK(r.theta == doctest::Approx(90.0));
        const Point2 aw = r.axis_w();
        CHECK(aw.x == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(std::abs(aw.y) == doctest::Approx(1.0));
        for (const Point2& c : r.corners()) CHECK(r.contains(c, 1e-9));
    }
}

TEST_CASE("strokes_for_region") {
    const Rgb fill{12, 34, 56};
    SUBCASE("small triangle gets one stroke") {
        const Polygon tri{{{0, 0}, {6, 0}, {0, 4}}};
        const auto s = strokes_for_region(tri, fill, deco(100, 10, 0));
        REQUIRE(s.size() == 1);
        CHECK(s[0].r == 12);
        CHECK(s[0].g == 34);
        CHECK(s[0].b == 56);
    }
    SUBCASE("100x100 square, four 50x50 strokes") {
        const auto s = strokes_for_region(rect_poly(0, 0, 100, 100), fill, deco(1000, 50, 4));
        REQUIRE(s.size() == 4);
        const std::vector<Point2> centers = {{25, 25}, {75, 25}, {25, 75}, {75, 75}};
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(s[i].w == doctest::Approx(50.0));
            CHECK(s[i].h == doctest::Approx(50.0));
            CHECK(s[i].theta == 0.0);
            CHECK(s[i].x == doctest::Approx(centers[i].x));
            CHECK(s[i].y == doctest::Approx(centers[i].y));
            CHECK(s[i].r == fill.r);
        }
    }
    SUBCASE("automatic stroke count") {
        DecompositionConfig c = deco(1000, 10, 0);
        CHECK(auto_group_count(5000, c) == 5);
        CHECK(auto_group_count(5001, c) == 6);
        CHECK(auto_group_count(1e9, c) == 64);
        const DecompositionConfig d = default_decomposition(200, 100);
        CHECK(d.delta == doctest::Approx(100.0));
        CHECK(d.p_grid == doctest::Approx(10.0));
    }
    SUBCASE("every sub-region lies inside its stroke rectangle") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 20; ++trial) {
            const Polygon p{random_star_polygon(rng, 6 + trial, {80, 80}, 20, 70)};
            const auto plans = plan_strokes(p, fill, deco(400, 20, trial % 2 ? 0 : 5));
            double area = 0;
            for (const StrokePlan& pl : plans) {
                area += pl.sub_region.area;
                for (const Polygon& c : pl.sub_region.cells)
                    for (const Point2& v : c.vertices) CHECK(pl.rect.contains(v, 1e-6));
                CHECK(pl.stroke.w >= pl.stroke.h);
                CHECK(pl.stroke.theta >= 0.0);
                CHECK(pl.stroke.theta < 180.0);
            }
            CHECK(area == doctest::Approx(polygon_area(p)));
        }
    }
    SUBCASE("invalid configuration") {
        CHECK_THROWS_AS(validate(deco(0, 1, 0)), Error);
        CHECK_THROWS_AS(validate(deco(1, -1, 0)), Error);
        CHECK_THROWS_AS(validate(deco(1, 1, -2)), Error);
    }
}
