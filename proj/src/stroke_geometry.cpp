#include "regionpaint/stroke_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "regionpaint/error.hpp"

namespace regionpaint {
namespace {

using Ring = std::vector<Point2>;

double coord(Point2 p, int axis) { return axis == 0 ? p.x : p.y; }

// Sutherland-Hodgman; used only when the splitting below finds an
// inconsistent crossing pattern (self-touching input).
Ring clip_single(const Ring& poly, int axis, double c, bool keep_less) {
    Ring out;
    const std::size_t n = poly.size();
    auto s = [&](Point2 p) { return keep_less ? coord(p, axis) - c : c - coord(p, axis); };
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly[i];
        const Point2 b = poly[(i + 1) % n];
        const double sa = s(a), sb = s(b);
        if (sa <= 0) out.push_back(a);
        if ((sa <= 0) != (sb <= 0)) {
            const double t = sa / (sa - sb);
            Point2 x = a + (b - a) * t;
            (axis == 0 ? x.x : x.y) = c;
            out.push_back(x);
        }
    }
    return out;
}

Ring dedupe(Ring r) {
    Ring out;
    for (const Point2& p : r)
        if (out.empty() || !(p == out.back())) out.push_back(p);
    while (out.size() > 1 && out.front() == out.back()) out.pop_back();
    return out;
}

// Clips a simple polygon to one side of an axis-aligned line. Unlike
// Sutherland-Hodgman, concave inputs that the line cuts into several parts
// come back as separate simple pieces. Points on the line count as inside;
// ties along the line are broken as if the line were nudged outward.
std::vector<Ring> clip_halfplane(const Ring& poly, int axis, double c, bool keep_less) {
    const std::size_t n = poly.size();
    auto s = [&](Point2 p) { return keep_less ? coord(p, axis) - c : c - coord(p, axis); };
    std::vector<double> sv(n);
    std::size_t inside_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sv[i] = s(poly[i]);
        if (sv[i] <= 0) ++inside_count;
    }
    if (inside_count == n) return {poly};
    if (inside_count == 0) return {};

    struct Crossing {
        Point2 at;
        double u = 0, slope = 0;
        bool entry = false;
        std::size_t chain = 0;
    };
    auto crossing = [&](std::size_t i, bool entry) {
        const std::size_t j = (i + 1) % n;
        const Point2 a = poly[i], b = poly[j];
        const double t = sv[i] / (sv[i] - sv[j]);
        Crossing x;
        x.at = a + (b - a) * t;
        (axis == 0 ? x.at.x : x.at.y) = c;
        x.u = coord(x.at, 1 - axis);
        x.slope = (coord(b, 1 - axis) - coord(a, 1 - axis)) / (sv[j] - sv[i]);
        x.entry = entry;
        return x;
    };

    // Chains: entry crossing, inside vertices, exit crossing.
    std::size_t start = 0;
    while (!(sv[start] > 0 && sv[(start + 1) % n] <= 0)) ++start;
    std::vector<Ring> chains;
    std::vector<Crossing> xs;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = (start + k) % n;
        const std::size_t j = (i + 1) % n;
        const bool in_i = sv[i] <= 0, in_j = sv[j] <= 0;
        if (!in_i && in_j) {
            Crossing e = crossing(i, true);
            e.chain = chains.size();
            chains.push_back({e.at, poly[j]});
            xs.push_back(e);
        } else if (in_i && in_j) {
            chains.back().push_back(poly[j]);
        } else if (in_i && !in_j) {
            Crossing x = crossing(i, false);
            x.chain = chains.size() - 1;
            chains.back().push_back(x.at);
            xs.push_back(x);
        }
    }

    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(xs[a].u, xs[a].slope, a) < std::tie(xs[b].u, xs[b].slope, b);
    });

    std::vector<std::size_t> next_chain(chains.size(), chains.size());
    for (std::size_t k = 0; k + 1 < order.size(); k += 2) {
        const Crossing& p = xs[order[k]];
        const Crossing& q = xs[order[k + 1]];
        if (p.entry == q.entry) return {clip_single(poly, axis, c, keep_less)};
        const Crossing& exit = p.entry ? q : p;
        const Crossing& entry = p.entry ? p : q;
        next_chain[exit.chain] = entry.chain;
    }

    std::vector<Ring> pieces;
    std::vector<bool> used(chains.size(), false);
    for (std::size_t c0 = 0; c0 < chains.size(); ++c0) {
        if (used[c0]) continue;
        Ring piece;
        std::size_t cur = c0;
        while (cur < chains.size() && !used[cur]) {
            used[cur] = true;
            piece.insert(piece.end(), chains[cur].begin(), chains[cur].end());
            cur = next_chain[cur];
        }
        if (cur != c0) return {clip_single(poly, axis, c, keep_less)};
        piece = dedupe(std::move(piece));
        if (piece.size() >= 3) pieces.push_back(std::move(piece));
    }
    return pieces;
}

double normalize_theta(double t) {
    t = std::fmod(t, 180.0);
    if (t < 0) t += 180.0;
    if (t >= 180.0) t -= 180.0;
    return t;
}

struct Group {
    std::vector<int> cells;
    std::vector<Point2> points;
    double area = 0;
    Point2 moment;  // area-weighted centroid sum
    bool alive = true;
};

bool cells_touch(const GridCell& a, const GridCell& b) {
    return std::abs(a.row - b.row) + std::abs(a.col - b.col) <= 1;
}

}  // namespace

void validate(const DecompositionConfig& cfg) {
    if (!(cfg.delta > 0.0)) throw Error("decomposition.delta must be positive");
    if (!(cfg.p_grid > 0.0)) throw Error("decomposition.p_grid must be positive");
    if (cfg.p_group < 0) throw Error("decomposition.p_group must be positive (or 0 for automatic)");
}

DecompositionConfig default_decomposition(int width, int height) {
    DecompositionConfig cfg;
    cfg.delta = 0.005 * double(width) * double(height);
    cfg.p_grid = std::sqrt(cfg.delta);
    cfg.p_group = 0;
    return cfg;
}

int auto_group_count(double area, const DecompositionConfig& cfg) {
    if (cfg.p_group > 0) return cfg.p_group;
    const double n = std::ceil(area / cfg.delta);
    return static_cast<int>(std::clamp(n, 1.0, 64.0));
}

double polygon_area(const Polygon& p) { return std::abs(signed_area(p.vertices)); }

std::vector<GridCell> grid_decompose(const Polygon& p, const DecompositionConfig& cfg) {
    validate(cfg);
    if (p.size() < 3) throw Error("degenerate polygon");
    const BoundingBox box = bounding_box(p.vertices);
    const double g = cfg.p_grid;
    const int cols = std::max(1, static_cast<int>(std::ceil((box.max.x - box.min.x) / g - 1e-9)));
    const int rows = std::max(1, static_cast<int>(std::ceil((box.max.y - box.min.y) / g - 1e-9)));
    const double min_piece = 1e-9 * g * g;

    std::vector<std::vector<Ring>> columns(cols);
    std::vector<Ring> rest{p.vertices};
    for (int c = 0; c + 1 < cols; ++c) {
        const double x = box.min.x + g * (c + 1);
        std::vector<Ring> right;
        for (const Ring& piece : rest) {
            for (Ring& l : clip_halfplane(piece, 0, x, true)) columns[c].push_back(std::move(l));
            for (Ring& r : clip_halfplane(piece, 0, x, false)) right.push_back(std::move(r));
        }
        rest = std::move(right);
    }
    for (Ring& r : rest) columns[cols - 1].push_back(std::move(r));

    std::vector<std::vector<std::vector<Ring>>> cells(rows, std::vector<std::vector<Ring>>(cols));
    for (int c = 0; c < cols; ++c) {
        std::vector<Ring> remaining = std::move(columns[c]);
        for (int r = 0; r + 1 < rows; ++r) {
            const double y = box.min.y + g * (r + 1);
            std::vector<Ring> below;
            for (const Ring& piece : remaining) {
                for (Ring& a : clip_halfplane(piece, 1, y, true)) cells[r][c].push_back(std::move(a));
                for (Ring& b : clip_halfplane(piece, 1, y, false)) below.push_back(std::move(b));
            }
            remaining = std::move(below);
        }
        for (Ring& b : remaining) cells[rows - 1][c].push_back(std::move(b));
    }

    std::vector<GridCell> out;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            for (Ring& piece : cells[r][c])
                if (std::abs(signed_area(piece)) > min_piece) out.push_back({Polygon{std::move(piece)}, r, c});
    return out;
}

std::vector<SubRegion> group_cells(std::span<const GridCell> cells, int p_group) {
    if (cells.empty()) throw Error("group_cells needs at least one cell");
    if (p_group < 1) throw Error("p_group must be positive");
    const std::size_t target = std::min<std::size_t>(static_cast<std::size_t>(p_group), cells.size());

    std::vector<Group> groups(cells.size());
    std::vector<int> owner(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        Group& g = groups[i];
        g.cells = {static_cast<int>(i)};
        g.points = cells[i].polygon.vertices;
        g.area = polygon_area(cells[i].polygon);
        const double a = signed_area(cells[i].polygon.vertices);
        Point2 m{};
        const auto& v = cells[i].polygon.vertices;
        for (std::size_t k = 0; k < v.size(); ++k) {
            const Point2 s = v[k], t = v[(k + 1) % v.size()];
            const double cr = cross(s, t);
            m = m + (s + t) * cr;
        }
        g.moment = std::abs(a) > 0 ? (m / (6.0 * a)) * g.area : Point2{};
        owner[i] = static_cast<int>(i);
    }
    auto hull_area = [](const std::vector<Point2>& pts) {
        const std::vector<Point2> hull = convex_hull(pts);
        if (hull.size() < 3) return 0.0;
        return min_rotated_rect(hull).area();
    };

    std::size_t alive = cells.size();
    while (alive > target) {
        int small = -1;
        for (std::size_t i = 0; i < groups.size(); ++i)
            if (groups[i].alive && (small < 0 || groups[i].area < groups[small].area)) small = static_cast<int>(i);

        std::vector<int> neighbours;
        for (int ci : groups[small].cells)
            for (std::size_t cj = 0; cj < cells.size(); ++cj)
                if (owner[cj] != small && cells_touch(cells[ci], cells[cj])) neighbours.push_back(owner[cj]);
        std::sort(neighbours.begin(), neighbours.end());
        neighbours.erase(std::unique(neighbours.begin(), neighbours.end()), neighbours.end());

        int pick = -1;
        if (neighbours.empty()) {
            const Point2 c0 = groups[small].moment / groups[small].area;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < groups.size(); ++i) {
                if (!groups[i].alive || static_cast<int>(i) == small) continue;
                const double d = distance(c0, groups[i].moment / groups[i].area);
                if (d < best) best = d, pick = static_cast<int>(i);
            }
        } else {
            double best_spill = std::numeric_limits<double>::infinity();
            for (int nb : neighbours) {
                std::vector<Point2> pts = groups[small].points;
                pts.insert(pts.end(), groups[nb].points.begin(), groups[nb].points.end());
                const double spill = hull_area(pts) - groups[small].area - groups[nb].area;
                const double eps = 1e-9 * std::max(1.0, std::abs(best_spill));
                if (pick < 0 || spill < best_spill - eps ||
                    (spill <= best_spill + eps && groups[nb].area < groups[pick].area)) {
                    best_spill = std::min(best_spill, spill);
                    pick = nb;
                }
            }
        }

        const int keep = std::min(small, pick);
        const int drop = std::max(small, pick);
        Group& k = groups[keep];
        Group& d = groups[drop];
        for (int ci : d.cells) owner[ci] = keep;
        k.cells.insert(k.cells.end(), d.cells.begin(), d.cells.end());
        std::sort(k.cells.begin(), k.cells.end());
        k.points.insert(k.points.end(), d.points.begin(), d.points.end());
        k.area += d.area;
        k.moment = k.moment + d.moment;
        d.alive = false;
        d.cells.clear();
        d.points.clear();
        --alive;
    }

    std::vector<SubRegion> out;
    for (const Group& g : groups) {
        if (!g.alive) continue;
        SubRegion sr;
        sr.cell_indices = g.cells;
        for (int ci : g.cells) sr.cells.push_back(cells[ci].polygon);
        sr.area = g.area;
        out.push_back(std::move(sr));
    }
    std::sort(out.begin(), out.end(),
              [](const SubRegion& a, const SubRegion& b) { return a.cell_indices.front() < b.cell_indices.front(); });
    return out;
}

Point2 OrientedRect::axis_w() const {
    const double t = deg_to_rad(theta);
    return {std::cos(t), -std::sin(t)};
}

Point2 OrientedRect::axis_h() const {
    const double t = deg_to_rad(theta);
    return {std::sin(t), std::cos(t)};
}

std::array<Point2, 4> OrientedRect::corners() const {
    const Point2 a = axis_w() * (w / 2);
    const Point2 b = axis_h() * (h / 2);
    return {center - a - b, center + a - b, center + a + b, center - a + b};
}

bool OrientedRect::contains(Point2 p, double eps) const {
    const Point2 d = p - center;
    return std::abs(dot(d, axis_w())) <= w / 2 + eps && std::abs(dot(d, axis_h())) <= h / 2 + eps;
}

OrientedRect canonical_rect(Point2 center, double extent_u, double extent_v, Point2 u_axis) {
    const Point2 v_axis{-u_axis.y, u_axis.x};
    OrientedRect r;
    r.center = center;
    Point2 axis = u_axis;
    if (extent_u >= extent_v) {
        r.w = extent_u;
        r.h = extent_v;
    } else {
        r.w = extent_v;
        r.h = extent_u;
        axis = v_axis;
    }
    double t = normalize_theta(rad_to_deg(std::atan2(-axis.y, axis.x)));
    if (r.w - r.h <= 1e-9 * r.w) t = std::fmod(t, 90.0);
    r.theta = t;
    return r;
}

OrientedRect min_rotated_rect(std::span<const Point2> points) {
    const std::vector<Point2> hull = convex_hull(points);
    if (hull.size() < 3) throw Error("degenerate polygon");
    OrientedRect best;
    bool have = false;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point2 e = hull[(i + 1) % hull.size()] - hull[i];
        const Point2 u = e / norm(e);
        const Point2 v{-u.y, u.x};
        double umin = std::numeric_limits<double>::infinity(), umax = -umin, vmin = umin, vmax = -umin;
        for (const Point2& p : hull) {
            const double pu = dot(p, u), pv = dot(p, v);
            umin = std::min(umin, pu);
            umax = std::max(umax, pu);
            vmin = std::min(vmin, pv);
            vmax = std::max(vmax, pv);
        }
        const Point2 center = u * ((umin + umax) / 2) + v * ((vmin + vmax) / 2);
        const OrientedRect r = canonical_rect(center, umax - umin, vmax - vmin, u);
        if (!have) {
            best = r;
            have = true;
            continue;
        }
        // Equal areas (every edge of an acute triangle, for one) prefer the
        // longer rectangle, which does not depend on how the input is
        // rotated; only congruent candidates fall back to the smaller theta.
        const double atol = 1e-9 * std::max(1.0, best.area());
        const double wtol = 1e-9 * std::max(1.0, best.w);
        if (r.area() < best.area() - atol) {
            best = r;
        } else if (r.area() <= best.area() + atol) {
            if (r.w > best.w + wtol || (r.w >= best.w - wtol && r.theta < best.theta)) best = r;
        }
    }
    return best;
}

OrientedRect min_rotated_rect(const Polygon& p) { return min_rotated_rect(std::span<const Point2>(p.vertices)); }

double estimate_theta(const OrientedRect& rect) { return rect.theta; }

StrokeParams stroke_from_rect(const OrientedRect& rect, Rgb fill) {
    return {rect.center.x, rect.center.y, rect.w, rect.h, rect.theta, fill.r, fill.g, fill.b};
}

std::vector<StrokePlan> plan_strokes(const Polygon& p, Rgb fill, const DecompositionConfig& cfg) {
    validate(cfg);
    const double area = polygon_area(p);
    std::vector<SubRegion> subs;
    if (area <= cfg.delta) {
        SubRegion whole;
        whole.cells = {p};
        whole.cell_indices = {0};
        whole.area = area;
        subs.push_back(std::move(whole));
    } else {
        const std::vector<GridCell> cells = grid_decompose(p, cfg);
        if (cells.empty()) throw Error("degenerate polygon");
        subs = group_cells(cells, auto_group_count(area, cfg));
    }
    std::vector<StrokePlan> plans;
    for (SubRegion& sr : subs) {
        std::vector<Point2> pts;
        for (const Polygon& c : sr.cells) pts.insert(pts.end(), c.vertices.begin(), c.vertices.end());
        const OrientedRect rect = min_rotated_rect(pts);
        plans.push_back({std::move(sr), rect, stroke_from_rect(rect, fill)});
    }
    return plans;
}

std::vector<StrokeParams> strokes_for_region(const Polygon& p, Rgb fill, const DecompositionConfig& cfg) {
    std::vector<StrokeParams> out;
    for (const StrokePlan& plan : plan_strokes(p, fill, cfg)) out.push_back(plan.stroke);
    return out;
}

}  // namespace regionpaint
