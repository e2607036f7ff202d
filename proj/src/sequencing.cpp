#include "regionpaint/sequencing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "regionpaint/error.hpp"

namespace regionpaint {

void validate(const SequencingConfig& cfg) {
    if (!(cfg.cluster_distance_cutoff > 0.0)) throw Error("sequencing.cluster_distance_cutoff must be positive");
    if (cfg.tsp_two_opt_max_passes < 0) throw Error("sequencing.tsp_two_opt_max_passes must be >= 0");
}

double default_cluster_cutoff(int width, int height) { return 0.15 * std::hypot(width, height); }

Point2 centroid(const Polygon& polygon) {
    const auto& p = polygon.vertices;
    double a2 = 0, cx = 0, cy = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Point2& s = p[i];
        const Point2& t = p[(i + 1) % p.size()];
        const double c = s.x * t.y - t.x * s.y;
        a2 += c;
        cx += (s.x + t.x) * c;
        cy += (s.y + t.y) * c;
    }
    if (p.size() < 3 || std::abs(a2) <= 1e-12) throw Error("centroid of a zero-area polygon");
    return {cx / (3.0 * a2), cy / (3.0 * a2)};
}

std::vector<std::vector<int>> agglomerative_clusters(std::span<const Point2> points, Linkage linkage,
                                                     double cutoff) {
    const std::size_t n = points.size();
    if (n == 0) return {};
    // Nearest-neighbour chain over a dense distance matrix; all three
    // linkages are reducible, so merges at height <= cutoff form the cut.
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = dist[j * n + i] = distance(points[i], points[j]);

    std::vector<std::size_t> size(n, 1);
    std::vector<bool> active(n, true);
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };

    std::vector<std::size_t> chain;
    std::size_t remaining = n;
    while (remaining > 1) {
        if (chain.empty()) {
            for (std::size_t i = 0; i < n; ++i)
                if (active[i]) {
                    chain.push_back(i);
                    break;
                }
        }
        const std::size_t a = chain.back();
        const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2] : n;
        std::size_t best = n;
        double best_d = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!active[j] || j == a) continue;
            const double d = dist[a * n + j];
            if (best == n || d < best_d || (d == best_d && j == prev)) best = j, best_d = d;
        }
        if (best != prev) {
            chain.push_back(best);
            continue;
        }
        chain.pop_back();
        chain.pop_back();
        const std::size_t keep = std::min(a, best);
        const std::size_t drop = std::max(a, best);
        if (best_d <= cutoff) parent[find(drop)] = find(keep);
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == keep || k == drop) continue;
            const double dk = dist[keep * n + k];
            const double dd = dist[drop * n + k];
            double merged = 0;
            switch (linkage) {
                case Linkage::single: merged = std::min(dk, dd); break;
                case Linkage::complete: merged = std::max(dk, dd); break;
                case Linkage::average:
                    merged = (double(size[keep]) * dk + double(size[drop]) * dd) / double(size[keep] + size[drop]);
                    break;
            }
            dist[keep * n + k] = dist[k * n + keep] = merged;
        }
        size[keep] += size[drop];
        active[drop] = false;
        --remaining;
    }

    std::map<std::size_t, std::vector<int>> by_root;
    for (std::size_t i = 0; i < n; ++i) by_root[find(i)].push_back(static_cast<int>(i));
    std::vector<std::vector<int>> clusters;
    for (auto& [root, members] : by_root) clusters.push_back(std::move(members));
    std::sort(clusters.begin(), clusters.end(), [](const auto& l, const auto& r) { return l.front() < r.front(); });
    return clusters;
}

std::vector<RegionGroup> cluster_regions(std::span<const VectorRegion> regions, const SequencingConfig& cfg) {
    validate(cfg);
    std::map<int, std::vector<int>> by_segment;
    for (std::size_t i = 0; i < regions.size(); ++i)
        by_segment[regions[i].source_segment_id].push_back(static_cast<int>(i));

    std::vector<RegionGroup> groups;
    for (const auto& [segment, members] : by_segment) {
        std::vector<Point2> pts;
        for (int m : members) pts.push_back(regions[m].centroid);
        for (const auto& cluster : agglomerative_clusters(pts, cfg.linkage, cfg.cluster_distance_cutoff)) {
            RegionGroup g;
            g.segment_id = segment;
            double weight = 0;
            Point2 sum{};
            for (int local : cluster) {
                const VectorRegion& r = regions[members[local]];
                g.members.push_back(members[local]);
                const double w = std::max(r.area, 1e-9);
                sum = sum + r.centroid * w;
                weight += w;
            }
            g.centroid = sum / weight;
            groups.push_back(std::move(g));
        }
    }
    return groups;
}

std::vector<std::size_t> nearest_neighbour_tour(std::span<const Point2> points) {
    const std::size_t n = points.size();
    std::vector<std::size_t> tour;
    if (n == 0) return tour;
    std::vector<bool> visited(n, false);
    std::size_t cur = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (norm(points[i]) < norm(points[cur])) cur = i;
    tour.push_back(cur);
    visited[cur] = true;
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t best = n;
        double best_d = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (visited[j]) continue;
            const double d = distance(points[cur], points[j]);
            if (best == n || d < best_d) best = j, best_d = d;
        }
        cur = best;
        visited[cur] = true;
        tour.push_back(cur);
    }
    return tour;
}

void two_opt(std::span<const Point2> points, std::vector<std::size_t>& tour, int max_passes) {
    const std::size_t n = tour.size();
    if (n < 3) return;
    auto d = [&](std::size_t a, std::size_t b) { return distance(points[tour[a]], points[tour[b]]); };
    for (int pass = 0; pass < max_passes; ++pass) {
        bool improved = false;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                // Reversing tour[i..j] swaps edges (i-1, i), (j, j+1) for (i-1, j), (i, j+1).
                double delta = 0;
                if (i > 0) delta += d(i - 1, j) - d(i - 1, i);
                if (j + 1 < n) delta += d(i, j + 1) - d(j, j + 1);
                if (delta < -1e-12) {
                    std::reverse(tour.begin() + static_cast<std::ptrdiff_t>(i),
                                 tour.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                    improved = true;
                }
            }
        }
        if (!improved) break;
    }
}

std::vector<std::size_t> solve_tsp(std::span<const Point2> points, const SequencingConfig& cfg) {
    validate(cfg);
    std::vector<std::size_t> tour = nearest_neighbour_tour(points);
    two_opt(points, tour, cfg.tsp_two_opt_max_passes);
    return tour;
}

double path_length(std::span<const Point2> points, std::span<const std::size_t> tour) {
    double len = 0;
    for (std::size_t i = 1; i < tour.size(); ++i) len += distance(points[tour[i - 1]], points[tour[i]]);
    return len;
}

std::vector<SequencedRegion> sequence_regions(std::span<const VectorRegion> regions, const SequencingConfig& cfg) {
    const std::vector<RegionGroup> groups = cluster_regions(regions, cfg);
    std::map<int, std::vector<std::size_t>> groups_of_segment;
    for (std::size_t g = 0; g < groups.size(); ++g) groups_of_segment[groups[g].segment_id].push_back(g);

    std::vector<SequencedRegion> out;
    int group_id = 0;
    for (const auto& [segment, gids] : groups_of_segment) {
        std::vector<Point2> group_centers;
        for (std::size_t g : gids) group_centers.push_back(groups[g].centroid);
        for (std::size_t gi : solve_tsp(group_centers, cfg)) {
            const RegionGroup& group = groups[gids[gi]];
            std::vector<Point2> centers;
            for (int m : group.members) centers.push_back(regions[m].centroid);
            for (std::size_t ri : solve_tsp(centers, cfg)) {
                out.push_back({static_cast<std::size_t>(group.members[ri]), segment, group_id,
                               static_cast<int>(out.size())});
            }
            ++group_id;
        }
    }
    return out;
}

}  // namespace regionpaint
