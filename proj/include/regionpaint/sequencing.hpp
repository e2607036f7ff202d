#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "regionpaint/geometry.hpp"
#include "regionpaint/vectorization.hpp"

namespace regionpaint {

enum class Linkage { single, complete, average };

struct SequencingConfig {
    Linkage linkage = Linkage::average;
    /// Dendrogram cut height in px. Must be positive; +inf yields one group.
    double cluster_distance_cutoff = 100.0;
    int tsp_two_opt_max_passes = 50;
    std::uint64_t seed = 0;
};

void validate(const SequencingConfig& cfg);

/// Cut height used when none is configured: 15% of the image diagonal.
double default_cluster_cutoff(int width, int height);

/// Area-weighted centroid. Throws on a zero-area polygon.
Point2 centroid(const Polygon& polygon);

struct RegionGroup {
    int segment_id = 0;
    std::vector<int> members;  // indices into the region list
    Point2 centroid;           // area-weighted mean of member centroids
};

/// Agglomerative clustering of weighted points, cut at `cutoff`. Returns the
/// member lists, each sorted, ordered by smallest member.
std::vector<std::vector<int>> agglomerative_clusters(std::span<const Point2> points, Linkage linkage,
                                                     double cutoff);

/// Groups regions by proximity of their centroids. Regions from different
/// segments never share a group.
std::vector<RegionGroup> cluster_regions(std::span<const VectorRegion> regions, const SequencingConfig& cfg);

/// Nearest-neighbour open path starting at the point closest to (0, 0).
std::vector<std::size_t> nearest_neighbour_tour(std::span<const Point2> points);

/// Improves an open path with 2-opt segment reversals until no move helps or
/// `max_passes` full sweeps have run. Endpoints may move.
void two_opt(std::span<const Point2> points, std::vector<std::size_t>& tour, int max_passes);

/// Open-path tour (no return leg): nearest neighbour followed by 2-opt.
std::vector<std::size_t> solve_tsp(std::span<const Point2> points, const SequencingConfig& cfg);

double path_length(std::span<const Point2> points, std::span<const std::size_t> tour);

struct SequencedRegion {
    std::size_t region_index = 0;  // into the input list
    int segment_id = 0;
    int group_id = 0;
    int rank = 0;

    friend bool operator==(const SequencedRegion&, const SequencedRegion&) = default;
};

/// Paint order: segments ascending by id; inside a segment, groups in tour
/// order over group centroids; inside a group, regions in tour order over
/// region centroids.
std::vector<SequencedRegion> sequence_regions(std::span<const VectorRegion> regions, const SequencingConfig& cfg);

}  // namespace regionpaint
