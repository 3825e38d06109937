#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace sarcoast {

/// One agglomeration step. Clusters 0..n-1 are the input points; the merge at
/// position i creates cluster n+i.
struct WardMerge {
    std::size_t a = 0;
    std::size_t b = 0;
    /// Increase of the within-cluster sum of squares caused by the merge.
    double cost = 0.0;
    std::size_t size = 0;
};

/// Ward agglomerative clustering of 2-D points using the nearest-neighbour
/// chain algorithm. Merges are returned sorted by cost (stable in creation
/// order). O(n^2) time and memory.
std::vector<WardMerge> ward_linkage(std::span<const std::array<double, 2>> points);

/// Cuts a Ward dendrogram into `clusters` groups; returns a group index per
/// point. Groups are numbered by their smallest member.
std::vector<int> cut_dendrogram(std::span<const WardMerge> merges, std::size_t n_points,
                                std::size_t clusters);

}  // namespace sarcoast
