#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "sarcoast/mask.hpp"
#include "sarcoast/superpixel.hpp"

namespace sarcoast {

inline constexpr int kDefaultEntropyBins = 64;

struct FeatureRow {
    int superpixel_id = 0;
    double entropy = 0.0;  ///< bits
    double median = 0.0;   ///< amplitude units
};

/// Shannon entropy (bits) of the members' histogram over `bins` equal-width
/// bins spanning [global_min, global_max].
double superpixel_entropy(std::span<const double> members, double global_min, double global_max,
                          int bins = kDefaultEntropyBins);

/// Median; the mean of the two middle order statistics for even counts.
double superpixel_median(std::span<const double> members);

/// Features of every non-empty superpixel, ordered by id.
std::vector<FeatureRow> compute_features(const SarImage& img, const SuperpixelMap& spm,
                                         int bins = kDefaultEntropyBins);

void write_features_csv(const std::filesystem::path& path, std::span<const FeatureRow> rows);

struct ClusterOptions {
    /// A split explaining less than this share of the standardised feature
    /// variance is considered content-free and reported as degenerate.
    double min_explained = 0.8;
};

struct ClassAssignment {
    std::map<int, LandClass> classes;
    /// Set when the rows do not support a two-class split; every row is
    /// then assigned to water.
    bool degenerate = false;
    /// Between-cluster share of the total standardised sum of squares.
    double explained = 0.0;

    LandClass at(int superpixel_id) const;
};

/// Z-scores both features, Ward-clusters the rows into two groups, and names
/// the group with the lower mean median water (ties: lower mean entropy).
/// Throws PreconditionError for fewer than two rows.
ClassAssignment cluster_two(std::span<const FeatureRow> rows, const ClusterOptions& opts = {});

/// Paints every pixel with its superpixel's class. Throws PreconditionError
/// when a present label has no class.
BinaryMask build_binary_mask(const SuperpixelMap& spm, const ClassAssignment& ca);

}  // namespace sarcoast
