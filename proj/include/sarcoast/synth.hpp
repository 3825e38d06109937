#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sarcoast/ggd.hpp"
#include "sarcoast/mask.hpp"
#include "sarcoast/superpixel.hpp"

namespace sarcoast {

/// Default class models: dark low-texture water, brighter land.
inline constexpr GgdParams kDefaultLandParams{1.0, 8.0, 6.0};
inline constexpr GgdParams kDefaultWaterParams{1.0, 1.0, 1.0};

struct SceneSpec {
    int width = 256;
    int height = 256;
    std::uint64_t seed = 1;
    GgdParams land = kDefaultLandParams;
    GgdParams water = kDefaultWaterParams;
    /// Sum of sinusoid amplitudes of the coast row, in pixels.
    double roughness = 0.0;
    /// Water discs placed inside land, and land discs placed inside water.
    int lakes = 0;
    int islets = 0;
};

struct Sinusoid {
    double amplitude = 0.0;
    int frequency = 1;
    double phase = 0.0;
};

struct Disc {
    double row = 0.0;
    double col = 0.0;
    double radius = 0.0;
};

/// 4-adjacent (land pixel, water pixel) pair.
using InterfacePair = std::pair<Pixel, Pixel>;

struct SyntheticScene {
    SceneSpec spec;
    SarImage image;
    /// Ground truth classes, lakes and islets included.
    BinaryMask truth_mask;
    /// The two-region split along the coast only.
    BinaryMask coast_mask;
    std::vector<InterfacePair> truth_interface;
    std::vector<Sinusoid> terms;
    std::vector<Disc> lakes;
    std::vector<Disc> islets;

    /// Coast row at column `col`; pixels with row + 0.5 < coast_row are land.
    double coast_row(int col) const;
};

/// Generates a coastal scene: land above the row
///   height/2 + sum_j A_j sin(2 pi f_j col / width + phi_j),
/// water below, amplitudes drawn per class. Land and water fields are drawn
/// from independent streams for the full raster, so adding lakes or islets
/// only changes the pixels they cover. Throws PreconditionError when
/// roughness >= height/4 or the discs cannot be placed.
SyntheticScene gen_coast_scene(const SceneSpec& spec);

/// Every pixel belonging to a 4-adjacent land/water pair, raster order.
std::vector<Pixel> interface_pixels(const BinaryMask& mask);
std::vector<InterfacePair> interface_pairs(const BinaryMask& mask);

struct BoundaryScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    /// Mean nearest-neighbour distance over both sets; infinite if exactly one set is empty.
    double mean_distance = 0.0;
    double hausdorff = 0.0;
};

BoundaryScore boundary_score(std::span<const Pixel> extracted, std::span<const Pixel> truth, double tol);

/// Fraction of truth pixels within `tol` of a superpixel boundary pixel.
double superpixel_boundary_recall(const LabelGrid& labels, std::span<const Pixel> truth, double tol);

/// Euclidean distance from every pixel of a width x height raster to the
/// nearest point of `targets` (exact, Felzenszwalb-Huttenlocher). Infinite
/// everywhere when `targets` is empty.
Grid<double> distance_to_set(int width, int height, std::span<const Pixel> targets);

}  // namespace sarcoast
