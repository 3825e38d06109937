#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sarcoast/grid.hpp"
#include "sarcoast/mask.hpp"

namespace sarcoast {

enum class Connectivity { four = 4, eight = 8 };

/// Connected set of pixels (linear indices, ascending).
struct Component {
    std::vector<std::size_t> pixels;
    std::size_t size() const noexcept { return pixels.size(); }
};

/// Components of `cls` pixels, largest first, ties by smallest first pixel.
std::vector<Component> connected_components(const BinaryMask& mask, LandClass cls, Connectivity conn);

/// Connectivity used for each class during void filling: land 4, water 8.
constexpr Connectivity fill_connectivity(LandClass cls) noexcept {
    return cls == LandClass::land ? Connectivity::four : Connectivity::eight;
}

struct FillResult {
    BinaryMask mask;
    /// Set when the input holds a single class; `mask` is then the input.
    bool one_class_only = false;
    bool converged = false;
    int passes = 0;
    std::size_t land_components_before = 0;
    std::size_t water_components_before = 0;
    std::size_t land_components_after = 0;
    std::size_t water_components_after = 0;

    std::size_t components_before() const noexcept { return land_components_before + water_components_before; }
    std::size_t components_after() const noexcept { return land_components_after + water_components_after; }
};

inline constexpr int kMaxFillPasses = 10;

/// Keeps the largest land (4-connected) and largest water (8-connected)
/// component and flips every other component to the opposite class,
/// repeating until one component per class remains.
FillResult fill_voids(const BinaryMask& mask);

using BorderMask = Grid<std::uint8_t>;

/// Border pixels of class `side`: pixels with a 4-neighbour of the other
/// class. Pixels on the image frame are excluded, and so are contacts with a
/// frame pixel, since those pieces of the interface run along the image edge.
/// Throws PreconditionError unless the mask holds exactly one component per
/// class.
BorderMask extract_border(const BinaryMask& filled, LandClass side = LandClass::land);

using Chain = std::vector<Pixel>;

/// Orders border pixels into 8-connected chains. Each 8-connected group is
/// walked from its topmost-leftmost endpoint (or topmost-leftmost pixel for
/// closed loops), favouring 4-neighbours and then the neighbour with the
/// fewest unvisited neighbours. Leftover pixels start further chains.
std::vector<Chain> trace_polyline(const BorderMask& border);

struct Coastline {
    BorderMask border;
    std::vector<Chain> chains;
};

/// Border pixels with three or more 8-neighbours on the border.
std::size_t junction_count(const BorderMask& border);

/// Pixels set in `border`, raster order.
std::vector<Pixel> border_pixels(const BorderMask& border);

}  // namespace sarcoast
