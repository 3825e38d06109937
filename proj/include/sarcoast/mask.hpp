#pragma once

#include <cstdint>

#include "sarcoast/grid.hpp"

namespace sarcoast {

enum class LandClass : std::uint8_t { water = 0, land = 1 };

constexpr LandClass opposite(LandClass c) noexcept {
    return c == LandClass::land ? LandClass::water : LandClass::land;
}

using BinaryMask = Grid<LandClass>;

}  // namespace sarcoast
