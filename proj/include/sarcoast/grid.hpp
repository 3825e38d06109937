#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace sarcoast {

/// Row/column pixel address. `row` grows downwards, `col` to the right.
struct Pixel {
    int row = 0;
    int col = 0;

    friend bool operator==(const Pixel&, const Pixel&) = default;
    friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

/// Dense row-major raster.
template <class T>
class Grid {
public:
    Grid() = default;
    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}
    Grid(int width, int height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data)) {
        assert(data_.size() == size());
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }
    bool empty() const noexcept { return data_.empty(); }

    bool contains(int row, int col) const noexcept {
        return row >= 0 && col >= 0 && row < height_ && col < width_;
    }
    bool on_frame(int row, int col) const noexcept {
        return row == 0 || col == 0 || row == height_ - 1 || col == width_ - 1;
    }

    std::size_t index(int row, int col) const noexcept {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }
    Pixel pixel(std::size_t index) const noexcept {
        return {static_cast<int>(index / static_cast<std::size_t>(width_)),
                static_cast<int>(index % static_cast<std::size_t>(width_))};
    }

    T& operator()(int row, int col) noexcept { return data_[index(row, col)]; }
    const T& operator()(int row, int col) const noexcept { return data_[index(row, col)]; }
    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

// 4-neighbourhood offsets: up, left, right, down.
inline constexpr int kDRow4[4] = {-1, 0, 0, 1};
inline constexpr int kDCol4[4] = {0, -1, 1, 0};

// 8-neighbourhood offsets, clockwise starting at north.
inline constexpr int kDRow8[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
inline constexpr int kDCol8[8] = {0, 1, 1, 1, 0, -1, -1, -1};

}  // namespace sarcoast
