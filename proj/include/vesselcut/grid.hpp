#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vesselcut/error.hpp"

namespace vesselcut {

/// Row-major 2-D array addressed as (row, col).
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height)
    {
        if (width < 0 || height < 0) {
            throw Error(ErrorCode::InvalidParameter, "negative grid dimensions");
        }
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    [[nodiscard]] bool contains(int row, int col) const noexcept
    {
        return row >= 0 && col >= 0 && row < height_ && col < width_;
    }

    [[nodiscard]] std::size_t index(int row, int col) const noexcept
    {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
    }

    T& operator()(int row, int col) noexcept { return data_[index(row, col)]; }
    const T& operator()(int row, int col) const noexcept { return data_[index(row, col)]; }

    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

    [[nodiscard]] std::span<T> values() noexcept { return data_; }
    [[nodiscard]] std::span<const T> values() const noexcept { return data_; }

    [[nodiscard]] bool same_shape(int width, int height) const noexcept
    {
        return width_ == width && height_ == height;
    }

    template <typename U>
    [[nodiscard]] bool same_shape(const Grid<U>& other) const noexcept
    {
        return same_shape(other.width(), other.height());
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

struct Pixel {
    int row = 0;
    int col = 0;
    friend bool operator==(const Pixel&, const Pixel&) = default;
};

using ByteGrid = Grid<std::uint8_t>;

/// Interleaved 8-bit image with 1 to 4 channels, as decoded from disk.
struct Image8 {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;

    [[nodiscard]] std::uint8_t at(int row, int col, int channel) const
    {
        return data[(static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col)) *
                        static_cast<std::size_t>(channels) +
                    static_cast<std::size_t>(channel)];
    }

    friend bool operator==(const Image8&, const Image8&) = default;
};

} // namespace vesselcut
