#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "regionpaint/geometry.hpp"

namespace regionpaint {

/// Interleaved, row-major raster with a fixed channel count.
template <typename T, int Channels>
class Raster {
  public:
    static constexpr int kChannels = Channels;
    using value_type = T;

    Raster() = default;
    Raster(int width, int height, T fill = T{})
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(checked(width, height)) * Channels, fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
    bool empty() const { return data_.empty(); }
    PixelRect rect() const { return {0, 0, width_, height_}; }

    T* pixel(int x, int y) { return data_.data() + index(x, y); }
    const T* pixel(int x, int y) const { return data_.data() + index(x, y); }
    T& at(int x, int y, int c = 0) { return data_[index(x, y) + c]; }
    const T& at(int x, int y, int c = 0) const { return data_[index(x, y) + c]; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool same_size(int w, int h) const { return width_ == w && height_ == h; }
    template <typename U, int C>
    bool same_size(const Raster<U, C>& o) const { return same_size(o.width(), o.height()); }

    friend bool operator==(const Raster&, const Raster&) = default;

  private:
    static int checked(int w, int h) {
        if (w < 0 || h < 0) throw std::invalid_argument("raster dimensions must be non-negative");
        return w * h;
    }
    std::size_t index(int x, int y) const {
        return (static_cast<std::size_t>(y) * width_ + x) * Channels;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

/// 8-bit RGB input image.
using RgbImage = Raster<std::uint8_t, 3>;
/// 8-bit RGBA raster, used for brush templates on disk.
using Rgba8Image = Raster<std::uint8_t, 4>;
/// Binary mask; any nonzero value is set.
using Bitmap = Raster<std::uint8_t, 1>;
/// Single-channel 16-bit segment label raster (0 = unlabeled).
using LabelMap = Raster<std::uint16_t, 1>;
/// Floating-point RGBA with channels in [0, 1].
using RgbaRaster = Raster<double, 4>;

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    friend bool operator==(Rgb, Rgb) = default;
};

inline Rgb rgb_at(const RgbImage& img, int x, int y) {
    const std::uint8_t* p = img.pixel(x, y);
    return {p[0], p[1], p[2]};
}

std::size_t count_set(const Bitmap& mask);

/// Converts the RGB channels of a float canvas to 8-bit, rounding to nearest.
RgbImage to_rgb8(const RgbaRaster& raster);
RgbaRaster to_rgba_float(const Rgba8Image& img);
RgbaRaster to_rgba_float(const RgbImage& img);

}  // namespace regionpaint
