#include "regionpaint/raster.hpp"

#include <algorithm>
#include <cmath>

namespace regionpaint {

std::size_t count_set(const Bitmap& mask) {
    return static_cast<std::size_t>(
        std::count_if(mask.data().begin(), mask.data().end(), [](std::uint8_t v) { return v != 0; }));
}

RgbImage to_rgb8(const RgbaRaster& raster) {
    RgbImage out(raster.width(), raster.height());
    const auto& src = raster.data();
    auto& dst = out.data();
    for (std::size_t i = 0; i < raster.pixel_count(); ++i) {
        for (int c = 0; c < 3; ++c) {
            const double v = std::clamp(src[i * 4 + c], 0.0, 1.0);
            dst[i * 3 + c] = static_cast<std::uint8_t>(std::lround(v * 255.0));
        }
    }
    return out;
}

RgbaRaster to_rgba_float(const Rgba8Image& img) {
    RgbaRaster out(img.width(), img.height());
    for (std::size_t i = 0; i < img.data().size(); ++i) out.data()[i] = img.data()[i] / 255.0;
    return out;
}

RgbaRaster to_rgba_float(const RgbImage& img) {
    RgbaRaster out(img.width(), img.height(), 1.0);
    for (std::size_t i = 0; i < img.pixel_count(); ++i)
        for (int c = 0; c < 3; ++c) out.data()[i * 4 + c] = img.data()[i * 3 + c] / 255.0;
    return out;
}

}  // namespace regionpaint
