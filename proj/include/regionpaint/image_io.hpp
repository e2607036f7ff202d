#pragma once

#include <filesystem>
#include <vector>

#include "regionpaint/raster.hpp"

namespace regionpaint {

// PNG files of any color type are accepted on read. Binary PPM (P6) is also
// accepted by read_rgb. All failures throw regionpaint::Error naming the path.

RgbImage read_rgb(const std::filesystem::path& path);
Rgba8Image read_rgba(const std::filesystem::path& path);

/// Reads a single-channel 8- or 16-bit PNG as segment labels.
LabelMap read_label_map(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const RgbImage& img);
void write_png(const std::filesystem::path& path, const Rgba8Image& img);
/// Writes a 16-bit grayscale PNG.
void write_label_map(const std::filesystem::path& path, const LabelMap& labels);

/// True when the linked libpng can write animated PNG.
bool animated_png_supported();

/// Assembles equally sized RGB frame files into one looping animated PNG.
void write_animated_png(const std::filesystem::path& path,
                        const std::vector<std::filesystem::path>& frames, int delay_ms);

}  // namespace regionpaint
