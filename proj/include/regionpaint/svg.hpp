#pragma once

#include <filesystem>
#include <string>

#include "regionpaint/curves.hpp"
#include "regionpaint/program.hpp"

namespace regionpaint {

/// SVG path data for a closed path ("M ... Z").
std::string svg_path_data(const CurvePath& path);

/// One <g> per segment, one even-odd filled <path> per region (holes as
/// extra subpaths), in program region order.
std::string regions_to_svg(const StrokeProgram& program);

void write_svg(const std::filesystem::path& path, const StrokeProgram& program);

}  // namespace regionpaint
