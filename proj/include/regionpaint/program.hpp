#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "regionpaint/config.hpp"
#include "regionpaint/curves.hpp"
#include "regionpaint/stroke_geometry.hpp"

namespace regionpaint {

inline constexpr std::string_view kProgramFormat = "regionpaint-stroke-program";
inline constexpr int kProgramVersion = 1;

struct RegionRecord {
    int id = 0;
    int segment_id = 0;
    Rgb fill;
    CurvePath path;
    std::vector<CurvePath> holes;

    friend bool operator==(const RegionRecord&, const RegionRecord&) = default;
};

struct StrokeRecord {
    int rank = 0;
    int segment_id = 0;
    int group_id = 0;
    int region_id = 0;
    StrokeParams params;

    friend bool operator==(const StrokeRecord&, const StrokeRecord&) = default;
};

/// The serialized painting: segment -> group -> region -> stroke. A program
/// without strokes is the hand-off between the vectorize and sequence stages.
struct StrokeProgram {
    std::string input_path;
    int width = 0;
    int height = 0;
    RunConfig config;
    std::vector<RegionRecord> regions;
    std::vector<StrokeRecord> strokes;

    friend bool operator==(const StrokeProgram&, const StrokeProgram&) = default;
};

/// Ranks strictly increasing, region ids unique, every stroke's region known
/// and consistent with its segment, stroke parameters canonical.
void validate(const StrokeProgram& program);

std::string program_to_json(const StrokeProgram& program);
/// Parse errors report the byte offset.
StrokeProgram program_from_json(std::string_view text);

void save_program(const std::filesystem::path& path, const StrokeProgram& program);
StrokeProgram load_program(const std::filesystem::path& path);

}  // namespace regionpaint
