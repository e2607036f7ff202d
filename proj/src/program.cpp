#include "regionpaint/program.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "regionpaint/error.hpp"

namespace regionpaint {
namespace {

using nlohmann::json;

json point_json(Point2 p) { return json::array({p.x, p.y}); }

json curve_json(const CurveSegment& c) {
    json pts = json::array();
    for (const Point2& p : c.control_points()) pts.push_back(point_json(p));
    json j{{"kind", std::string(to_string(c.kind()))}, {"points", pts}};
    if (c.kind() == CurveKind::EllipticalArc) {
        j["ratio"] = c.ellipse_ratio();
        j["angle"] = c.ellipse_angle();
    }
    return j;
}

json path_json(const CurvePath& path) {
    json a = json::array();
    for (const CurveSegment& c : path) a.push_back(curve_json(c));
    return a;
}

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw Error(where + ": expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw Error(where + ": missing '" + key + "'");
    return *it;
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw Error(where + ": '" + key + "' has the wrong type");
    }
}

Point2 parse_point(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(where + ": a point must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

CurveSegment parse_curve(const json& j, const std::string& where) {
    const CurveKind kind = curve_kind_from_string(get<std::string>(j, "kind", where));
    const json& pts = field(j, "points", where);
    if (!pts.is_array()) throw Error(where + ": 'points' must be an array");
    std::vector<Point2> cps;
    for (std::size_t i = 0; i < pts.size(); ++i) cps.push_back(parse_point(pts[i], where + ".points[" + std::to_string(i) + "]"));
    double ratio = 1.0, angle = 0.0;
    if (kind == CurveKind::EllipticalArc) {
        ratio = get<double>(j, "ratio", where);
        angle = get<double>(j, "angle", where);
    }
    try {
        return CurveSegment(kind, std::move(cps), ratio, angle);
    } catch (const Error& e) {
        throw Error(where + ": " + e.what());
    }
}

CurvePath parse_path(const json& j, const std::string& where) {
    if (!j.is_array()) throw Error(where + ": a path must be an array of curves");
    CurvePath path;
    for (std::size_t i = 0; i < j.size(); ++i) path.push_back(parse_curve(j[i], where + "[" + std::to_string(i) + "]"));
    return path;
}

Rgb parse_rgb(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw Error(where + ": fill must be [r, g, b]");
    Rgb c;
    std::uint8_t* ch[3] = {&c.r, &c.g, &c.b};
    for (int i = 0; i < 3; ++i) {
        if (!j[i].is_number_integer() || j[i].get<long long>() < 0 || j[i].get<long long>() > 255)
            throw Error(where + ": fill channels must be integers in [0, 255]");
        *ch[i] = static_cast<std::uint8_t>(j[i].get<int>());
    }
    return c;
}

std::uint8_t parse_channel(const json& obj, const char* key, const std::string& where) {
    const long long v = get<long long>(obj, key, where);
    if (v < 0 || v > 255) throw Error(where + ": '" + key + "' must be in [0, 255]");
    return static_cast<std::uint8_t>(v);
}

}  // namespace

void validate(const StrokeProgram& program) {
    if (program.width <= 0 || program.height <= 0) throw Error("program: image dimensions must be positive");
    validate(program.config);
    std::map<int, int> region_segment;
    for (const RegionRecord& r : program.regions) {
        const std::string where = "program: region " + std::to_string(r.id);
        if (!region_segment.emplace(r.id, r.segment_id).second) throw Error(where + " is defined twice");
        if (r.path.empty() || !is_closed(r.path)) throw Error(where + " has an open or empty outer path");
        for (const CurvePath& h : r.holes)
            if (h.empty() || !is_closed(h)) throw Error(where + " has an open or empty hole");
    }
    bool first = true;
    int last_rank = 0;
    for (const StrokeRecord& s : program.strokes) {
        const std::string where = "program: stroke rank " + std::to_string(s.rank);
        if (!first && s.rank <= last_rank)
            throw Error(where + " is out of order (ranks must be strictly increasing, previous was " +
                        std::to_string(last_rank) + ")");
        first = false;
        last_rank = s.rank;
        const auto it = region_segment.find(s.region_id);
        if (it == region_segment.end()) throw Error(where + " references unknown region " + std::to_string(s.region_id));
        if (it->second != s.segment_id)
            throw Error(where + " names segment " + std::to_string(s.segment_id) + " but region " +
                        std::to_string(s.region_id) + " belongs to segment " + std::to_string(it->second));
        const StrokeParams& p = s.params;
        if (!(p.h > 0.0) || !(p.w >= p.h)) throw Error(where + ": needs w >= h > 0");
        if (!(p.theta >= 0.0 && p.theta < 180.0)) throw Error(where + ": theta must be in [0, 180)");
    }
}

std::string program_to_json(const StrokeProgram& program) {
    json j;
    j["format"] = std::string(kProgramFormat);
    j["version"] = kProgramVersion;
    j["input"] = {{"path", program.input_path}, {"width", program.width}, {"height", program.height}};
    j["config"] = to_json(program.config);
    json regions = json::array();
    for (const RegionRecord& r : program.regions) {
        json holes = json::array();
        for (const CurvePath& h : r.holes) holes.push_back(path_json(h));
        regions.push_back({{"id", r.id},
                           {"segment_id", r.segment_id},
                           {"fill", {r.fill.r, r.fill.g, r.fill.b}},
                           {"path", path_json(r.path)},
                           {"holes", holes}});
    }
    j["regions"] = regions;
    json strokes = json::array();
    for (const StrokeRecord& s : program.strokes) {
        strokes.push_back({{"rank", s.rank},
                           {"segment_id", s.segment_id},
                           {"group_id", s.group_id},
                           {"region_id", s.region_id},
                           {"x", s.params.x},
                           {"y", s.params.y},
                           {"w", s.params.w},
                           {"h", s.params.h},
                           {"theta", s.params.theta},
                           {"r", s.params.r},
                           {"g", s.params.g},
                           {"b", s.params.b}});
    }
    j["strokes"] = strokes;
    return j.dump(1) + "\n";
}

StrokeProgram program_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error("stroke program: parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    const std::string top = "stroke program";
    if (get<std::string>(j, "format", top) != kProgramFormat)
        throw Error(top + ": not a stroke program (format is '" + j["format"].get<std::string>() + "')");
    const int version = get<int>(j, "version", top);
    if (version != kProgramVersion)
        throw Error(top + ": unsupported version " + std::to_string(version) + " (this build reads version " +
                    std::to_string(kProgramVersion) + ")");

    StrokeProgram p;
    const json& input = field(j, "input", top);
    p.input_path = get<std::string>(input, "path", "input");
    p.width = get<int>(input, "width", "input");
    p.height = get<int>(input, "height", "input");
    p.config = run_config_from_json(field(j, "config", top));

    const json& regions = field(j, "regions", top);
    if (!regions.is_array()) throw Error(top + ": 'regions' must be an array");
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const std::string where = "regions[" + std::to_string(i) + "]";
        const json& r = regions[i];
        RegionRecord rec;
        rec.id = get<int>(r, "id", where);
        rec.segment_id = get<int>(r, "segment_id", where);
        rec.fill = parse_rgb(field(r, "fill", where), where);
        rec.path = parse_path(field(r, "path", where), where + ".path");
        const json& holes = field(r, "holes", where);
        if (!holes.is_array()) throw Error(where + ": 'holes' must be an array");
        for (std::size_t h = 0; h < holes.size(); ++h)
            rec.holes.push_back(parse_path(holes[h], where + ".holes[" + std::to_string(h) + "]"));
        p.regions.push_back(std::move(rec));
    }

    const json& strokes = field(j, "strokes", top);
    if (!strokes.is_array()) throw Error(top + ": 'strokes' must be an array");
    for (std::size_t i = 0; i < strokes.size(); ++i) {
        const std::string where = "strokes[" + std::to_string(i) + "]";
        const json& s = strokes[i];
        StrokeRecord rec;
        rec.rank = get<int>(s, "rank", where);
        rec.segment_id = get<int>(s, "segment_id", where);
        rec.group_id = get<int>(s, "group_id", where);
        rec.region_id = get<int>(s, "region_id", where);
        rec.params.x = get<double>(s, "x", where);
        rec.params.y = get<double>(s, "y", where);
        rec.params.w = get<double>(s, "w", where);
        rec.params.h = get<double>(s, "h", where);
        rec.params.theta = get<double>(s, "theta", where);
        rec.params.r = parse_channel(s, "r", where);
        rec.params.g = parse_channel(s, "g", where);
        rec.params.b = parse_channel(s, "b", where);
        p.strokes.push_back(rec);
    }
    validate(p);
    return p;
}

void save_program(const std::filesystem::path& path, const StrokeProgram& program) {
    validate(program);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write stroke program '" + path.string() + "'");
    out << program_to_json(program);
    if (!out) throw Error("failed writing stroke program '" + path.string() + "'");
}

StrokeProgram load_program(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("stroke program not found: '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return program_from_json(buf.str());
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

}  // namespace regionpaint
