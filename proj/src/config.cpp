#include "regionpaint/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "regionpaint/error.hpp"

namespace regionpaint {
namespace {

using nlohmann::json;

// Reads keys from one JSON object and complains about any it did not ask for.
class ObjectReader {
  public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw Error("config: '" + label() + "' must be an object");
    }

    template <typename T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw Error("config: '" + dotted(key) + "' has the wrong type");
        }
    }

    void read_optional(const char* key, std::optional<double>& out) {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end()) return;
        if (it->is_null()) {
            out.reset();
            return;
        }
        if (!it->is_number()) throw Error("config: '" + dotted(key) + "' must be a number or null");
        out = it->get<double>();
    }

    const json* child(const char* key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    std::string dotted(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (const auto& [key, value] : j_.items())
            if (!seen_.count(key)) throw Error("config: unknown key '" + dotted(key) + "'");
    }

  private:
    std::string label() const { return path_.empty() ? "<root>" : path_; }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string_view to_string(Linkage linkage) {
    switch (linkage) {
        case Linkage::single: return "single";
        case Linkage::complete: return "complete";
        case Linkage::average: return "average";
    }
    return "average";
}

Linkage linkage_from_string(std::string_view name) {
    if (name == "single") return Linkage::single;
    if (name == "complete") return Linkage::complete;
    if (name == "average") return Linkage::average;
    throw Error("unknown linkage '" + std::string(name) + "' (expected single, complete or average)");
}

bool operator==(const RunConfig& a, const RunConfig& b) { return to_json(a) == to_json(b); }

void validate(const RunConfig& cfg) {
    validate(cfg.segmentation);
    validate(cfg.trace);
    if (cfg.sequencing.cluster_distance_cutoff && !(*cfg.sequencing.cluster_distance_cutoff > 0.0))
        throw Error("sequencing.cluster_distance_cutoff must be positive");
    if (cfg.sequencing.tsp_two_opt_max_passes < 0) throw Error("sequencing.tsp_two_opt_max_passes must be >= 0");
    if (cfg.decomposition.delta && !(*cfg.decomposition.delta > 0.0))
        throw Error("decomposition.delta must be positive");
    if (cfg.decomposition.p_grid && !(*cfg.decomposition.p_grid > 0.0))
        throw Error("decomposition.p_grid must be positive");
    if (cfg.decomposition.p_group < 0) throw Error("decomposition.p_group must be >= 0");
    if (cfg.render.frame_delay_ms < 1) throw Error("render.frame_delay_ms must be >= 1");
    if (cfg.out_dir.empty()) throw Error("out_dir must not be empty");
}

SequencingConfig resolve_sequencing(const RunConfig& cfg, int width, int height) {
    SequencingConfig s;
    s.linkage = cfg.sequencing.linkage;
    s.cluster_distance_cutoff = cfg.sequencing.cluster_distance_cutoff.value_or(default_cluster_cutoff(width, height));
    s.tsp_two_opt_max_passes = cfg.sequencing.tsp_two_opt_max_passes;
    s.seed = cfg.seed;
    return s;
}

DecompositionConfig resolve_decomposition(const RunConfig& cfg, int width, int height) {
    DecompositionConfig d = default_decomposition(width, height);
    if (cfg.decomposition.delta) d.delta = *cfg.decomposition.delta;
    d.p_grid = cfg.decomposition.p_grid.value_or(std::sqrt(d.delta));
    d.p_group = cfg.decomposition.p_group;
    return d;
}

json to_json(const RunConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["out_dir"] = cfg.out_dir;
    j["segmentation"] = {
        {"method", cfg.segmentation.method == SegmentationMethod::builtin ? "builtin" : "label_map"},
        {"granularity", cfg.segmentation.granularity},
        {"iou_threshold", cfg.segmentation.iou_threshold},
        {"min_segment_area", cfg.segmentation.min_segment_area},
    };
    j["trace"] = {
        {"colors_per_segment", cfg.trace.colors_per_segment},
        {"fit_tolerance", cfg.trace.fit_tolerance},
        {"corner_angle_threshold", cfg.trace.corner_angle_threshold},
        {"flatten_tolerance", cfg.trace.flatten_tolerance},
        {"min_region_area", cfg.trace.min_region_area},
    };
    j["sequencing"] = {
        {"linkage", std::string(to_string(cfg.sequencing.linkage))},
        {"cluster_distance_cutoff", optional_json(cfg.sequencing.cluster_distance_cutoff)},
        {"tsp_two_opt_max_passes", cfg.sequencing.tsp_two_opt_max_passes},
    };
    j["decomposition"] = {
        {"delta", optional_json(cfg.decomposition.delta)},
        {"p_grid", optional_json(cfg.decomposition.p_grid)},
        {"p_group", cfg.decomposition.p_group},
    };
    j["render"] = {
        {"blend_mode", std::string(to_string(cfg.render.blend_mode))},
        {"frame_policy", to_string(cfg.render.frame_policy)},
        {"brush", cfg.render.brush},
        {"clip_to_region", cfg.render.clip_to_region},
        {"write_frames", cfg.render.write_frames},
        {"animation", cfg.render.animation},
        {"frame_delay_ms", cfg.render.frame_delay_ms},
    };
    return j;
}

RunConfig run_config_from_json(const json& j) {
    RunConfig cfg;
    ObjectReader root(j, "");
    root.read("seed", cfg.seed);
    root.read("out_dir", cfg.out_dir);

    if (const json* s = root.child("segmentation")) {
        ObjectReader r(*s, "segmentation");
        std::string method = "builtin";
        r.read("method", method);
        if (method == "builtin") cfg.segmentation.method = SegmentationMethod::builtin;
        else if (method == "label_map") cfg.segmentation.method = SegmentationMethod::label_map;
        else throw Error("config: segmentation.method must be builtin or label_map, got '" + method + "'");
        r.read("granularity", cfg.segmentation.granularity);
        r.read("iou_threshold", cfg.segmentation.iou_threshold);
        r.read("min_segment_area", cfg.segmentation.min_segment_area);
        r.finish();
    }
    if (const json* t = root.child("trace")) {
        ObjectReader r(*t, "trace");
        r.read("colors_per_segment", cfg.trace.colors_per_segment);
        r.read("fit_tolerance", cfg.trace.fit_tolerance);
        r.read("corner_angle_threshold", cfg.trace.corner_angle_threshold);
        r.read("flatten_tolerance", cfg.trace.flatten_tolerance);
        r.read("min_region_area", cfg.trace.min_region_area);
        r.finish();
    }
    if (const json* s = root.child("sequencing")) {
        ObjectReader r(*s, "sequencing");
        std::string linkage(to_string(cfg.sequencing.linkage));
        r.read("linkage", linkage);
        cfg.sequencing.linkage = linkage_from_string(linkage);
        r.read_optional("cluster_distance_cutoff", cfg.sequencing.cluster_distance_cutoff);
        r.read("tsp_two_opt_max_passes", cfg.sequencing.tsp_two_opt_max_passes);
        r.finish();
    }
    if (const json* d = root.child("decomposition")) {
        ObjectReader r(*d, "decomposition");
        r.read_optional("delta", cfg.decomposition.delta);
        r.read_optional("p_grid", cfg.decomposition.p_grid);
        r.read("p_group", cfg.decomposition.p_group);
        r.finish();
    }
    if (const json* rj = root.child("render")) {
        ObjectReader r(*rj, "render");
        std::string mode(to_string(cfg.render.blend_mode));
        r.read("blend_mode", mode);
        cfg.render.blend_mode = blend_mode_from_string(mode);
        std::string policy = to_string(cfg.render.frame_policy);
        r.read("frame_policy", policy);
        cfg.render.frame_policy = frame_policy_from_string(policy);
        r.read("brush", cfg.render.brush);
        r.read("clip_to_region", cfg.render.clip_to_region);
        r.read("write_frames", cfg.render.write_frames);
        r.read("animation", cfg.render.animation);
        r.read("frame_delay_ms", cfg.render.frame_delay_ms);
        r.finish();
    }
    root.finish();
    cfg.segmentation.seed = cfg.seed;
    validate(cfg);
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("config not found: '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw Error("config '" + path.string() + "': parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return run_config_from_json(j);
}

}  // namespace regionpaint
