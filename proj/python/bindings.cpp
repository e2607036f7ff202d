#include <cstring>
#include <optional>
#include <string>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regionpaint/config.hpp"
#include "regionpaint/error.hpp"
#include "regionpaint/pipeline.hpp"
#include "regionpaint/program.hpp"
#include "regionpaint/renderer.hpp"
#include "regionpaint/stroke_geometry.hpp"

namespace py = pybind11;
using namespace regionpaint;

namespace {

template <typename T, int C>
Raster<T, C> raster_from(const py::array_t<T, py::array::c_style | py::array::forcecast>& a, const char* what) {
    const bool ok = C == 1 ? (a.ndim() == 2 || (a.ndim() == 3 && a.shape(2) == 1)) : (a.ndim() == 3 && a.shape(2) == C);
    if (!ok) throw py::value_error(std::string(what) + ": expected shape (H, W" + (C == 1 ? "" : ", " + std::to_string(C)) + ")");
    Raster<T, C> r(int(a.shape(1)), int(a.shape(0)));
    std::memcpy(r.data().data(), a.data(), r.data().size() * sizeof(T));
    return r;
}

template <typename T, int C>
py::array_t<T> array_from(const Raster<T, C>& r) {
    py::array_t<T> a({py::ssize_t(r.height()), py::ssize_t(r.width()), py::ssize_t(C)});
    std::memcpy(a.mutable_data(), r.data().data(), r.data().size() * sizeof(T));
    return a;
}

RunConfig config_from(const std::optional<std::string>& json_text) {
    return json_text ? run_config_from_json(nlohmann::json::parse(*json_text)) : RunConfig{};
}

std::string report_json(const RunReport& r) { return r.to_json().dump(); }

py::dict paint(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& image,
               const std::optional<std::string>& config_json,
               const std::optional<py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>>& labels) {
    const RgbImage img = raster_from<std::uint8_t, 3>(image, "image");
    RunConfig cfg = config_from(config_json);
    std::optional<LabelMap> lm;
    if (labels) {
        lm = raster_from<std::uint16_t, 1>(*labels, "label_map");
        cfg.segmentation.method = SegmentationMethod::label_map;
    }
    PaintResult res;
    {
        py::gil_scoped_release release;
        res = paint_image(img, cfg, lm ? &*lm : nullptr, "<array>");
    }
    py::dict out;
    out["canvas"] = array_from(res.render.final_canvas);
    out["image"] = array_from(to_rgb8(res.render.final_canvas));
    out["program"] = program_to_json(res.program);
    out["report"] = report_json(res.report);
    return out;
}

py::array_t<double> render_program(const std::string& program_json) {
    const StrokeProgram program = program_from_json(program_json);
    RenderResult res;
    {
        py::gil_scoped_release release;
        res = render_sequence(program, brush_for(program.config), render_options(program.config));
    }
    return array_from(res.final_canvas);
}

}  // namespace

PYBIND11_MODULE(_regionpaint, m) {
    m.doc() = "Region-driven stroke-based painting";

    py::register_exception<StageError>(m, "StageError", PyExc_RuntimeError);
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    m.def("default_config", [] { return to_json(RunConfig{}).dump(); }, "Default run configuration as JSON text.");
    m.def("paint", &paint, py::arg("image"), py::arg("config") = py::none(), py::arg("label_map") = py::none(),
          "Paint an (H, W, 3) uint8 image in memory.");
    m.def("render_program", &render_program, py::arg("program"), "Render program JSON to an (H, W, 4) float canvas.");
    m.def(
        "paint_file",
        [](const std::string& input, const std::optional<std::string>& config_json,
           const std::optional<std::string>& out_dir, const std::optional<std::string>& label_map) {
            RunConfig cfg = config_from(config_json);
            if (out_dir) cfg.out_dir = *out_dir;
            std::optional<std::filesystem::path> lm;
            if (label_map) lm = *label_map;
            py::gil_scoped_release release;
            return report_json(paint_to_directory(input, cfg, lm));
        },
        py::arg("input"), py::arg("config") = py::none(), py::arg("out_dir") = py::none(),
        py::arg("label_map") = py::none());
    m.def(
        "replay",
        [](const std::string& program_path, const std::optional<std::string>& out_dir) {
            std::optional<std::filesystem::path> dir;
            if (out_dir) dir = *out_dir;
            py::gil_scoped_release release;
            return report_json(replay_to_directory(program_path, dir));
        },
        py::arg("program"), py::arg("out_dir") = py::none());
    m.def(
        "min_rotated_rect",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& pts) {
            if (pts.ndim() != 2 || pts.shape(1) != 2) throw py::value_error("points: expected shape (N, 2)");
            std::vector<Point2> v;
            for (py::ssize_t i = 0; i < pts.shape(0); ++i) v.push_back({pts.at(i, 0), pts.at(i, 1)});
            const OrientedRect r = min_rotated_rect(v);
            return py::make_tuple(r.center.x, r.center.y, r.w, r.h, r.theta);
        },
        py::arg("points"), "Minimum-area enclosing rectangle as (cx, cy, w, h, theta_degrees).");
    m.def(
        "blend",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& base,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& overlay, const std::string& mode) {
            const RgbaRaster b = raster_from<double, 4>(base, "base");
            const RgbaRaster o = raster_from<double, 4>(overlay, "overlay");
            if (!b.same_size(o)) throw py::value_error("base and overlay sizes differ");
            return array_from(regionpaint::blend(b, o, blend_mode_from_string(mode)));
        },
        py::arg("base"), py::arg("overlay"), py::arg("mode") = "paper", "Blend two (H, W, 4) float rasters.");
}
