#include "regionpaint/image_io.hpp"

#include <png.h>

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include "regionpaint/error.hpp"

namespace regionpaint {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw Error("cannot open '" + path.string() + "': " + std::strerror(errno));
    return f;
}

struct Decoded {
    int width = 0;
    int height = 0;
    int channels = 0;
    int bit_depth = 8;
    std::vector<std::uint8_t> bytes;  // row-major, big-endian samples swapped to host order
};

// Reads any PNG, expanding palettes and low bit depths. 16-bit samples are
// stripped to 8 unless keep16 is set.
Decoded decode_png(const std::filesystem::path& path, bool keep16) {
    FilePtr fp = open_file(path, "rb");
    unsigned char sig[8] = {};
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw Error("'" + path.string() + "' is not a PNG file");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error("libpng initialisation failed");
    }
    Decoded out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error("corrupt PNG data in '" + path.string() + "'");
    }
    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);

    int transforms = PNG_TRANSFORM_EXPAND | PNG_TRANSFORM_PACKING;
    if (!keep16) transforms |= PNG_TRANSFORM_STRIP_16;
    if (keep16 && std::endian::native == std::endian::little) transforms |= PNG_TRANSFORM_SWAP_ENDIAN;
    png_read_png(png, info, transforms, nullptr);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.channels = png_get_channels(png, info);
    out.bit_depth = png_get_bit_depth(png, info);
    const std::size_t row_bytes = png_get_rowbytes(png, info);
    png_bytepp rows = png_get_rows(png, info);
    out.bytes.resize(row_bytes * out.height);
    for (int y = 0; y < out.height; ++y) std::memcpy(out.bytes.data() + y * row_bytes, rows[y], row_bytes);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

void encode_png(const std::filesystem::path& path, int width, int height, int color_type,
                int bit_depth, const std::uint8_t* data, std::size_t row_bytes) {
    FilePtr fp = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("libpng initialisation failed");
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) rows[y] = const_cast<png_bytep>(data + y * row_bytes);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("failed writing PNG '" + path.string() + "'");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_rows(png, info, rows.data());
    int transforms = PNG_TRANSFORM_IDENTITY;
    if (bit_depth == 16 && std::endian::native == std::endian::little) transforms |= PNG_TRANSFORM_SWAP_ENDIAN;
    png_write_png(png, info, transforms, nullptr);
    png_destroy_write_struct(&png, &info);
}

bool has_ppm_magic(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    char magic[2] = {};
    in.read(magic, 2);
    return in && magic[0] == 'P' && magic[1] == '6';
}

RgbImage read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::string magic;
    in >> magic;
    auto next_int = [&]() {
        int v = -1;
        while (in >> std::ws && in.peek() == '#') in.ignore(1 << 20, '\n');
        in >> v;
        return v;
    };
    const int w = next_int();
    const int h = next_int();
    const int maxval = next_int();
    if (!in || w < 1 || h < 1 || maxval != 255)
        throw Error("unsupported or malformed PPM header in '" + path.string() + "'");
    in.get();
    RgbImage img(w, h);
    in.read(reinterpret_cast<char*>(img.data().data()), static_cast<std::streamsize>(img.data().size()));
    if (!in) throw Error("truncated PPM data in '" + path.string() + "'");
    return img;
}

}  // namespace

RgbImage read_rgb(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw Error("image not found: '" + path.string() + "'");
    if (has_ppm_magic(path)) return read_ppm(path);
    const Decoded d = decode_png(path, false);
    RgbImage img(d.width, d.height);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const std::uint8_t* s = d.bytes.data() + i * d.channels;
        std::uint8_t* p = img.data().data() + i * 3;
        if (d.channels >= 3) {
            p[0] = s[0], p[1] = s[1], p[2] = s[2];
        } else {
            p[0] = p[1] = p[2] = s[0];
        }
    }
    return img;
}

Rgba8Image read_rgba(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw Error("image not found: '" + path.string() + "'");
    const Decoded d = decode_png(path, false);
    Rgba8Image img(d.width, d.height);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const std::uint8_t* s = d.bytes.data() + i * d.channels;
        std::uint8_t* p = img.data().data() + i * 4;
        switch (d.channels) {
            case 1: p[0] = p[1] = p[2] = s[0], p[3] = 255; break;
            case 2: p[0] = p[1] = p[2] = s[0], p[3] = s[1]; break;
            case 3: p[0] = s[0], p[1] = s[1], p[2] = s[2], p[3] = 255; break;
            default: std::memcpy(p, s, 4); break;
        }
    }
    return img;
}

LabelMap read_label_map(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw Error("label map not found: '" + path.string() + "'");
    const Decoded d = decode_png(path, true);
    if (d.channels != 1)
        throw Error("label map '" + path.string() + "' must be single-channel, found " +
                    std::to_string(d.channels) + " channels");
    LabelMap labels(d.width, d.height);
    for (std::size_t i = 0; i < labels.pixel_count(); ++i) {
        if (d.bit_depth == 16) {
            std::uint16_t v;
            std::memcpy(&v, d.bytes.data() + i * 2, 2);
            labels.data()[i] = v;
        } else {
            labels.data()[i] = d.bytes[i];
        }
    }
    return labels;
}

void write_png(const std::filesystem::path& path, const RgbImage& img) {
    encode_png(path, img.width(), img.height(), PNG_COLOR_TYPE_RGB, 8, img.data().data(),
               static_cast<std::size_t>(img.width()) * 3);
}

void write_png(const std::filesystem::path& path, const Rgba8Image& img) {
    encode_png(path, img.width(), img.height(), PNG_COLOR_TYPE_RGBA, 8, img.data().data(),
               static_cast<std::size_t>(img.width()) * 4);
}

void write_label_map(const std::filesystem::path& path, const LabelMap& labels) {
    encode_png(path, labels.width(), labels.height(), PNG_COLOR_TYPE_GRAY, 16,
               reinterpret_cast<const std::uint8_t*>(labels.data().data()),
               static_cast<std::size_t>(labels.width()) * 2);
}

bool animated_png_supported() {
#ifdef PNG_WRITE_APNG_SUPPORTED
    return true;
#else
    return false;
#endif
}

void write_animated_png(const std::filesystem::path& path,
                        const std::vector<std::filesystem::path>& frames, int delay_ms) {
#ifdef PNG_WRITE_APNG_SUPPORTED
    if (frames.empty()) throw Error("animated PNG needs at least one frame");
    const RgbImage first = read_rgb(frames.front());
    const int w = first.width();
    const int h = first.height();

    FilePtr fp = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("libpng initialisation failed");
    }
    RgbImage frame;
    std::vector<png_bytep> rows(static_cast<std::size_t>(h));
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("failed writing animated PNG '" + path.string() + "'");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_acTL(png, info, static_cast<png_uint_32>(frames.size()), 0);
    png_write_info(png, info);
    for (const auto& frame_path : frames) {
        try {
            frame = read_rgb(frame_path);
        } catch (...) {
            png_destroy_write_struct(&png, &info);
            throw;
        }
        if (!frame.same_size(w, h)) png_error(png, "frame size mismatch");
        for (int y = 0; y < h; ++y) rows[y] = frame.pixel(0, y);
        png_write_frame_head(png, info, rows.data(), w, h, 0, 0,
                             static_cast<png_uint_16>(delay_ms), 1000, PNG_DISPOSE_OP_NONE,
                             PNG_BLEND_OP_SOURCE);
        png_write_image(png, rows.data());
        png_write_frame_tail(png, info);
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
#else
    (void)path, (void)frames, (void)delay_ms;
    throw Error("this libpng build cannot write animated PNG");
#endif
}

}  // namespace regionpaint
