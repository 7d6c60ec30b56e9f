#pragma once

#include <png.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>

#include "vesselcut/error.hpp"
#include "vesselcut/grid.hpp"

namespace vesselcut {

/// Decodes a PNG keeping its channel layout (gray, gray+alpha, RGB, RGBA),
/// with 16-bit samples reduced to 8 bits.
inline Image8 read_png(const std::filesystem::path& path)
{
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
        throw Error(ErrorCode::IoError, "cannot read PNG " + path.string() + ": " + image.message);
    }
    image.format &= ~static_cast<png_uint_32>(PNG_FORMAT_FLAG_LINEAR | PNG_FORMAT_FLAG_COLORMAP);
    Image8 out;
    out.width = static_cast<int>(image.width);
    out.height = static_cast<int>(image.height);
    out.channels = static_cast<int>(PNG_IMAGE_PIXEL_CHANNELS(image.format));
    out.data.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, out.data.data(), 0, nullptr)) {
        const std::string message = image.message;
        png_image_free(&image);
        throw Error(ErrorCode::IoError, "cannot decode PNG " + path.string() + ": " + message);
    }
    return out;
}

inline void write_png(const std::filesystem::path& path, const Image8& img)
{
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width);
    image.height = static_cast<png_uint_32>(img.height);
    switch (img.channels) {
    case 1: image.format = PNG_FORMAT_GRAY; break;
    case 2: image.format = PNG_FORMAT_GA; break;
    case 3: image.format = PNG_FORMAT_RGB; break;
    case 4: image.format = PNG_FORMAT_RGBA; break;
    default: throw Error(ErrorCode::UnsupportedFormat, "cannot write " + std::to_string(img.channels) + " channels");
    }
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, img.data.data(), 0, nullptr)) {
        throw Error(ErrorCode::IoError, "cannot write PNG " + path.string() + ": " + image.message);
    }
}

inline Image8 to_image(const ByteGrid& g)
{
    Image8 out{g.width(), g.height(), 1, {}};
    out.data.assign(g.values().begin(), g.values().end());
    return out;
}

/// Pixels with any nonzero color sample become 1; alpha is ignored.
inline ByteGrid to_binary(const Image8& img)
{
    const int color = img.channels >= 3 ? 3 : 1;
    ByteGrid out(img.width, img.height, 0);
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            bool set = false;
            for (int k = 0; k < color; ++k) set = set || img.at(r, c, k) != 0;
            out(r, c) = set ? 1 : 0;
        }
    }
    return out;
}

} // namespace vesselcut
