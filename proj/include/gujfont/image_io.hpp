#pragma once

#include <filesystem>
#include <string>

#include "gujfont/raster.hpp"

namespace gujfont {

// PNG (any bit depth/colour type) or PGM P2/P5. Colour is reduced to gray by
// the integer mean of R, G, B; alpha is composited over white first.
GrayRaster read_gray(const std::filesystem::path& path);

// 8-bit grayscale PNG.
void write_png(const std::filesystem::path& path, const GrayRaster& img);
// Ink is written black on white.
void write_png(const std::filesystem::path& path, const BinaryRaster& img);

// Reads an image and binarizes it with Otsu's threshold.
BinaryRaster read_binary(const std::filesystem::path& path);

// Write `contents` to a sibling temp file then rename over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace gujfont
