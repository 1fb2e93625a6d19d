#include "gujfont/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gujfont {

namespace fs = std::filesystem;

namespace {

GrayRaster read_png(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw Error("cannot read PNG " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGBA;
  std::vector<png_byte> rgba(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
    throw Error("cannot decode PNG " + path.string() + ": " + image.message);
  }
  const int w = static_cast<int>(image.width), h = static_cast<int>(image.height);
  std::vector<std::uint8_t> gray(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const png_byte* px = &rgba[i * 4];
    const int a = px[3];
    int sum = 0;
    for (int c = 0; c < 3; ++c) sum += (px[c] * a + 255 * (255 - a) + 127) / 255;
    gray[i] = static_cast<std::uint8_t>(sum / 3);
  }
  return GrayRaster(w, h, std::move(gray));
}

// Reads the next whitespace-separated header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

GrayRaster read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5") throw Error("not a PGM file: " + path.string());
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(pgm_token(in));
    h = std::stoi(pgm_token(in));
    maxval = std::stoi(pgm_token(in));
  } catch (const std::exception&) {
    throw Error("malformed PGM header: " + path.string());
  }
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) throw Error("bad PGM header: " + path.string());
  std::vector<std::uint8_t> values(static_cast<std::size_t>(w) * h);
  auto scale = [maxval](int v) { return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval); };
  for (auto& v : values) {
    int raw = 0;
    if (magic == "P2") {
      const std::string tok = pgm_token(in);
      if (tok.empty()) throw Error("truncated PGM: " + path.string());
      raw = std::stoi(tok);
    } else if (maxval < 256) {
      const int c = in.get();
      if (c == EOF) throw Error("truncated PGM: " + path.string());
      raw = c;
    } else {
      const int hi = in.get(), lo = in.get();
      if (lo == EOF) throw Error("truncated PGM: " + path.string());
      raw = (hi << 8) | lo;
    }
    v = scale(std::min(raw, maxval));
  }
  return GrayRaster(w, h, std::move(values));
}

}  // namespace

GrayRaster read_gray(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  char head[2] = {0, 0};
  in.read(head, 2);
  in.close();
  if (head[0] == 'P' && (head[1] == '2' || head[1] == '5')) return read_pgm(path);
  return read_png(path);
}

void write_png(const fs::path& path, const GrayRaster& img) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.values().data(), 0, nullptr)) {
    throw Error(std::string("PNG encode failed: ") + image.message);
  }
  std::string buf(size, '\0');
  if (!png_image_write_to_memory(&image, buf.data(), &size, 0, img.values().data(), 0, nullptr)) {
    throw Error(std::string("PNG encode failed: ") + image.message);
  }
  buf.resize(size);
  write_file_atomic(path, buf);
}

void write_png(const fs::path& path, const BinaryRaster& img) {
  write_png(path, to_gray(img));
}

BinaryRaster read_binary(const fs::path& path) { return binarize_otsu(read_gray(path)); }

void write_file_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace gujfont
