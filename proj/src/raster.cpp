#include "gujfont/raster.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <utility>

namespace gujfont {

void Rect::extend(Point p) {
  if (empty()) {
    x0 = x1 = p.x;
    y0 = y1 = p.y;
    return;
  }
  x0 = std::min(x0, p.x);
  y0 = std::min(y0, p.y);
  x1 = std::max(x1, p.x);
  y1 = std::max(y1, p.y);
}

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error("raster dimensions must be positive, got " + std::to_string(width) + "x" +
                std::to_string(height));
  }
}

}  // namespace

GrayRaster::GrayRaster(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  values_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayRaster::GrayRaster(int width, int height, std::vector<std::uint8_t> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height);
  if (values_.size() != static_cast<std::size_t>(width) * height) {
    throw Error("gray raster value count does not match dimensions");
  }
}

BinaryRaster::BinaryRaster(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  bits_.assign(static_cast<std::size_t>(width) * height, 0);
}

BinaryRaster::BinaryRaster(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dims(width, height);
  if (bits_.size() != static_cast<std::size_t>(width) * height) {
    throw Error("binary raster bit count does not match dimensions");
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

BinaryRaster BinaryRaster::from_rows(const std::vector<std::string_view>& rows) {
  if (rows.empty()) throw Error("from_rows: no rows");
  const int w = static_cast<int>(rows.front().size());
  BinaryRaster out(w, static_cast<int>(rows.size()));
  for (int y = 0; y < out.height(); ++y) {
    if (static_cast<int>(rows[y].size()) != w) throw Error("from_rows: ragged rows");
    for (int x = 0; x < w; ++x) out.set(x, y, rows[y][x] == '#' || rows[y][x] == '1');
  }
  return out;
}

std::size_t BinaryRaster::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::vector<Point> BinaryRaster::ink_points() const {
  std::vector<Point> pts;
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      if (bits_[index(x, y)]) pts.push_back({x, y});
  return pts;
}

Rect BinaryRaster::bbox() const {
  Rect r;
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      if (bits_[index(x, y)]) r.extend({x, y});
  return r;
}

int BinaryRaster::neighbours(int x, int y) const {
  int n = 0;
  for (const auto& d : kRing) n += ink(x + d.x, y + d.y) ? 1 : 0;
  return n;
}

BinaryRaster BinaryRaster::crop(const Rect& r) const {
  if (r.empty()) throw Error("crop: empty rectangle");
  BinaryRaster out(r.width(), r.height());
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) out.set(x, y, ink(r.x0 + x, r.y0 + y));
  return out;
}

BinaryRaster BinaryRaster::pad(int left, int top, int right, int bottom) const {
  BinaryRaster out(width_ + left + right, height_ + top + bottom);
  out.blit_or(*this, left, top);
  return out;
}

void BinaryRaster::blit_or(const BinaryRaster& other, int dx, int dy) {
  for (int y = 0; y < other.height(); ++y) {
    const int ty = y + dy;
    if (ty < 0 || ty >= height_) continue;
    for (int x = 0; x < other.width(); ++x) {
      const int tx = x + dx;
      if (tx < 0 || tx >= width_) continue;
      if (other.ink(x, y)) set(tx, ty, true);
    }
  }
}

Mask3 Mask3::parse(std::string_view pattern) {
  Mask3 m;
  int i = 0;
  for (char c : pattern) {
    if (c == ' ' || c == '\n' || c == '/') continue;
    if (i >= 9) throw Error("mask pattern has more than 9 cells");
    Cell cell;
    switch (c) {
      case '1': cell = Cell::On; break;
      case '0': cell = Cell::Off; break;
      case '?': cell = Cell::Any; break;
      default: throw Error(std::string("bad mask cell '") + c + "'");
    }
    m.cells_[i++] = cell;
  }
  if (i != 9) throw Error("mask pattern must have exactly 9 cells");
  return m;
}

int Mask3::on_count() const {
  return static_cast<int>(std::count(cells_.begin(), cells_.end(), Cell::On));
}

bool Mask3::matches(const BinaryRaster& img, int x, int y) const {
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const Cell c = at(dx, dy);
      if (c == Cell::Any) continue;
      if (img.ink(x + dx, y + dy) != (c == Cell::On)) return false;
    }
  }
  return true;
}

std::uint8_t ring_bits(const BinaryRaster& img, int x, int y) {
  std::uint8_t r = 0;
  for (int i = 0; i < 8; ++i)
    if (img.ink(x + kRing[i].x, y + kRing[i].y)) r |= static_cast<std::uint8_t>(1u << i);
  return r;
}

int ring_transitions(std::uint8_t ring) {
  int t = 0;
  for (int i = 0; i < 8; ++i) {
    const bool a = (ring >> i) & 1u;
    const bool b = (ring >> ((i + 1) % 8)) & 1u;
    if (!a && b) ++t;
  }
  return t;
}

int otsu_threshold(const GrayRaster& img) {
  std::array<double, 256> hist{};
  for (auto v : img.values()) hist[v] += 1.0;
  const double total = static_cast<double>(img.values().size());
  double sum_all = 0;
  for (int i = 0; i < 256; ++i) sum_all += i * hist[i];

  // Threshold t splits the histogram into [0, t) and [t, 255].
  int best_t = 0;
  double best_var = 0.0;
  double w0 = 0, sum0 = 0;
  for (int t = 1; t <= 255; ++t) {
    w0 += hist[t - 1];
    sum0 += (t - 1) * hist[t - 1];
    const double w1 = total - w0;
    if (w0 == 0 || w1 == 0) continue;
    const double m0 = sum0 / w0;
    const double m1 = (sum_all - sum0) / w1;
    const double var = (w0 / total) * (w1 / total) * (m0 - m1) * (m0 - m1);
    if (var > best_var) {
      best_var = var;
      best_t = t;
    }
  }
  return best_t;
}

BinaryRaster binarize_otsu(const GrayRaster& img) {
  const int t = otsu_threshold(img);
  BinaryRaster out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) out.set(x, y, img.at(x, y) < t);
  return out;
}

namespace {

BinaryRaster dilate(const BinaryRaster& img, const Mask3& k) {
  BinaryRaster out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      bool hit = false;
      // Reflected kernel: output (x,y) is set when some source ink pixel
      // at (x-dx, y-dy) carries an on cell at (dx, dy).
      for (int dy = -1; dy <= 1 && !hit; ++dy)
        for (int dx = -1; dx <= 1 && !hit; ++dx)
          hit = k.at(dx, dy) == Mask3::Cell::On && img.ink(x - dx, y - dy);
      out.set(x, y, hit);
    }
  }
  return out;
}

BinaryRaster erode(const BinaryRaster& img, const Mask3& k) {
  BinaryRaster out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      bool all = true;
      for (int dy = -1; dy <= 1 && all; ++dy)
        for (int dx = -1; dx <= 1 && all; ++dx)
          all = k.at(dx, dy) != Mask3::Cell::On || img.ink(x + dx, y + dy);
      out.set(x, y, all);
    }
  }
  return out;
}

}  // namespace

BinaryRaster morphology(const BinaryRaster& img, MorphKind kind, const Mask3& kernel) {
  if (kernel.on_count() == 0) throw Error("morphology kernel has no on cell");
  switch (kind) {
    case MorphKind::Erode: return erode(img, kernel);
    case MorphKind::Dilate: return dilate(img, kernel);
    case MorphKind::Close: return erode(dilate(img, kernel), kernel);
  }
  throw Error("unknown morphology kind");
}

std::vector<Point> hit_or_miss(const BinaryRaster& img, const Mask3& mask) {
  std::vector<Point> out;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (mask.matches(img, x, y)) out.push_back({x, y});
  return out;
}

std::vector<Component> connected_components(const BinaryRaster& img) {
  const int w = img.width(), h = img.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  std::vector<Component> comps;
  std::deque<Point> queue;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!img.ink(x, y) || label[y * w + x] >= 0) continue;
      const int id = static_cast<int>(comps.size());
      comps.emplace_back();
      Component& c = comps.back();
      label[y * w + x] = id;
      queue.push_back({x, y});
      while (!queue.empty()) {
        const Point p = queue.front();
        queue.pop_front();
        c.pixels.push_back(p);
        c.bbox.extend(p);
        for (const auto& d : kRing) {
          const int nx = p.x + d.x, ny = p.y + d.y;
          if (!img.ink(nx, ny) || label[ny * w + nx] >= 0) continue;
          label[ny * w + nx] = id;
          queue.push_back({nx, ny});
        }
      }
      std::sort(c.pixels.begin(), c.pixels.end(), scan_less);
    }
  }
  // Discovery order already sorts by first pixel; stable sort keeps it as the
  // final tie-break.
  std::stable_sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
    if (a.bbox.y0 != b.bbox.y0) return a.bbox.y0 < b.bbox.y0;
    return a.bbox.x0 < b.bbox.x0;
  });
  return comps;
}

BinaryRaster raster_from_points(int width, int height, const std::vector<Point>& pts) {
  BinaryRaster out(width, height);
  for (const auto& p : pts)
    if (out.in_bounds(p.x, p.y)) out.set(p, true);
  return out;
}

namespace {

// Source span [lo, hi) feeding destination index i along one axis.
std::pair<long, long> cover_span(long i, long src, long dst) {
  if (dst >= src) {
    const long s = (2 * i + 1) * src / (2 * dst);
    return {s, s + 1};
  }
  const long lo = i * src / dst;
  return {lo, std::max(lo + 1, ((i + 1) * src + dst - 1) / dst)};
}

}  // namespace

BinaryRaster resize_cover(const BinaryRaster& img, int new_width, int new_height) {
  BinaryRaster out(new_width, new_height);
  for (int j = 0; j < new_height; ++j) {
    const auto [sy0, sy1] = cover_span(j, img.height(), new_height);
    for (int i = 0; i < new_width; ++i) {
      const auto [sx0, sx1] = cover_span(i, img.width(), new_width);
      bool any = false;
      for (long y = sy0; y < sy1 && !any; ++y)
        for (long x = sx0; x < sx1 && !any; ++x)
          any = img.ink(static_cast<int>(x), static_cast<int>(y));
      out.set(i, j, any);
    }
  }
  return out;
}

GrayRaster to_gray(const BinaryRaster& img) {
  GrayRaster out(img.width(), img.height(), 255);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (img.ink(x, y)) out.set(x, y, 0);
  return out;
}

}  // namespace gujfont
