#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "gujfont/error.hpp"

namespace gujfont {

struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Row-major scan order: top to bottom, then left to right.
inline bool scan_less(const Point& a, const Point& b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

// Inclusive pixel rectangle. An empty rectangle has x1 < x0.
struct Rect {
  int x0 = 0;
  int y0 = 0;
  int x1 = -1;
  int y1 = -1;

  bool empty() const { return x1 < x0 || y1 < y0; }
  int width() const { return empty() ? 0 : x1 - x0 + 1; }
  int height() const { return empty() ? 0 : y1 - y0 + 1; }
  bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  void extend(Point p);

  friend bool operator==(const Rect&, const Rect&) = default;
};

class GrayRaster {
public:
  GrayRaster(int width, int height, std::uint8_t fill = 255);
  GrayRaster(int width, int height, std::vector<std::uint8_t> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint8_t at(int x, int y) const { return values_[index(x, y)]; }
  void set(int x, int y, std::uint8_t v) { values_[index(x, y)] = v; }
  const std::vector<std::uint8_t>& values() const { return values_; }

private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_;
  int height_;
  std::vector<std::uint8_t> values_;
};

// 1 = ink. Reads outside the raster return 0 (virtual background border).
class BinaryRaster {
public:
  BinaryRaster(int width, int height);
  BinaryRaster(int width, int height, std::vector<std::uint8_t> bits);

  // Rows of '#' (ink) and '.' (background); convenient for tests and fixtures.
  static BinaryRaster from_rows(const std::vector<std::string_view>& rows);

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  bool ink(int x, int y) const { return in_bounds(x, y) && bits_[index(x, y)] != 0; }
  bool ink(Point p) const { return ink(p.x, p.y); }
  void set(int x, int y, bool on) { bits_[index(x, y)] = on ? 1 : 0; }
  void set(Point p, bool on) { set(p.x, p.y, on); }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::vector<Point> ink_points() const;  // row-major order
  Rect bbox() const;
  // Number of ink pixels among the 8 neighbours.
  int neighbours(int x, int y) const;
  // Copy of the given rectangle; pixels outside the raster read as 0.
  BinaryRaster crop(const Rect& r) const;
  // New raster of the given size with this raster's content placed at (dx, dy).
  BinaryRaster pad(int left, int top, int right, int bottom) const;
  // OR `other` into this raster with its origin placed at (dx, dy); clipped.
  void blit_or(const BinaryRaster& other, int dx, int dy);

  friend bool operator==(const BinaryRaster&, const BinaryRaster&) = default;

private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

// 3x3 structuring element over {on, off, don't-care}, cells in row-major order.
class Mask3 {
public:
  enum class Cell : std::uint8_t { Off, On, Any };

  Mask3() { cells_.fill(Cell::Any); }
  explicit Mask3(const std::array<Cell, 9>& cells) : cells_(cells) {}
  // Nine characters: '1' on, '0' off, '?' don't-care (whitespace ignored).
  static Mask3 parse(std::string_view pattern);
  static Mask3 full() { return parse("111111111"); }

  Cell at(int dx, int dy) const { return cells_[(dy + 1) * 3 + (dx + 1)]; }
  void set(int dx, int dy, Cell c) { cells_[(dy + 1) * 3 + (dx + 1)] = c; }
  int on_count() const;
  bool matches(const BinaryRaster& img, int x, int y) const;

  friend bool operator==(const Mask3&, const Mask3&) = default;

private:
  std::array<Cell, 9> cells_;
};

// The 8 neighbour offsets in the clockwise order P2..P9 used by
// Zhang-Suen: N, NE, E, SE, S, SW, W, NW.
inline constexpr std::array<Point, 8> kRing = {
    Point{0, -1}, Point{1, -1}, Point{1, 0},  Point{1, 1},
    Point{0, 1},  Point{-1, 1}, Point{-1, 0}, Point{-1, -1}};

// Ring occupancy as an 8-bit word, bit i set when kRing[i] is ink.
std::uint8_t ring_bits(const BinaryRaster& img, int x, int y);
// Number of 0->1 transitions walking the ring once around (Zhang-Suen's A(P)).
int ring_transitions(std::uint8_t ring);

int otsu_threshold(const GrayRaster& img);
// Ink is dark: value < threshold becomes 1. A constant image has no ink.
BinaryRaster binarize_otsu(const GrayRaster& img);

enum class MorphKind { Erode, Dilate, Close };
// Set morphology; cells outside the raster read as 0. Don't-care kernel cells
// are ignored. Throws if the kernel has no on cell.
BinaryRaster morphology(const BinaryRaster& img, MorphKind kind, const Mask3& kernel);

// Every pixel whose neighbourhood matches the mask, in row-major order.
std::vector<Point> hit_or_miss(const BinaryRaster& img, const Mask3& mask);

struct Component {
  std::vector<Point> pixels;  // row-major order
  Rect bbox;
};

// Maximal 8-connected ink sets ordered by (bbox top, bbox left), then by
// first pixel in scan order.
std::vector<Component> connected_components(const BinaryRaster& img);

BinaryRaster raster_from_points(int width, int height, const std::vector<Point>& pts);

// Nearest-neighbour resize that never drops ink: each destination pixel is
// the OR of the source pixels it covers (plain nearest sampling when enlarging).
BinaryRaster resize_cover(const BinaryRaster& img, int new_width, int new_height);

GrayRaster to_gray(const BinaryRaster& img);

}  // namespace gujfont
