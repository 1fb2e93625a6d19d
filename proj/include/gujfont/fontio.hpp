#pragma once

#include <map>
#include <string>
#include <vector>

#include "gujfont/raster.hpp"

namespace gujfont {

inline constexpr int kEm = 1000;
inline constexpr int kAscent = 800;
inline constexpr int kDescent = 200;
inline constexpr int kSideBearing = 50;

struct EmPoint {
  int x = 0;
  int y = 0;

  friend bool operator==(const EmPoint&, const EmPoint&) = default;
};

// Closed polygon; the closing edge is implicit. y grows upward in em units.
struct Contour {
  std::vector<EmPoint> points;
  bool hole = false;

  friend bool operator==(const Contour&, const Contour&) = default;
};

// Border following (Suzuki-Abe) over 8-connected ink. Each contour is the
// cycle of boundary pixel centres, in raster coordinates. Outer borders run
// clockwise on screen, hole borders counter-clockwise.
struct PixelContour {
  std::vector<Point> points;
  bool hole = false;
};
std::vector<PixelContour> trace_pixel_contours(const BinaryRaster& img);

// Pixel centre (x+0.5, y+0.5) of a 256 px canvas scaled onto the em square,
// top of the canvas at the ascent line.
EmPoint pixel_to_em(Point p, int canvas = 256);

// Traced contours in em units; contours under 3 points are dropped.
std::vector<Contour> trace_contours(const BinaryRaster& glyph);

// Shoelace area with screen orientation: positive for clockwise as drawn.
double screen_area(const Contour& c);

// Douglas-Peucker on an open polyline; endpoints always kept.
std::vector<EmPoint> douglas_peucker(const std::vector<EmPoint>& pts, double epsilon);
// Closed-contour variant. epsilon 0 returns the input unchanged.
std::vector<Contour> simplify(const std::vector<Contour>& cs, double epsilon);

// Even-odd scanline fill at pixel centres plus the polygon edges themselves,
// so zero-area slivers still paint.
BinaryRaster rasterize(const std::vector<Contour>& cs, int canvas = 256);

struct FontGlyph {
  char32_t codepoint = 0;
  std::vector<Contour> contours;
  int advance = 0;

  friend bool operator==(const FontGlyph&, const FontGlyph&) = default;
};

struct FontProject {
  std::string family_name = "Handwriting";
  std::map<char32_t, FontGlyph> glyphs;

  // Shifts the outline so its left edge sits at the side bearing and sets the
  // advance to width + both bearings. Throws on empty or non-Gujarati input.
  void add_glyph(char32_t cp, std::vector<Contour> contours);

  friend bool operator==(const FontProject&, const FontProject&) = default;
};

std::string export_svg(char32_t cp, const std::vector<Contour>& contours);
std::string export_sfd(const FontProject& fp);
FontProject parse_sfd(const std::string& text);

}  // namespace gujfont
