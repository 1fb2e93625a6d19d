#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gujfont/classify.hpp"
#include "gujfont/raster.hpp"

namespace gujfont {

struct Vec2 {
  double x = 0;
  double y = 0;
};

// Stamps a round pen of the given radius along the segment; pixel centres
// sit at integer coordinates.
void draw_segment(BinaryRaster& img, Vec2 a, Vec2 b, double radius);
void draw_polyline(BinaryRaster& img, const std::vector<Vec2>& pts, double radius);

// Centre line of reference stroke class 1-6 in a 100x100 design box
// (y grows downward):
//   1 vertical line, 2 horizontal line, 3 half circle open to the right,
//   4 half circle open to the left, 5 half circle open upward,
//   6 half circle open downward.
std::vector<Vec2> reference_path(int stroke_class);

struct Perturbation {
  double scale_x = 1.0;
  double scale_y = 1.0;
  double rotation_deg = 0.0;
  int jitter = -1;  // ring index of the extra dilation cell, -1 for none
};

inline constexpr int kSynthCanvas = 100;
inline constexpr double kSynthPenRadius = 2.5;

// Renders a reference stroke on a 100x100 canvas: the design box is shrunk
// to 80% around its centre, then scaled and rotated about the centre.
BinaryRaster render_reference(int stroke_class, const Perturbation& p = {});

// Seeded perturbation: scale in [0.9, 1.1] per axis, rotation in
// [-15, 15] degrees, and a one-cell jitter dilation half of the time.
Perturbation random_perturbation(std::uint64_t seed);

// Runs one rendered stroke through extraction and normalisation, returning
// the 30x30 skeleton of its longest stroke.
BinaryRaster normalize_rendered(const BinaryRaster& img);

// per_class rows for each class 1..6, classes in order. With perturb=false
// every row of a class is the unperturbed reference.
Dataset synthesize_dataset(int per_class, std::uint64_t seed, bool perturb = true);

}  // namespace gujfont

namespace gujfont {

// The three bundled seed characters: U+0AA1, U+0AB3, U+0A9E.
inline constexpr std::array<char32_t, 3> kSeedChars = {0x0AA1, 0x0AB3, 0x0A9E};

// Ink outline of a seed character on a 200x200 canvas, pen about 7 px.
BinaryRaster render_seed_ink(char32_t cp);

// Scan-like gray image: dark ink on light paper with seeded noise.
GrayRaster scan_like(const BinaryRaster& ink, std::uint64_t seed);

// Seeds laid out on a 1 x N grid of 220 px cells, scanned with noise.
GrayRaster render_seed_sheet(std::uint64_t seed);

}  // namespace gujfont
