#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gujfont/raster.hpp"

namespace gujfont {

inline constexpr int kStrokeSize = 30;
inline constexpr int kStrokeInner = 28;

struct Stroke {
  BinaryRaster crop{1, 1};      // ink of this stroke at source resolution
  BinaryRaster skeleton{1, 1};  // same frame as crop
  Point origin;                 // crop's top-left corner in the source raster
  BinaryRaster normalized{kStrokeSize, kStrokeSize};
  std::vector<Point> endpoints;  // crop coordinates; [0] is A, [1] is B
  std::optional<int> class_label;
  std::optional<std::string> source_char;
};

enum class JunctionKind { T, Y, Cross };

struct Junction {
  Point at;
  JunctionKind kind;
};

struct JunctionReport {
  std::vector<Point> endpoints;
  std::vector<Junction> junctions;
};

const char* to_string(JunctionKind k);

// Centre on with exactly one of the eight neighbours on.
const std::array<Mask3, 8>& endpoint_masks();

struct JunctionTemplate {
  Mask3 mask;
  JunctionKind kind;
};

// Every centre-on pattern with 3 or 4 pairwise non-adjacent neighbours:
// 8 T (two branches collinear), 8 Y and 2 cross templates.
const std::vector<JunctionTemplate>& junction_templates();

// Union of the endpoint-mask hits, in row-major order.
std::vector<Point> detect_endpoints(const BinaryRaster& sk);

// Ink pixels with at least three neighbours that also split their ring into
// at least three separate runs, so removing them disconnects branches.
JunctionReport detect_junctions(const BinaryRaster& sk);

struct DecomposeStats {
  std::size_t junction_pixels = 0;
  std::size_t debris_pixels = 0;
};

// Strokes in component order. crop == skeleton for this overload.
std::vector<Stroke> decompose(const BinaryRaster& sk, DecomposeStats* stats = nullptr);

// Decompose the skeleton, then hand every pixel of `ink` to the stroke whose
// skeleton reaches it first (multi-source breadth-first over ink).
std::vector<Stroke> decompose_with_ink(const BinaryRaster& sk, const BinaryRaster& ink,
                                       DecomposeStats* stats = nullptr);

// Tight crop, aspect-preserving resize so the long side is 28, re-thin,
// centre in 28x28 and pad to 30x30.
BinaryRaster preprocess_stroke(const BinaryRaster& crop);

// Removes endpoint branches of at most max_len pixels that end in a branch
// pixel.
BinaryRaster prune_spurs(const BinaryRaster& sk, int max_len);

// Median over ink pixels of min(horizontal run, vertical run).
int estimate_pen_width(const BinaryRaster& ink);

struct ExtractOptions {
  int min_stroke_px = 0;  // 0: use the estimated pen width
};

// Full character path: close, thin, clean, prune spurs, decompose with ink.
std::vector<Stroke> extract_strokes(const BinaryRaster& ink, const ExtractOptions& opt = {});

}  // namespace gujfont
