#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gujfont/classify.hpp"
#include "gujfont/raster.hpp"
#include "gujfont/rules.hpp"
#include "gujfont/strokes.hpp"

namespace gujfont {

inline constexpr int kGlyphCanvas = 256;
inline constexpr int kGlyphMargin = 8;
// Seed characters are rescaled to this ink height before extraction.
inline constexpr int kSeedHeight = 160;
// Long side, in pixels, of a stroke placed with size 1.
inline constexpr int kStrokeUnit = 96;

struct StrokeBank {
  std::map<int, std::vector<Stroke>> strokes;  // class -> strokes, extraction order
  int pen_width = 0;

  std::vector<int> missing_classes() const;
  const Stroke& pick(int stroke_class, int occurrence) const;
};

struct SeedCharacter {
  char32_t codepoint = 0;
  BinaryRaster ink{1, 1};
};

// Rescale to the seed height (nearest neighbour).
BinaryRaster normalize_seed(const BinaryRaster& ink);

// Extracts every seed's strokes and labels them with the model.
StrokeBank build_bank(const std::vector<SeedCharacter>& seeds, const Model& model);

// <dir>/bank.json plus one crop PNG per stroke (u0AXX_<n>.png).
void save_bank(const StrokeBank& bank, const std::filesystem::path& dir);
StrokeBank load_bank(const std::filesystem::path& dir);

struct TransformedStroke {
  BinaryRaster ink{1, 1};
  Point a;
  Point b;
};

// Appearance first, then nearest-neighbour scaling of the full-weight crop.
TransformedStroke transform_stroke(const Stroke& s, Appearance ap, double scale);

struct PlacedStroke {
  int stroke_class = 1;
  Rect bbox;  // canvas coordinates
  Point a;
  Point b;
  BinaryRaster ink{1, 1};  // same frame as bbox
};

// Working canvas is larger than the glyph so intermediate placements may
// overhang; `kScratchOffset` maps glyph-canvas (0,0) into it.
inline constexpr int kScratchSize = 3 * kGlyphCanvas;
inline constexpr int kScratchOffset = kGlyphCanvas;

// Adds one placement to the scratch canvas. `placed` holds the earlier
// placements in rule order; the new one is appended.
void place_and_join(BinaryRaster& canvas, std::vector<PlacedStroke>& placed, const StrokePlacement& next,
                    const StrokeBank& bank);

struct GlyphRaster {
  BinaryRaster raster{kGlyphCanvas, kGlyphCanvas};
  char32_t codepoint = 0;
  int variant = 0;
  std::vector<int> classes;  // placement classes in rule order
};

// Ink cropped, shrunk if it cannot fit inside the margins, and centred.
BinaryRaster center_on_canvas(const BinaryRaster& ink);

GlyphRaster generate_character(char32_t cp, const StrokeBank& bank, const RuleSet& rules, int variant = 0);
std::vector<GlyphRaster> generate_all(const StrokeBank& bank, const RuleSet& rules);

// u0A97_v0.png
std::string glyph_file_name(char32_t cp, int variant);

}  // namespace gujfont
