#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gujfont/classify.hpp"
#include "gujfont/compose.hpp"
#include "gujfont/fontio.hpp"
#include "gujfont/rules.hpp"

namespace gujfont {

struct SheetLayout {
  int rows = 1;
  int cols = 1;
  std::vector<char32_t> chars;  // row-major cell order
};

// "2x3" -> rows 2, cols 3.
std::pair<int, int> parse_layout(const std::string& text);
// Comma or whitespace separated codepoints in any form parse_codepoint accepts.
std::vector<char32_t> parse_char_list(const std::string& text);

struct SheetResult {
  std::map<char32_t, BinaryRaster> crops;
  std::vector<std::string> warnings;
};

// Binarize, assign components to grid cells by centroid, merge per cell and
// crop. Throws listing every expected character whose cell is empty.
SheetResult ingest_sheet(const GrayRaster& scan, const SheetLayout& layout);

// Strokes of a glyph image as a rule-learning sample; junctions are the
// centroids of contact between each pair of touching stroke inks.
CharacterSample sample_from_glyph(const BinaryRaster& ink, const Model& model);

// Seed ink normalised like the bank input and centred on the glyph canvas.
BinaryRaster seed_glyph(const BinaryRaster& ink);

enum class Verdict { Pass, Partial, Fail };
const char* to_string(Verdict v);

struct RoundtripRow {
  char32_t codepoint = 0;
  std::vector<int> expected;  // sorted apparent classes
  std::vector<int> found;     // sorted predicted classes
  Verdict verdict = Verdict::Fail;
  std::string note;
};

struct RoundtripReport {
  std::vector<RoundtripRow> rows;
  double overall = 0;  // pass fraction
};

// Equal multisets pass; any shared class is partial.
RoundtripRow roundtrip_glyph(const BinaryRaster& glyph, const std::vector<int>& expected, const Model& model);
// Variant 0 of every ruleset character, read from <dir>/u0AXX_v0.png.
RoundtripReport run_roundtrip_eval(const std::filesystem::path& glyph_dir, const RuleSet& rules, const Model& model);
std::string roundtrip_table(const RoundtripReport& r);
nlohmann::json roundtrip_json(const RoundtripReport& r);

// Sorted apparent classes of a rule variant.
std::vector<int> expected_classes(const Variant& v);

struct FontBuild {
  FontProject project;
  std::map<char32_t, std::string> svgs;
};

// Glyph PNGs named u0AXX_v0.png (variant 0 only) traced, simplified and
// collected into a font.
FontBuild build_font(const std::filesystem::path& glyph_dir, const std::string& family, double epsilon);
FontBuild build_font(const std::map<char32_t, BinaryRaster>& glyphs, const std::string& family, double epsilon);

}  // namespace gujfont
