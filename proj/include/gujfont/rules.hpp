#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gujfont/raster.hpp"

namespace gujfont {

enum class Appearance { Identity, FlipH, FlipV, Rot90, Rot180, Rot270 };

const char* to_string(Appearance a);
Appearance parse_appearance(const std::string& s);

// Class a stroke of class `cls` reads as after the transform, e.g. a
// vertical line rotated 90 degrees reads as a horizontal line.
int apparent_class(int cls, Appearance a);

// A point on a stroke: one of its endpoints or a percent position in its
// bounding box (0 = left/top, 100 = right/bottom).
struct PointRef {
  enum class Kind { A, B, Percent };
  Kind kind = Kind::A;
  int px = 0;
  int py = 0;

  friend bool operator==(const PointRef&, const PointRef&) = default;
};

struct JoinSpec {
  PointRef this_point;
  int target = 0;  // index of an earlier placement
  PointRef target_point;

  friend bool operator==(const JoinSpec&, const JoinSpec&) = default;
};

struct StrokePlacement {
  int stroke_class = 1;     // pos
  int occurrence = 0;       // occ
  double size = 1.0;        // s
  Appearance appearance = Appearance::Identity;  // ap
  std::optional<JoinSpec> join;                  // jp
  std::optional<std::array<int, 2>> position;    // pos anchor, percent of canvas
  std::optional<std::array<int, 2>> distance;    // ds, percent of canvas, from the previous placement

  friend bool operator==(const StrokePlacement&, const StrokePlacement&) = default;
};

using Variant = std::vector<StrokePlacement>;

struct CompositionRule {
  char32_t codepoint = 0;
  std::string name;
  std::vector<Variant> variants;

  friend bool operator==(const CompositionRule&, const CompositionRule&) = default;
};

struct RuleSet {
  int version = 1;
  std::string source;
  std::map<char32_t, CompositionRule> rules;

  friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

// "U+0A97"
std::string codepoint_label(char32_t cp);
// Accepts U+XXXX, 0xXXXX, bare hex, or a single UTF-8 character.
char32_t parse_codepoint(const std::string& text);
std::string utf8(char32_t cp);

// Throws Error naming character, variant, placement and field.
void validate_rule(const CompositionRule& rule);
RuleSet load_ruleset(const std::string& json_text);
std::string save_ruleset(const RuleSet& rs);
RuleSet load_ruleset_file(const std::string& path);

// Sorted stroke classes used by a variant.
std::vector<int> class_multiset(const Variant& v);

// Reassigns stroke classes through a seeded derangement of 1..6. Used as a
// negative control for round-trip evaluation.
RuleSet scramble_ruleset(const RuleSet& rs, std::uint64_t seed);

struct JunctionSample {
  Point point;
  Rect bbox;
};

struct JoinMode {
  int px = 0;
  int py = 0;
  double support = 0;

  friend bool operator==(const JoinMode&, const JoinMode&) = default;
};

inline constexpr double kDefaultCloseness = 0.10;

// Integer percent of a point inside an inclusive box.
std::array<int, 2> percent_in(const Rect& box, Point p);

// Joint (px, py) mode first; a second mode is kept when its count trails the
// first by at most closeness * N.
std::vector<JoinMode> learn_joining_point(const std::vector<JunctionSample>& samples,
                                          double closeness = kDefaultCloseness);

struct SampleStroke {
  int stroke_class = 1;
  Rect bbox;
  Point a;
  Point b;
  Appearance appearance = Appearance::Identity;
};

struct CharacterSample {
  Rect bbox;
  std::vector<SampleStroke> strokes;
  std::vector<Point> junctions;
};

// Statistical rule for one character from decomposed samples.
CompositionRule derive_rule(const std::vector<CharacterSample>& samples, char32_t codepoint,
                            double closeness = kDefaultCloseness);

}  // namespace gujfont
