#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "gujfont/compose.hpp"
#include "gujfont/features.hpp"
#include "gujfont/image_io.hpp"
#include "gujfont/synth.hpp"
#include "support.hpp"

using namespace gujfont;

namespace {

// An asymmetric hook: long upright with a foot to the right.
Stroke hook() {
  Stroke s;
  s.crop = BinaryRaster::from_rows({
      "##....",
      "##....",
      "##....",
      "##....",
      "######",
  });
  s.skeleton = s.crop;
  s.endpoints = {{0, 0}, {5, 4}};
  s.class_label = 1;
  return s;
}

Stroke line_stroke(int w, int h) {
  Stroke s;
  s.crop = BinaryRaster(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) s.crop.set(x, y, true);
  s.skeleton = s.crop;
  if (w >= h)
    s.endpoints = {{0, h / 2}, {w - 1, h / 2}};
  else
    s.endpoints = {{w / 2, 0}, {w / 2, h - 1}};
  return s;
}

const StrokeBank& seed_bank() {
  static const StrokeBank bank = [] {
    const Model m = train(synthesize_dataset(100, 42), Algo::Knn, {});
    std::vector<SeedCharacter> seeds;
    for (auto cp : kSeedChars) {
      char name[32];
      std::snprintf(name, sizeof name, "seeds/u%04X.png", static_cast<unsigned>(cp));
      seeds.push_back({cp, read_binary(testsupport::data_path(name))});
    }
    return build_bank(seeds, m);
  }();
  return bank;
}

const Model& seed_model() {
  static const Model m = train(synthesize_dataset(100, 42), Algo::Knn, {});
  return m;
}

RuleSet default_rules() { return load_ruleset_file(testsupport::data_path("rules/default_rules.json")); }

StrokePlacement at(int cls, int px, int py, double size = 1.0) {
  StrokePlacement p;
  p.stroke_class = cls;
  p.size = size;
  p.position = std::array<int, 2>{px, py};
  return p;
}

std::vector<int> sorted_labels(const BinaryRaster& glyph) {
  std::vector<int> out;
  for (const auto& s : extract_strokes(glyph)) out.push_back(predict(seed_model(), stroke_features(s.normalized)));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("identity transform keeps the crop") {
  const auto t = transform_stroke(hook(), Appearance::Identity, 1.0);
  CHECK(t.ink == hook().crop);
  CHECK(t.a == Point{0, 0});
  CHECK(t.b == Point{5, 4});
}

TEST_CASE("flips are involutions and rotations map coordinates") {
  const Stroke s = hook();
  for (auto ap : {Appearance::FlipH, Appearance::FlipV, Appearance::Rot180}) {
    Stroke once = s;
    const auto t = transform_stroke(s, ap, 1.0);
    once.crop = t.ink;
    once.endpoints = {t.a, t.b};
    const auto back = transform_stroke(once, ap, 1.0);
    CHECK(back.ink == s.crop);
    CHECK(back.a == s.endpoints[0]);
  }

  const auto r = transform_stroke(s, Appearance::Rot90, 1.0);
  const int w = s.crop.width(), h = s.crop.height();
  REQUIRE(r.ink.width() == h);
  REQUIRE(r.ink.height() == w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) CHECK(r.ink.ink(h - 1 - y, x) == s.crop.ink(x, y));
  CHECK(r.a == Point{h - 1 - 0, 0});
  CHECK(r.b == Point{h - 1 - 4, 5});
}

TEST_CASE("flips and quarter turns keep the ink count") {
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    Stroke s;
    s.crop = testsupport::random_blob(rng, 23, 31);
    if (s.crop.empty()) continue;
    s.skeleton = s.crop;
    for (int a = 0; a < 6; ++a)
      CHECK(transform_stroke(s, static_cast<Appearance>(a), 1.0).ink.count() == s.crop.count());
  }
}

TEST_CASE("scaling is nearest neighbour and bounded") {
  const auto t = transform_stroke(line_stroke(10, 4), Appearance::Identity, 2.0);
  CHECK(t.ink.width() == 20);
  CHECK(t.ink.height() == 8);
  CHECK(t.ink.count() == 160);
  CHECK_THROWS_WITH_AS(transform_stroke(line_stroke(100, 4), Appearance::Identity, 3.0),
                       doctest::Contains("oversize stroke"), Error);
  CHECK_THROWS_AS(transform_stroke(line_stroke(10, 4), Appearance::Identity, 0.0), Error);
  CHECK_THROWS_AS(transform_stroke(line_stroke(10, 4), Appearance::Identity, 4.5), Error);
}

TEST_CASE("placing onto an empty canvas copies the stroke") {
  StrokeBank bank;
  bank.strokes[1] = {line_stroke(6, kStrokeUnit)};
  BinaryRaster canvas(kScratchSize, kScratchSize);
  std::vector<PlacedStroke> placed;
  place_and_join(canvas, placed, at(1, 50, 50), bank);
  REQUIRE(placed.size() == 1);
  CHECK(canvas.count() == bank.strokes[1][0].crop.count());
  CHECK(canvas.crop(placed[0].bbox) == bank.strokes[1][0].crop);
}

TEST_CASE("joined strokes form one component") {
  const auto& bank = seed_bank();
  BinaryRaster canvas(kScratchSize, kScratchSize);
  std::vector<PlacedStroke> placed;
  place_and_join(canvas, placed, at(3, 50, 50), bank);
  StrokePlacement line;
  line.stroke_class = 1;
  line.size = 0.5;
  line.join = JoinSpec{{PointRef::Kind::A, 0, 0}, 0, {PointRef::Kind::B, 0, 0}};
  place_and_join(canvas, placed, line, bank);
  CHECK(connected_components(canvas).size() == 1);
  CHECK(testsupport::count_components_uf(canvas) == 1);
  // The join point is shared.
  CHECK(placed[1].a == placed[0].b);
}

TEST_CASE("distance placement leaves the requested gap") {
  StrokeBank bank;
  bank.strokes[1] = {line_stroke(6, kStrokeUnit)};
  BinaryRaster canvas(kScratchSize, kScratchSize);
  std::vector<PlacedStroke> placed;
  place_and_join(canvas, placed, at(1, 30, 50), bank);
  StrokePlacement next = at(1, 50, 50);
  next.occurrence = 1;
  next.distance = std::array<int, 2>{20, 0};
  place_and_join(canvas, placed, next, bank);
  CHECK(connected_components(canvas).size() == 2);
  const int gap = placed[1].bbox.x0 - placed[0].bbox.x1 - 1;
  CHECK(gap >= kGlyphCanvas * 20 / 100);

  next.distance = std::array<int, 2>{-20, 0};
  place_and_join(canvas, placed, next, bank);
  CHECK(placed[1].bbox.x1 - placed[2].bbox.x0 > 0);
  CHECK(placed[1].bbox.x0 - placed[2].bbox.x1 - 1 >= kGlyphCanvas * 20 / 100);
}

TEST_CASE("placements outside the scratch canvas are rejected") {
  StrokeBank bank;
  bank.strokes[1] = {line_stroke(6, kStrokeUnit)};
  BinaryRaster canvas(kScratchSize, kScratchSize);
  std::vector<PlacedStroke> placed;
  place_and_join(canvas, placed, at(1, 50, 50), bank);
  StrokePlacement far = at(1, 50, 50);
  far.distance = std::array<int, 2>{100, 0};
  // One canvas width to the right still fits in the scratch area; two do not.
  place_and_join(canvas, placed, far, bank);
  CHECK_THROWS_WITH_AS(place_and_join(canvas, placed, far, bank), doctest::Contains("placement out of bounds"), Error);
}

TEST_CASE("seed bank covers every class") {
  const auto& bank = seed_bank();
  CHECK(bank.missing_classes().empty());
  CHECK(bank.pen_width >= 5);
  CHECK(bank.pen_width <= 9);
}

TEST_CASE("bank survives a save and load") {
  const auto dir = std::filesystem::temp_directory_path() / "gujfont_bank_test";
  std::filesystem::remove_all(dir);
  save_bank(seed_bank(), dir);
  const auto loaded = load_bank(dir);
  CHECK(loaded.pen_width == seed_bank().pen_width);
  for (const auto& [cls, strokes] : seed_bank().strokes) {
    REQUIRE(loaded.strokes.at(cls).size() == strokes.size());
    for (std::size_t i = 0; i < strokes.size(); ++i) {
      CHECK(loaded.strokes.at(cls)[i].crop == strokes[i].crop);
      CHECK(loaded.strokes.at(cls)[i].endpoints == strokes[i].endpoints);
      CHECK(loaded.strokes.at(cls)[i].normalized == strokes[i].normalized);
    }
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("single placement glyph is the centred stroke") {
  const auto rules = default_rules();
  const auto g = generate_character(0x0AB0, seed_bank(), rules);
  const auto& pl = rules.rules.at(0x0AB0).variants[0][0];
  const auto& src = seed_bank().pick(pl.stroke_class, pl.occurrence);
  const auto t = transform_stroke(src, pl.appearance,
                                  pl.size * kStrokeUnit / std::max(src.crop.width(), src.crop.height()));
  const Rect box = g.raster.bbox();
  CHECK(g.raster.crop(box) == t.ink.crop(t.ink.bbox()));
  CHECK(box.x0 == (kGlyphCanvas - box.width()) / 2);
  CHECK(box.y0 == (kGlyphCanvas - box.height()) / 2);
}

TEST_CASE("two stroke glyph decomposes back into its classes") {
  const auto rules = default_rules();
  const auto g = generate_character(0x0A97, seed_bank(), rules);
  CHECK(sorted_labels(g.raster) == std::vector<int>{1, 3});
}

TEST_CASE("second variant moves the join") {
  const auto rules = default_rules();
  REQUIRE(rules.rules.at(0x0AA2).variants.size() == 2);
  const auto v0 = generate_character(0x0AA2, seed_bank(), rules, 0);
  const auto v1 = generate_character(0x0AA2, seed_bank(), rules, 1);
  CHECK_FALSE(v0.raster == v1.raster);
  CHECK_THROWS_AS(generate_character(0x0AA2, seed_bank(), rules, 2), Error);
  CHECK_THROWS_WITH_AS(generate_character(0x0A85, seed_bank(), rules), doctest::Contains("unknown character"), Error);
}

TEST_CASE("generate_all covers the ruleset deterministically") {
  const auto rules = default_rules();
  const auto a = generate_all(seed_bank(), rules);
  const auto b = generate_all(seed_bank(), rules);
  REQUIRE(a.size() == 23);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].raster == b[i].raster);
    CHECK(a[i].raster.count() > 0);
    if (i) CHECK(a[i - 1].codepoint < a[i].codepoint);
  }
  // Characters built only from joins come out in one piece.
  for (const auto& g : a) {
    const auto& var = rules.rules.at(g.codepoint).variants[0];
    const bool joined = std::all_of(var.begin() + 1, var.end(), [](const auto& p) { return p.join.has_value(); });
    if (joined && var.size() > 1) CHECK(connected_components(g.raster).size() == 1);
  }
}

TEST_CASE("a missing class names every affected character") {
  StrokeBank bank = seed_bank();
  bank.strokes.erase(4);
  const auto rules = default_rules();
  std::vector<std::string> expect;
  for (const auto& [cp, rule] : rules.rules)
    for (const auto& p : rule.variants[0])
      if (p.stroke_class == 4) {
        expect.push_back(codepoint_label(cp));
        break;
      }
  REQUIRE(!expect.empty());
  try {
    generate_all(bank, rules);
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    for (const auto& cp : expect) CHECK(msg.find(cp + ": missing stroke class 4") != std::string::npos);
  }
}

TEST_CASE("glyph file names") { CHECK(glyph_file_name(0x0A97, 1) == "u0A97_v1.png"); }
