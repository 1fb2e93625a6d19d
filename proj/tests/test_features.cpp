#include <doctest.h>

#include "gujfont/features.hpp"
#include "gujfont/thinning.hpp"
#include "support.hpp"

using namespace gujfont;

namespace {

BinaryRaster hline() {
  BinaryRaster r(30, 30);
  for (int x = 1; x <= 28; ++x) r.set(x, 15, true);
  return r;
}

BinaryRaster flip_h(const BinaryRaster& r) {
  BinaryRaster o(r.width(), r.height());
  for (const auto& p : r.ink_points()) o.set(r.width() - 1 - p.x, p.y, true);
  return o;
}

BinaryRaster flip_v(const BinaryRaster& r) {
  BinaryRaster o(r.width(), r.height());
  for (const auto& p : r.ink_points()) o.set(p.x, r.height() - 1 - p.y, true);
  return o;
}

// Random unit-width open path inside 30x30.
BinaryRaster random_stroke(Rng& rng) {
  for (;;) {
    const auto blob = testsupport::random_blob(rng, 30, 30);
    const auto strokes = decompose(clean_skeleton(zhang_suen(blob)));
    if (!strokes.empty()) return strokes.front().normalized;
  }
}

}  // namespace

TEST_CASE("feature template bank") {
  const auto& bank = feature_templates();
  CHECK(bank.size() == 16);
  int endpoints = 0;
  for (const auto& t : bank) endpoints += t.code == kEndpoint;
  CHECK(endpoints == 8);
}

TEST_CASE("code matrix of straight lines") {
  const auto cm = code_matrix(hline());
  CHECK(cm.at(1, 15) == kEndpoint);
  CHECK(cm.at(28, 15) == kEndpoint);
  for (int x = 2; x <= 27; ++x) CHECK(cm.at(x, 15) == kHorizontal);

  BinaryRaster v(30, 30);
  for (int y = 1; y <= 28; ++y) v.set(15, y, true);
  const auto cv = code_matrix(v);
  CHECK(cv.at(15, 1) == kEndpoint);
  CHECK(cv.at(15, 28) == kEndpoint);
  for (int y = 2; y <= 27; ++y) CHECK(cv.at(15, y) == kVertical);

  const auto empty = code_matrix(BinaryRaster(30, 30));
  CHECK(empty == CodeMatrix{});
}

TEST_CASE("unmatched pixels inherit the nearest code") {
  // The corner pixel (10,10) has neighbours W and S, a 90-degree turn that no
  // template covers. Its W neighbour is horizontal (1) and its S neighbour
  // vertical (2); both are at distance 1, so the lower code wins.
  BinaryRaster r(30, 30);
  for (int x = 3; x <= 10; ++x) r.set(x, 10, true);
  for (int y = 11; y <= 20; ++y) r.set(10, y, true);
  const auto cm = code_matrix(r);
  CHECK_FALSE(match_code(r, 10, 10).has_value());
  CHECK(cm.at(10, 10) == kHorizontal);
}

TEST_CASE("more than two endpoints is rejected") {
  BinaryRaster r(30, 30);
  r.set(3, 3, true);
  r.set(4, 3, true);
  r.set(10, 10, true);
  r.set(11, 10, true);
  CHECK_THROWS_WITH_AS(code_matrix(r), doctest::Contains("not a stroke"), Error);
}

TEST_CASE("feature vector of a horizontal line") {
  const auto v = feature_vector(code_matrix(hline()));
  FeatureVector expected{};
  expected[10] = 10;
  expected[11] = 1;
  expected[12] = 1;
  expected[13] = 1;
  expected[14] = 10;
  CHECK(v == expected);
}

TEST_CASE("feature vector block rules") {
  CHECK(feature_vector(CodeMatrix{}) == FeatureVector{});
  CodeMatrix one;
  one.set(8, 8, kVertical);
  CHECK(feature_vector(one)[6] == 0);
  CodeMatrix tie;
  tie.set(0, 0, kLeftDeep);
  tie.set(1, 0, kLeftDeep);
  tie.set(2, 0, kRightSlant);
  tie.set(3, 0, kRightSlant);
  CHECK(feature_vector(tie)[0] == kRightSlant);
}

TEST_CASE("feature properties on random strokes") {
  Rng rng(4);
  for (int i = 0; i < 40; ++i) {
    const auto s = random_stroke(rng);
    const auto cm = code_matrix(s);
    int tens = 0;
    for (int y = 0; y < 30; ++y)
      for (int x = 0; x < 30; ++x) {
        CHECK(is_feature_code(cm.at(x, y)));
        if (cm.at(x, y) != 0) CHECK(s.ink(x, y));
        tens += cm.at(x, y) == kEndpoint;
      }
    CHECK(tens <= 2);
    const auto v = feature_vector(cm);
    int vt = 0;
    for (auto c : v) {
      CHECK(is_feature_code(c));
      vt += c == kEndpoint;
    }
    CHECK(vt <= 2);
    CHECK(feature_vector(cm) == v);

    // Directly matched codes follow the mirror symmetry of the bank.
    const auto h = flip_h(s), vf = flip_v(s);
    const std::uint8_t hmap[11] = {0, 1, 2, 4, 3, 7, 8, 5, 6, 0, 10};
    for (const auto& p : s.ink_points()) {
      const auto c = match_code(s, p.x, p.y);
      if (!c) continue;
      const auto hc = match_code(h, 29 - p.x, p.y);
      REQUIRE(hc.has_value());
      CHECK(*hc == hmap[*c]);
      if (*c <= 4 || *c == 10) {
        const auto vc = match_code(vf, p.x, 29 - p.y);
        REQUIRE(vc.has_value());
        CHECK(*vc == hmap[*c]);
      }
    }
  }
}

TEST_CASE("dataset rows and csv") {
  Stroke s;
  s.normalized = hline();
  CHECK_THROWS_WITH_AS(dataset_row(s), "missing label", Error);
  s.class_label = 3;
  const auto row = dataset_row(s);
  CHECK(row.size() == 26);
  CHECK(row[25] == 3);
  CHECK(dataset_row(s) == row);
  const auto text = dataset_csv({row, row});
  const auto back = parse_dataset_csv(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == row);
  CHECK_THROWS_AS(parse_dataset_csv("1,2,3\n"), Error);
}
