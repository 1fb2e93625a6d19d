#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "gujfont/image_io.hpp"
#include "gujfont/raster.hpp"
#include "support.hpp"

using namespace gujfont;

namespace {

// Exhaustive Otsu: class means recomputed from the pixels for every t.
int brute_force_otsu(const std::vector<std::uint8_t>& v) {
  int best_t = 0;
  double best = 0;
  for (int t = 0; t <= 256; ++t) {
    double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
    for (auto x : v) {
      if (x < t) n0 += 1, s0 += x;
      else n1 += 1, s1 += x;
    }
    if (n0 == 0 || n1 == 0) continue;
    const double n = n0 + n1, d = s0 / n0 - s1 / n1;
    const double var = n0 / n * n1 / n * d * d;
    if (var > best + 1e-9) best = var, best_t = t;
  }
  return best_t;
}

std::vector<std::uint8_t> bits(const BinaryRaster& r) { return r.bits(); }

}  // namespace

TEST_CASE("otsu on a bimodal 2x2 image") {
  GrayRaster g(2, 2, {0, 0, 255, 255});
  CHECK(bits(binarize_otsu(g)) == std::vector<std::uint8_t>{1, 1, 0, 0});
}

TEST_CASE("otsu on a constant image yields no ink") {
  GrayRaster g(4, 1, {10, 10, 10, 10});
  CHECK(binarize_otsu(g).count() == 0);
}

TEST_CASE("otsu threshold matches the exhaustive search") {
  const std::vector<std::uint8_t> v = {10, 20, 30, 200, 210, 220};
  const int oracle = brute_force_otsu(v);
  CHECK(oracle == 31);
  GrayRaster g(6, 1, v);
  CHECK(otsu_threshold(g) == oracle);
  CHECK(bits(binarize_otsu(g)) == std::vector<std::uint8_t>{1, 1, 1, 0, 0, 0});

  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::uint8_t> vals(30);
    for (auto& x : vals) x = static_cast<std::uint8_t>(rng.index(256));
    GrayRaster r(6, 5, vals);
    const int t = brute_force_otsu(vals);
    const auto b = binarize_otsu(r);
    for (std::size_t i = 0; i < vals.size(); ++i) CHECK(b.bits()[i] == (t > 0 && vals[i] < t ? 1 : 0));
  }
}

TEST_CASE("otsu classification depends only on the histogram") {
  Rng rng(5);
  std::vector<std::uint8_t> vals(48);
  for (auto& x : vals) x = static_cast<std::uint8_t>(rng.index(256));
  std::vector<std::uint8_t> perm = vals;
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
  const auto a = binarize_otsu(GrayRaster(8, 6, vals));
  const auto b = binarize_otsu(GrayRaster(8, 6, perm));
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const auto j = std::find(vals.begin(), vals.end(), perm[i]) - vals.begin();
    CHECK(b.bits()[i] == a.bits()[j]);
  }
}

TEST_CASE("morphology basics") {
  const Mask3 full = Mask3::full();
  BinaryRaster dot(3, 3);
  dot.set(1, 1, true);
  CHECK(morphology(dot, MorphKind::Dilate, full).count() == 9);

  BinaryRaster all(3, 3, std::vector<std::uint8_t>(9, 1));
  const auto e = morphology(all, MorphKind::Erode, full);
  CHECK(e.count() == 1);
  CHECK(e.ink(1, 1));

  CHECK_THROWS_AS(morphology(dot, MorphKind::Dilate, Mask3::parse("??? ?0? ???")), Error);
}

TEST_CASE("closing fills a one pixel gap") {
  // Hand-applied: dilation turns the 3x5 raster fully on, erosion with a
  // zero border keeps only the interior row cells x=1..3.
  const auto img = BinaryRaster::from_rows({".....", ".#.#.", "....."});
  const auto closed = morphology(img, MorphKind::Close, Mask3::full());
  CHECK(closed == BinaryRaster::from_rows({".....", ".###.", "....."}));
}

TEST_CASE("erode is contained in the image and the image in dilate") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto img = testsupport::random_blob(rng, 24, 24);
    Mask3 k = Mask3::parse("?1? 111 ?1?");
    const auto e = morphology(img, MorphKind::Erode, k);
    const auto d = morphology(img, MorphKind::Dilate, k);
    for (const auto& p : e.ink_points()) CHECK(img.ink(p));
    for (const auto& p : img.ink_points()) CHECK(d.ink(p));
  }
}

TEST_CASE("hit or miss") {
  BinaryRaster img(5, 5);
  img.set(0, 0, true);
  img.set(2, 2, true);
  img.set(4, 1, true);
  const auto any_center = hit_or_miss(img, Mask3::parse("??? ?1? ???"));
  CHECK(any_center == std::vector<Point>{{0, 0}, {4, 1}, {2, 2}});

  BinaryRaster iso(5, 5);
  iso.set(2, 2, true);
  CHECK(hit_or_miss(iso, Mask3::parse("000 010 000")) == std::vector<Point>{{2, 2}});

  BinaryRaster seg(7, 5);
  for (int x = 1; x <= 5; ++x) seg.set(x, 2, true);
  // Oracle: enumerate pixels, keep those whose only ink neighbour is east.
  std::vector<Point> expected;
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 7; ++x)
      if (seg.ink(x, y) && seg.neighbours(x, y) == 1 && seg.ink(x + 1, y)) expected.push_back({x, y});
  CHECK(expected == std::vector<Point>{{1, 2}});
  CHECK(hit_or_miss(seg, Mask3::parse("000 011 000")) == expected);
}

TEST_CASE("hit or miss with centre on only returns ink") {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto img = testsupport::random_blob(rng, 20, 20);
    for (const auto& p : hit_or_miss(img, Mask3::parse("?0? 111 ???"))) CHECK(img.ink(p));
  }
}

TEST_CASE("connected components") {
  CHECK(connected_components(BinaryRaster(4, 4)).empty());

  const auto diag = BinaryRaster::from_rows({"#.", ".#"});
  CHECK(connected_components(diag).size() == 1);

  const auto img = BinaryRaster::from_rows({
      "..#......",
      ".###.....",
      "..#......",
      "......#..",
  });
  const auto comps = connected_components(img);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].pixels.size() == 5);
  CHECK(comps[0].bbox == Rect{1, 0, 3, 2});
  CHECK(comps[1].pixels == std::vector<Point>{{6, 3}});
}

TEST_CASE("components partition the ink set") {
  Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const auto img = testsupport::random_blob(rng, 32, 32);
    const auto comps = connected_components(img);
    CHECK(static_cast<int>(comps.size()) == testsupport::count_components_uf(img));
    BinaryRaster seen(img.width(), img.height());
    std::size_t total = 0;
    for (const auto& c : comps) {
      for (const auto& p : c.pixels) {
        CHECK_FALSE(seen.ink(p));
        seen.set(p, true);
        CHECK(c.bbox.contains(p));
      }
      total += c.pixels.size();
    }
    CHECK(total == img.count());
    CHECK(seen == img);
    for (std::size_t i = 1; i < comps.size(); ++i) {
      const auto& a = comps[i - 1].bbox;
      const auto& b = comps[i].bbox;
      CHECK((a.y0 < b.y0 || (a.y0 == b.y0 && a.x0 <= b.x0)));
    }
  }
}

TEST_CASE("resize_cover keeps thin lines") {
  BinaryRaster line(56, 3);
  for (int x = 0; x < 56; ++x) line.set(x, 1, true);
  const auto small = resize_cover(line, 28, 2);
  for (int x = 0; x < 28; ++x) CHECK((small.ink(x, 0) || small.ink(x, 1)));
  const auto big = resize_cover(BinaryRaster::from_rows({"#."}), 4, 1);
  CHECK(big == BinaryRaster::from_rows({"##.."}));
}

TEST_CASE("png and pgm io") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gujfont_test_raster";
  fs::create_directories(dir);
  GrayRaster g(3, 2, {0, 50, 100, 150, 200, 255});
  write_png(dir / "g.png", g);
  CHECK(read_gray(dir / "g.png").values() == g.values());

  write_file_atomic(dir / "a.pgm", "P2\n# comment\n3 1\n255\n0 128 255\n");
  CHECK(read_gray(dir / "a.pgm").values() == std::vector<std::uint8_t>{0, 128, 255});
  write_file_atomic(dir / "b.pgm", std::string("P5 2 1 255\n") + char(7) + char(9));
  CHECK(read_gray(dir / "b.pgm").values() == std::vector<std::uint8_t>{7, 9});
  fs::remove_all(dir);
}
