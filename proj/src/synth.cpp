#include "gujfont/synth.hpp"

#include <algorithm>
#include <cmath>

#include "gujfont/random.hpp"
#include "gujfont/strokes.hpp"

namespace gujfont {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

void draw_segment(BinaryRaster& img, Vec2 a, Vec2 b, double radius) {
  const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - radius)));
  const int x1 = std::min(img.width() - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - radius)));
  const int y1 = std::min(img.height() - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + radius)));
  const double dx = b.x - a.x, dy = b.y - a.y, len2 = dx * dx + dy * dy;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      double t = len2 > 0 ? ((x - a.x) * dx + (y - a.y) * dy) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const double px = a.x + t * dx - x, py = a.y + t * dy - y;
      if (px * px + py * py <= radius * radius) img.set(x, y, true);
    }
  }
}

void draw_polyline(BinaryRaster& img, const std::vector<Vec2>& pts, double radius) {
  if (pts.size() == 1) draw_segment(img, pts[0], pts[0], radius);
  for (std::size_t i = 1; i < pts.size(); ++i) draw_segment(img, pts[i - 1], pts[i], radius);
}

std::vector<Vec2> reference_path(int stroke_class) {
  auto arc = [](double cx, double cy, double r, double from_deg, double to_deg) {
    std::vector<Vec2> pts;
    const int steps = 64;
    for (int i = 0; i <= steps; ++i) {
      const double t = (from_deg + (to_deg - from_deg) * i / steps) * kPi / 180.0;
      pts.push_back({cx + r * std::cos(t), cy + r * std::sin(t)});
    }
    return pts;
  };
  switch (stroke_class) {
    case 1: return {{50, 5}, {50, 95}};
    case 2: return {{5, 50}, {95, 50}};
    case 3: return arc(60, 50, 40, 90, 270);
    case 4: return arc(40, 50, 40, -90, 90);
    case 5: return arc(50, 40, 40, 0, 180);
    case 6: return arc(50, 60, 40, 180, 360);
  }
  throw Error("reference stroke class must be 1-6, got " + std::to_string(stroke_class));
}

BinaryRaster render_reference(int stroke_class, const Perturbation& p) {
  const double th = p.rotation_deg * kPi / 180.0, c = std::cos(th), s = std::sin(th);
  std::vector<Vec2> pts;
  for (const auto& q : reference_path(stroke_class)) {
    const double x = (q.x - 50) * 0.8 * p.scale_x, y = (q.y - 50) * 0.8 * p.scale_y;
    pts.push_back({50 + c * x - s * y, 50 + s * x + c * y});
  }
  BinaryRaster img(kSynthCanvas, kSynthCanvas);
  draw_polyline(img, pts, kSynthPenRadius);
  if (p.jitter >= 0) {
    Mask3 k = Mask3::parse("000 010 000");
    const Point d = kRing[static_cast<std::size_t>(p.jitter) % 8];
    k.set(d.x, d.y, Mask3::Cell::On);
    img = morphology(img, MorphKind::Dilate, k);
  }
  return img;
}

Perturbation random_perturbation(std::uint64_t seed) {
  Rng rng(seed);
  Perturbation p;
  p.scale_x = rng.uniform(0.9, 1.1);
  p.scale_y = rng.uniform(0.9, 1.1);
  p.rotation_deg = rng.uniform(-15.0, 15.0);
  p.jitter = rng.coin() ? static_cast<int>(rng.index(8)) : -1;
  return p;
}

BinaryRaster normalize_rendered(const BinaryRaster& img) {
  const auto strokes = extract_strokes(img);
  if (strokes.empty()) throw Error("rendered stroke produced no skeleton");
  const auto longest = std::max_element(strokes.begin(), strokes.end(), [](const Stroke& a, const Stroke& b) {
    return a.skeleton.count() < b.skeleton.count();
  });
  return longest->normalized;
}

Dataset synthesize_dataset(int per_class, std::uint64_t seed, bool perturb) {
  if (per_class < 1) throw Error("per_class must be at least 1");
  Dataset ds;
  for (int cls = 1; cls <= kNumClasses; ++cls) {
    FeatureVector reference{};
    if (!perturb) reference = stroke_features(normalize_rendered(render_reference(cls)));
    for (int i = 0; i < per_class; ++i) {
      FeatureVector v = reference;
      if (perturb) {
        const auto stream = static_cast<std::uint64_t>(cls) * 1000003u + static_cast<std::uint64_t>(i);
        v = stroke_features(normalize_rendered(render_reference(cls, random_perturbation(derive_seed(seed, stream)))));
      }
      DatasetRow row{};
      for (int f = 0; f < kFeatureLength; ++f) row[f] = v[f];
      row[kFeatureLength] = cls;
      ds.push_back(row);
    }
  }
  return ds;
}

BinaryRaster render_seed_ink(char32_t cp) {
  auto arc = [](double cx, double cy, double r, double from_deg, double to_deg) {
    std::vector<Vec2> pts;
    for (int i = 0; i <= 64; ++i) {
      const double t = (from_deg + (to_deg - from_deg) * i / 64) * kPi / 180.0;
      pts.push_back({cx + r * std::cos(t), cy + r * std::sin(t)});
    }
    return pts;
  };
  constexpr double pen = 3.5;
  BinaryRaster img(200, 200);
  switch (cp) {
    case 0x0AA1:  // two facing half circles
      draw_polyline(img, arc(72, 100, 60, 90, 270), pen);
      draw_polyline(img, arc(128, 100, 60, -90, 90), pen);
      break;
    case 0x0AB3:  // upright with a bar from its middle
      draw_segment(img, {40, 20}, {40, 180}, pen);
      draw_segment(img, {40, 100}, {160, 100}, pen);
      break;
    case 0x0A9E:  // cap over cup
      draw_polyline(img, arc(100, 82, 60, 180, 360), pen);
      draw_polyline(img, arc(100, 118, 60, 0, 180), pen);
      break;
    default:
      throw Error("no seed drawing for codepoint " + std::to_string(static_cast<unsigned>(cp)));
  }
  return img;
}

GrayRaster scan_like(const BinaryRaster& ink, std::uint64_t seed) {
  Rng rng(seed);
  GrayRaster out(ink.width(), ink.height());
  for (int y = 0; y < ink.height(); ++y)
    for (int x = 0; x < ink.width(); ++x) {
      const double base = ink.ink(x, y) ? 40.0 : 230.0;
      out.set(x, y, static_cast<std::uint8_t>(std::clamp(base + rng.uniform(-20, 20), 0.0, 255.0)));
    }
  return out;
}

GrayRaster render_seed_sheet(std::uint64_t seed) {
  constexpr int cell = 220;
  BinaryRaster sheet(cell * static_cast<int>(kSeedChars.size()), cell);
  for (std::size_t i = 0; i < kSeedChars.size(); ++i)
    sheet.blit_or(render_seed_ink(kSeedChars[i]), static_cast<int>(i) * cell + 10, 10);
  return scan_like(sheet, seed);
}

}  // namespace gujfont
