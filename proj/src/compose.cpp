#include "gujfont/compose.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "gujfont/features.hpp"
#include "gujfont/image_io.hpp"

namespace gujfont {

using nlohmann::json;

namespace {

int src_index(int i, int src, int dst) {
  return static_cast<int>((2LL * i + 1) * src / (2LL * dst));
}

BinaryRaster resize_nearest(const BinaryRaster& img, int w, int h) {
  BinaryRaster out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out.set(x, y, img.ink(src_index(x, img.width(), w), src_index(y, img.height(), h)));
  return out;
}

Point map_point(Point p, Appearance ap, int w, int h) {
  switch (ap) {
    case Appearance::Identity: return p;
    case Appearance::FlipH: return {w - 1 - p.x, p.y};
    case Appearance::FlipV: return {p.x, h - 1 - p.y};
    case Appearance::Rot90: return {h - 1 - p.y, p.x};
    case Appearance::Rot180: return {w - 1 - p.x, h - 1 - p.y};
    case Appearance::Rot270: return {p.y, w - 1 - p.x};
  }
  return p;
}

BinaryRaster apply_appearance(const BinaryRaster& img, Appearance ap) {
  const int w = img.width(), h = img.height();
  const bool swap = ap == Appearance::Rot90 || ap == Appearance::Rot270;
  BinaryRaster out(swap ? h : w, swap ? w : h);
  for (const auto& p : img.ink_points()) out.set(map_point(p, ap, w, h), true);
  return out;
}

// Nearest ink pixel; ties go to the first in scan order.
Point snap_to_ink(const BinaryRaster& img, Point p) {
  if (img.ink(p)) return p;
  Point best = p;
  long best_d = std::numeric_limits<long>::max();
  for (const auto& q : img.ink_points()) {
    const long d = static_cast<long>(q.x - p.x) * (q.x - p.x) + static_cast<long>(q.y - p.y) * (q.y - p.y);
    if (d < best_d) best_d = d, best = q;
  }
  return best;
}

Point percent_point(const Rect& box, int px, int py) {
  return {box.x0 + static_cast<int>(std::lround(px * (box.width() - 1) / 100.0)),
          box.y0 + static_cast<int>(std::lround(py * (box.height() - 1) / 100.0))};
}

// Resolves a point reference on ink given in a local frame whose (0,0) sits
// at `origin` in the output frame.
Point resolve(const PointRef& ref, const BinaryRaster& ink, Point a, Point b, Point origin) {
  switch (ref.kind) {
    case PointRef::Kind::A: return {origin.x + a.x, origin.y + a.y};
    case PointRef::Kind::B: return {origin.x + b.x, origin.y + b.y};
    case PointRef::Kind::Percent: {
      const Point p = snap_to_ink(ink, percent_point(Rect{0, 0, ink.width() - 1, ink.height() - 1}, ref.px, ref.py));
      return {origin.x + p.x, origin.y + p.y};
    }
  }
  return origin;
}

int canvas_percent(int pct) { return static_cast<int>(std::lround(pct * (kGlyphCanvas - 1) / 100.0)); }

std::string char_id(const std::string& label) {
  // "U+0AA1" -> "u0AA1"
  return label.size() > 2 && label[1] == '+' ? "u" + label.substr(2) : label;
}

}  // namespace

std::vector<int> StrokeBank::missing_classes() const {
  std::vector<int> out;
  for (int c = 1; c <= kNumClasses; ++c) {
    auto it = strokes.find(c);
    if (it == strokes.end() || it->second.empty()) out.push_back(c);
  }
  return out;
}

const Stroke& StrokeBank::pick(int stroke_class, int occurrence) const {
  auto it = strokes.find(stroke_class);
  if (it == strokes.end() || it->second.empty())
    throw Error("missing stroke class " + std::to_string(stroke_class));
  return it->second[static_cast<std::size_t>(occurrence) % it->second.size()];
}

BinaryRaster normalize_seed(const BinaryRaster& ink) {
  const Rect box = ink.bbox();
  if (box.empty()) throw Error("seed character has no ink");
  const BinaryRaster crop = ink.crop(box);
  const double f = static_cast<double>(kSeedHeight) / crop.height();
  const int w = std::max(1, static_cast<int>(std::lround(crop.width() * f)));
  return resize_nearest(crop, w, kSeedHeight);
}

StrokeBank build_bank(const std::vector<SeedCharacter>& seeds, const Model& model) {
  StrokeBank bank;
  std::vector<int> pens;
  for (const auto& seed : seeds) {
    const BinaryRaster ink = normalize_seed(seed.ink);
    pens.push_back(estimate_pen_width(ink));
    for (auto& s : extract_strokes(ink)) {
      s.class_label = predict(model, stroke_features(s.normalized));
      s.source_char = codepoint_label(seed.codepoint);
      bank.strokes[*s.class_label].push_back(std::move(s));
    }
  }
  if (!pens.empty()) {
    std::sort(pens.begin(), pens.end());
    bank.pen_width = pens[(pens.size() - 1) / 2];
  }
  return bank;
}

void save_bank(const StrokeBank& bank, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json list = json::array();
  std::map<std::string, int> per_char;
  for (const auto& [cls, strokes] : bank.strokes) {
    for (const auto& s : strokes) {
      const std::string src = s.source_char.value_or("unknown");
      const std::string stem = char_id(src) + "_" + std::to_string(per_char[src]++);
      write_png(dir / (stem + ".png"), s.crop);
      write_png(dir / (stem + "_skeleton.png"), s.skeleton);
      json ends = json::array();
      for (const auto& p : s.endpoints) ends.push_back({p.x, p.y});
      list.push_back({{"file", stem + ".png"},
                      {"skeleton", stem + "_skeleton.png"},
                      {"class", cls},
                      {"source", src},
                      {"origin", {s.origin.x, s.origin.y}},
                      {"endpoints", ends}});
    }
  }
  const json doc = {{"format", "gujfont-bank"}, {"pen_width", bank.pen_width}, {"strokes", list}};
  write_file_atomic(dir / "bank.json", doc.dump(2) + "\n");
}

StrokeBank load_bank(const std::filesystem::path& dir) {
  json doc;
  try {
    doc = json::parse(read_file(dir / "bank.json"));
  } catch (const json::exception& e) {
    throw Error("bad bank.json in " + dir.string() + ": " + e.what());
  }
  if (doc.value("format", "") != "gujfont-bank") throw Error(dir.string() + " is not a stroke bank");
  StrokeBank bank;
  bank.pen_width = doc.value("pen_width", 0);
  try {
    for (const auto& j : doc.at("strokes")) {
      Stroke s;
      s.crop = read_binary(dir / j.at("file").get<std::string>());
      s.skeleton = read_binary(dir / j.at("skeleton").get<std::string>());
      s.origin = {j.at("origin")[0].get<int>(), j.at("origin")[1].get<int>()};
      for (const auto& e : j.at("endpoints")) s.endpoints.push_back({e[0].get<int>(), e[1].get<int>()});
      s.normalized = preprocess_stroke(s.skeleton);
      s.class_label = j.at("class").get<int>();
      s.source_char = j.value("source", "");
      if (*s.class_label < 1 || *s.class_label > kNumClasses) throw Error("bank stroke with class outside 1-6");
      bank.strokes[*s.class_label].push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw Error("bad bank.json in " + dir.string() + ": " + e.what());
  }
  return bank;
}

TransformedStroke transform_stroke(const Stroke& s, Appearance ap, double scale) {
  if (!(scale > 0.0 && scale <= 4.0)) throw Error("stroke scale must be in (0, 4]");
  const int w0 = s.crop.width(), h0 = s.crop.height();
  Point a, b;
  if (s.endpoints.size() >= 2) {
    a = s.endpoints[0];
    b = s.endpoints[1];
  } else {
    // Closed loop: use the first and last ink pixel.
    const auto pts = s.crop.ink_points();
    if (pts.empty()) throw Error("empty stroke");
    a = pts.front();
    b = pts.back();
  }
  const BinaryRaster turned = apply_appearance(s.crop, ap);
  a = map_point(a, ap, w0, h0);
  b = map_point(b, ap, w0, h0);
  const int w = turned.width(), h = turned.height();
  const int nw = std::max(1, static_cast<int>(std::lround(w * scale)));
  const int nh = std::max(1, static_cast<int>(std::lround(h * scale)));
  if (nw > kGlyphCanvas || nh > kGlyphCanvas) throw Error("oversize stroke");
  TransformedStroke out;
  out.ink = (nw == w && nh == h) ? turned : resize_nearest(turned, nw, nh);
  auto scale_pt = [&](Point p) {
    const Point q{std::min(nw - 1, static_cast<int>((2LL * p.x + 1) * nw / (2LL * w))),
                  std::min(nh - 1, static_cast<int>((2LL * p.y + 1) * nh / (2LL * h)))};
    return snap_to_ink(out.ink, q);
  };
  out.a = scale_pt(a);
  out.b = scale_pt(b);
  return out;
}

void place_and_join(BinaryRaster& canvas, std::vector<PlacedStroke>& placed, const StrokePlacement& next,
                    const StrokeBank& bank) {
  const Stroke& src = bank.pick(next.stroke_class, next.occurrence);
  const double long_side = std::max(src.crop.width(), src.crop.height());
  const auto t = transform_stroke(src, next.appearance, std::min(4.0, next.size * kStrokeUnit / long_side));
  const int w = t.ink.width(), h = t.ink.height();

  Point origin;
  std::optional<Point> weld;
  if (next.join) {
    const auto& js = *next.join;
    if (js.target < 0 || js.target >= static_cast<int>(placed.size()))
      throw Error("join target " + std::to_string(js.target) + " is not an earlier placement");
    const auto& tg = placed[js.target];
    const Point at = resolve(js.target_point, tg.ink, {tg.a.x - tg.bbox.x0, tg.a.y - tg.bbox.y0},
                             {tg.b.x - tg.bbox.x0, tg.b.y - tg.bbox.y0}, {tg.bbox.x0, tg.bbox.y0});
    const Point mine = resolve(js.this_point, t.ink, t.a, t.b, {0, 0});
    origin = {at.x - mine.x, at.y - mine.y};
    weld = at;
  } else {
    if (!next.position) throw Error("placement has neither join nor position");
    const auto pos = *next.position;
    int x0 = kScratchOffset + canvas_percent(pos[0]) - w / 2;
    int y0 = kScratchOffset + canvas_percent(pos[1]) - h / 2;
    if (next.distance) {
      if (placed.empty()) throw Error("distance on the first placement");
      const Rect& prev = placed.back().bbox;
      const int dx = (*next.distance)[0], dy = (*next.distance)[1];
      if (dx > 0) x0 = prev.x1 + 1 + canvas_percent(dx);
      if (dx < 0) x0 = prev.x0 - 1 - canvas_percent(-dx) - w + 1;
      if (dy > 0) y0 = prev.y1 + 1 + canvas_percent(dy);
      if (dy < 0) y0 = prev.y0 - 1 - canvas_percent(-dy) - h + 1;
    }
    origin = {x0, y0};
  }
  if (origin.x < 0 || origin.y < 0 || origin.x + w > canvas.width() || origin.y + h > canvas.height())
    throw Error("placement out of bounds");

  canvas.blit_or(t.ink, origin.x, origin.y);
  if (weld) {
    const Rect win{weld->x - 5, weld->y - 5, weld->x + 5, weld->y + 5};
    const BinaryRaster closed = morphology(canvas.crop(win), MorphKind::Close, Mask3::full());
    for (int y = -3; y <= 3; ++y)
      for (int x = -3; x <= 3; ++x)
        if (closed.ink(x + 5, y + 5) && canvas.in_bounds(weld->x + x, weld->y + y))
          canvas.set(weld->x + x, weld->y + y, true);
  }

  PlacedStroke ps;
  ps.stroke_class = next.stroke_class;
  ps.bbox = {origin.x, origin.y, origin.x + w - 1, origin.y + h - 1};
  ps.a = {origin.x + t.a.x, origin.y + t.a.y};
  ps.b = {origin.x + t.b.x, origin.y + t.b.y};
  ps.ink = t.ink;
  placed.push_back(std::move(ps));
}

BinaryRaster center_on_canvas(const BinaryRaster& ink) {
  const Rect box = ink.bbox();
  if (box.empty()) throw Error("empty glyph");
  BinaryRaster crop = ink.crop(box);
  const int room = kGlyphCanvas - 2 * kGlyphMargin;
  const int long_side = std::max(crop.width(), crop.height());
  if (long_side > room) {
    const double f = static_cast<double>(room) / long_side;
    crop = resize_cover(crop, std::max(1, static_cast<int>(crop.width() * f)),
                        std::max(1, static_cast<int>(crop.height() * f)));
  }
  BinaryRaster out(kGlyphCanvas, kGlyphCanvas);
  out.blit_or(crop, (kGlyphCanvas - crop.width()) / 2, (kGlyphCanvas - crop.height()) / 2);
  return out;
}

GlyphRaster generate_character(char32_t cp, const StrokeBank& bank, const RuleSet& rules, int variant) {
  auto it = rules.rules.find(cp);
  if (it == rules.rules.end()) throw Error("unknown character " + codepoint_label(cp));
  const auto& rule = it->second;
  if (variant < 0 || variant >= static_cast<int>(rule.variants.size()))
    throw Error(codepoint_label(cp) + " has no variant " + std::to_string(variant));
  const auto& var = rule.variants[variant];

  std::vector<int> missing;
  for (const auto& pl : var) {
    auto s = bank.strokes.find(pl.stroke_class);
    if ((s == bank.strokes.end() || s->second.empty()) &&
        std::find(missing.begin(), missing.end(), pl.stroke_class) == missing.end())
      missing.push_back(pl.stroke_class);
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    std::string msg = codepoint_label(cp) + ": missing stroke class";
    for (int c : missing) msg += " " + std::to_string(c);
    throw Error(msg);
  }

  BinaryRaster scratch(kScratchSize, kScratchSize);
  std::vector<PlacedStroke> placed;
  GlyphRaster g;
  g.codepoint = cp;
  g.variant = variant;
  for (std::size_t i = 0; i < var.size(); ++i) {
    try {
      place_and_join(scratch, placed, var[i], bank);
    } catch (const Error& e) {
      throw Error(codepoint_label(cp) + " placement " + std::to_string(i) + ": " + e.what());
    }
    g.classes.push_back(var[i].stroke_class);
  }
  g.raster = center_on_canvas(scratch);
  return g;
}

std::vector<GlyphRaster> generate_all(const StrokeBank& bank, const RuleSet& rules) {
  std::vector<GlyphRaster> out;
  std::vector<std::string> failures;
  for (const auto& [cp, rule] : rules.rules) {
    try {
      out.push_back(generate_character(cp, bank, rules, 0));
    } catch (const Error& e) {
      failures.push_back(e.what());
    }
  }
  if (!failures.empty()) {
    std::string msg = std::to_string(failures.size()) + " character(s) failed:";
    for (const auto& f : failures) msg += "\n  " + f;
    throw Error(msg);
  }
  return out;
}

std::string glyph_file_name(char32_t cp, int variant) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "u%04X_v%d.png", static_cast<unsigned>(cp), variant);
  return buf;
}

}  // namespace gujfont
