#include "gujfont/strokes.hpp"

#include <algorithm>
#include <deque>

#include "gujfont/thinning.hpp"

namespace gujfont {

const char* to_string(JunctionKind k) {
  switch (k) {
    case JunctionKind::T: return "T";
    case JunctionKind::Y: return "Y";
    case JunctionKind::Cross: return "cross";
  }
  return "?";
}

namespace {

Mask3 mask_from_ring(std::uint8_t ring) {
  Mask3 m = Mask3::parse("000 010 000");
  for (int i = 0; i < 8; ++i)
    if (ring & (1u << i)) m.set(kRing[i].x, kRing[i].y, Mask3::Cell::On);
  return m;
}

bool has_opposite_pair(std::uint8_t ring) {
  for (int i = 0; i < 4; ++i)
    if ((ring & (1u << i)) && (ring & (1u << (i + 4)))) return true;
  return false;
}

JunctionKind classify_ring(std::uint8_t ring) {
  if (ring_transitions(ring) >= 4) return JunctionKind::Cross;
  return has_opposite_pair(ring) ? JunctionKind::T : JunctionKind::Y;
}

}  // namespace

const std::array<Mask3, 8>& endpoint_masks() {
  static const std::array<Mask3, 8> masks = [] {
    std::array<Mask3, 8> m;
    for (int i = 0; i < 8; ++i) m[i] = mask_from_ring(static_cast<std::uint8_t>(1u << i));
    return m;
  }();
  return masks;
}

const std::vector<JunctionTemplate>& junction_templates() {
  static const std::vector<JunctionTemplate> bank = [] {
    std::vector<JunctionTemplate> t[3];
    for (int r = 0; r < 256; ++r) {
      const auto ring = static_cast<std::uint8_t>(r);
      const int n = __builtin_popcount(r);
      if ((n != 3 && n != 4) || ring_transitions(ring) != n) continue;
      const JunctionKind k = classify_ring(ring);
      t[static_cast<int>(k)].push_back({mask_from_ring(ring), k});
    }
    std::vector<JunctionTemplate> all;
    for (auto& v : t) all.insert(all.end(), v.begin(), v.end());
    return all;
  }();
  return bank;
}

std::vector<Point> detect_endpoints(const BinaryRaster& sk) {
  std::vector<Point> out;
  for (const auto& m : endpoint_masks()) {
    const auto hits = hit_or_miss(sk, m);
    out.insert(out.end(), hits.begin(), hits.end());
  }
  std::sort(out.begin(), out.end(), scan_less);
  return out;
}

JunctionReport detect_junctions(const BinaryRaster& sk) {
  JunctionReport rep;
  rep.endpoints = detect_endpoints(sk);
  const auto& bank = junction_templates();
  for (const auto& p : sk.ink_points()) {
    const std::uint8_t ring = ring_bits(sk, p.x, p.y);
    if (__builtin_popcount(ring) < 3 || ring_transitions(ring) < 3) continue;
    JunctionKind kind = classify_ring(ring);
    for (const auto& t : bank) {
      if (t.mask.matches(sk, p.x, p.y)) {
        kind = t.kind;
        break;
      }
    }
    rep.junctions.push_back({p, kind});
  }
  return rep;
}

namespace {

constexpr std::size_t kDebrisPixels = 3;

Stroke make_stroke(const BinaryRaster& full_skeleton, const BinaryRaster* full_ink) {
  const BinaryRaster& src = full_ink ? *full_ink : full_skeleton;
  Rect box = src.bbox();
  for (const auto& p : full_skeleton.ink_points()) box.extend(p);
  Stroke s;
  s.origin = {box.x0, box.y0};
  s.skeleton = full_skeleton.crop(box);
  s.crop = src.crop(box);
  s.endpoints = detect_endpoints(s.skeleton);
  s.normalized = preprocess_stroke(s.skeleton);
  return s;
}

// Returns final stroke skeletons as full-frame rasters.
std::vector<BinaryRaster> split_skeleton(const BinaryRaster& sk, DecomposeStats& stats) {
  std::vector<BinaryRaster> done;
  std::deque<BinaryRaster> work;
  for (const auto& c : connected_components(sk)) work.push_back(raster_from_points(sk.width(), sk.height(), c.pixels));

  auto push_pieces = [&](const BinaryRaster& r) {
    for (const auto& c : connected_components(r)) work.push_back(raster_from_points(r.width(), r.height(), c.pixels));
  };
  auto remove = [&](BinaryRaster& r, const std::vector<Point>& pts) {
    for (const auto& p : pts) r.set(p, false);
    stats.junction_pixels += pts.size();
  };

  while (!work.empty()) {
    BinaryRaster piece = std::move(work.front());
    work.pop_front();
    const std::size_t n = piece.count();
    if (n < kDebrisPixels) {
      stats.debris_pixels += n;
      continue;
    }
    const JunctionReport rep = detect_junctions(piece);
    std::vector<Point> cut;
    if (!rep.junctions.empty()) {
      for (const auto& j : rep.junctions) cut.push_back(j.at);
      // Two branches leaving through perpendicular 4-neighbours still touch
      // diagonally once the junction pixel goes. If that leaves a plain path
      // around the corner no later pass would split it, so cut both.
      BinaryRaster rest = piece;
      for (const auto& p : cut) rest.set(p, false);
      std::vector<Point> corners;
      for (const auto& j : rep.junctions) {
        for (int i = 0; i < 8; i += 2) {
          const Point p{j.at.x + kRing[i].x, j.at.y + kRing[i].y};
          const Point q{j.at.x + kRing[(i + 2) % 8].x, j.at.y + kRing[(i + 2) % 8].y};
          const Point mid{j.at.x + kRing[i + 1].x, j.at.y + kRing[i + 1].y};
          if (rest.ink(p) && rest.ink(q) && !piece.ink(mid) && rest.neighbours(p.x, p.y) <= 2 &&
              rest.neighbours(q.x, q.y) <= 2)
            corners.insert(corners.end(), {p, q});
        }
      }
      for (const auto& p : corners)
        if (std::find(cut.begin(), cut.end(), p) == cut.end()) cut.push_back(p);
    } else if (rep.endpoints.size() != 2) {
      for (const auto& p : piece.ink_points())
        if (piece.neighbours(p.x, p.y) >= 3) cut.push_back(p);
      // A closed loop has no branch pixel; open it at its first pixel.
      if (cut.empty()) cut.push_back(piece.ink_points().front());
    }
    if (cut.empty()) {
      done.push_back(std::move(piece));
      continue;
    }
    remove(piece, cut);
    push_pieces(piece);
  }

  std::vector<std::pair<Component, std::size_t>> order;
  for (std::size_t i = 0; i < done.size(); ++i) {
    Component c;
    c.pixels = done[i].ink_points();
    for (const auto& p : c.pixels) c.bbox.extend(p);
    order.push_back({std::move(c), i});
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    const Rect &ra = a.first.bbox, &rb = b.first.bbox;
    if (ra.y0 != rb.y0) return ra.y0 < rb.y0;
    if (ra.x0 != rb.x0) return ra.x0 < rb.x0;
    return scan_less(a.first.pixels.front(), b.first.pixels.front());
  });
  std::vector<BinaryRaster> sorted;
  for (auto& [c, i] : order) sorted.push_back(std::move(done[i]));
  return sorted;
}

}  // namespace

std::vector<Stroke> decompose(const BinaryRaster& sk, DecomposeStats* stats) {
  DecomposeStats local;
  std::vector<Stroke> out;
  for (const auto& piece : split_skeleton(sk, local)) out.push_back(make_stroke(piece, nullptr));
  if (stats) *stats = local;
  return out;
}

std::vector<Stroke> decompose_with_ink(const BinaryRaster& sk, const BinaryRaster& ink,
                                       DecomposeStats* stats) {
  if (sk.width() != ink.width() || sk.height() != ink.height()) {
    throw Error("decompose_with_ink: skeleton and ink sizes differ");
  }
  DecomposeStats local;
  const auto pieces = split_skeleton(sk, local);
  const int w = ink.width();
  std::vector<int> owner(ink.bits().size(), -1);
  std::deque<Point> q;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (const auto& p : pieces[i].ink_points()) {
      owner[p.y * w + p.x] = static_cast<int>(i);
      q.push_back(p);
    }
  }
  while (!q.empty()) {
    const Point c = q.front();
    q.pop_front();
    for (const auto& d : kRing) {
      const int nx = c.x + d.x, ny = c.y + d.y;
      if (!ink.ink(nx, ny) || owner[ny * w + nx] >= 0) continue;
      owner[ny * w + nx] = owner[c.y * w + c.x];
      q.push_back({nx, ny});
    }
  }
  std::vector<BinaryRaster> inks(pieces.size(), BinaryRaster(ink.width(), ink.height()));
  for (const auto& p : ink.ink_points())
    if (owner[p.y * w + p.x] >= 0) inks[owner[p.y * w + p.x]].set(p, true);
  std::vector<Stroke> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) out.push_back(make_stroke(pieces[i], &inks[i]));
  if (stats) *stats = local;
  return out;
}

BinaryRaster preprocess_stroke(const BinaryRaster& crop) {
  const Rect box = crop.bbox();
  if (crop.count() < 3) throw Error("preprocess_stroke: stroke has fewer than 3 ink pixels");
  const BinaryRaster tight = crop.crop(box);
  const int w = tight.width(), h = tight.height(), longest = std::max(w, h);
  // A 1-px axis stays 1 px so straight ticks remain single lines.
  auto scaled = [&](int n) {
    if (n == 1) return 1;
    return std::clamp(static_cast<int>((static_cast<long>(n) * kStrokeInner * 2 + longest) / (2L * longest)), 1,
                      kStrokeInner);
  };
  const int nw = scaled(w), nh = scaled(h);
  const BinaryRaster resized = resize_cover(tight, nw, nh);
  BinaryRaster inner(kStrokeInner, kStrokeInner);
  inner.blit_or(resized, (kStrokeInner + 1 - nw) / 2, (kStrokeInner + 1 - nh) / 2);
  const BinaryRaster thin = adaptive_thin(zhang_suen(inner)).raster;
  return thin.pad(1, 1, 1, 1);
}

BinaryRaster prune_spurs(const BinaryRaster& sk, int max_len) {
  BinaryRaster out = sk;
  if (max_len <= 0) return out;
  auto is_junction = [&](Point p) {
    const std::uint8_t r = ring_bits(sk, p.x, p.y);
    return __builtin_popcount(r) >= 3 && ring_transitions(r) >= 3;
  };
  for (const auto& e : detect_endpoints(sk)) {
    std::vector<Point> path{e};
    bool fork = false, reached_junction = false;
    while (static_cast<int>(path.size()) <= max_len) {
      const Point cur = path.back();
      std::vector<Point> next;
      for (const auto& d : kRing) {
        const Point n{cur.x + d.x, cur.y + d.y};
        if (sk.ink(n) && std::find(path.begin(), path.end(), n) == path.end()) next.push_back(n);
      }
      if (next.empty()) break;
      if (next.size() > 1) {
        fork = true;
        break;
      }
      if (is_junction(next[0])) {
        reached_junction = true;
        break;
      }
      path.push_back(next[0]);
    }
    if (!fork && !reached_junction) continue;
    if (static_cast<int>(path.size()) > max_len) continue;
    // At a fork the last walked pixel is the attachment; it goes only if
    // its removal is simple once the rest of the branch is gone.
    const Point attach = path.back();
    if (fork) path.pop_back();
    for (const auto& p : path) out.set(p, false);
    if (fork && out.neighbours(attach.x, attach.y) >= 2 && connectivity_number(out, attach.x, attach.y) == 1)
      out.set(attach, false);
  }
  return out;
}

int estimate_pen_width(const BinaryRaster& ink) {
  const int w = ink.width(), h = ink.height();
  std::vector<int> hrun(ink.bits().size(), 0), vrun(ink.bits().size(), 0);
  for (int y = 0; y < h; ++y) {
    int x = 0;
    while (x < w) {
      if (!ink.ink(x, y)) { ++x; continue; }
      int e = x;
      while (e < w && ink.ink(e, y)) ++e;
      for (int i = x; i < e; ++i) hrun[y * w + i] = e - x;
      x = e;
    }
  }
  for (int x = 0; x < w; ++x) {
    int y = 0;
    while (y < h) {
      if (!ink.ink(x, y)) { ++y; continue; }
      int e = y;
      while (e < h && ink.ink(x, e)) ++e;
      for (int i = y; i < e; ++i) vrun[i * w + x] = e - y;
      y = e;
    }
  }
  std::vector<int> widths;
  for (const auto& p : ink.ink_points()) widths.push_back(std::min(hrun[p.y * w + p.x], vrun[p.y * w + p.x]));
  if (widths.empty()) return 0;
  std::nth_element(widths.begin(), widths.begin() + widths.size() / 2, widths.end());
  return widths[widths.size() / 2];
}

std::vector<Stroke> extract_strokes(const BinaryRaster& ink, const ExtractOptions& opt) {
  const Rect box = ink.bbox();
  if (box.empty()) return {};
  const BinaryRaster tight = ink.crop(box).pad(2, 2, 2, 2);
  const BinaryRaster closed = morphology(tight, MorphKind::Close, Mask3::full());
  const int pen = std::max(1, estimate_pen_width(closed));
  BinaryRaster sk = clean_skeleton(zhang_suen(closed));
  for (int round = 0; round < 3; ++round) {
    const BinaryRaster pruned = clean_skeleton(prune_spurs(sk, pen));
    if (pruned == sk) break;
    sk = pruned;
  }
  const std::size_t min_px = static_cast<std::size_t>(opt.min_stroke_px > 0 ? opt.min_stroke_px : std::max(3, pen));
  // Short pieces left between neighbouring junction pixels are not strokes;
  // drop their skeletons before the ink is shared out so neighbours absorb it.
  BinaryRaster kept(sk.width(), sk.height());
  for (const auto& s : decompose(sk)) {
    if (s.skeleton.count() < min_px) continue;
    kept.blit_or(s.skeleton, s.origin.x, s.origin.y);
  }
  std::vector<Stroke> out;
  for (auto& s : decompose_with_ink(kept, closed)) {
    s.origin.x += box.x0 - 2;
    s.origin.y += box.y0 - 2;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace gujfont
