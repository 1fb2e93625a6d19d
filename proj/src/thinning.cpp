#include "gujfont/thinning.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace gujfont {

const std::array<ThinTemplate, 12>& thin_templates() {
  static const std::array<ThinTemplate, 12> bank = {{
      {1, Mask3::parse("000 111 000")},   // W-E
      {2, Mask3::parse("010 010 010")},   // N-S
      {3, Mask3::parse("100 010 001")},   // NW-SE
      {4, Mask3::parse("001 010 100")},   // NE-SW
      {5, Mask3::parse("010 010 001")},   // N-SE
      {6, Mask3::parse("010 010 100")},   // N-SW
      {7, Mask3::parse("001 010 010")},   // S-NE
      {8, Mask3::parse("100 010 010")},   // S-NW
      {9, Mask3::parse("100 011 000")},   // E-NW
      {10, Mask3::parse("000 011 100")},  // E-SW
      {11, Mask3::parse("001 110 000")},  // W-NE
      {12, Mask3::parse("000 110 001")},  // W-SE
  }};
  return bank;
}

int connectivity_number(const BinaryRaster& img, int x, int y) {
  // Neighbours counter-clockwise from east: E, NE, N, NW, W, SW, S, SE.
  static constexpr std::array<Point, 8> ccw = {Point{1, 0},  Point{1, -1}, Point{0, -1},
                                               Point{-1, -1}, Point{-1, 0}, Point{-1, 1},
                                               Point{0, 1},  Point{1, 1}};
  int b[8];
  for (int i = 0; i < 8; ++i) b[i] = img.ink(x + ccw[i].x, y + ccw[i].y) ? 0 : 1;
  int n = 0;
  for (int k = 0; k < 8; k += 2) n += b[k] - b[k] * b[(k + 1) % 8] * b[(k + 2) % 8];
  return n;
}

namespace {

bool simple_removable(const BinaryRaster& img, int x, int y) {
  return img.neighbours(x, y) >= 2 && connectivity_number(img, x, y) == 1;
}

// Zhang-Suen deletion test for one sub-iteration. Ring bits follow kRing:
// bit0=P2(N) bit1=P3 bit2=P4(E) bit3=P5 bit4=P6(S) bit5=P7 bit6=P8(W) bit7=P9.
bool zs_candidate(const BinaryRaster& img, int x, int y, int step) {
  const std::uint8_t r = ring_bits(img, x, y);
  const int b = __builtin_popcount(r);
  if (b < 2 || b > 6 || ring_transitions(r) != 1) return false;
  const bool p2 = r & 1, p4 = r & 4, p6 = r & 16, p8 = r & 64;
  if (step == 0) return !(p2 && p4 && p6) && !(p4 && p6 && p8);
  return !(p2 && p4 && p8) && !(p2 && p6 && p8);
}

std::vector<int> label_components(const BinaryRaster& img, int& count) {
  const int w = img.width();
  std::vector<int> label(img.bits().size(), -1);
  count = 0;
  std::deque<Point> q;
  for (const auto& p : img.ink_points()) {
    if (label[p.y * w + p.x] >= 0) continue;
    label[p.y * w + p.x] = count;
    q.push_back(p);
    while (!q.empty()) {
      const Point c = q.front();
      q.pop_front();
      for (const auto& d : kRing) {
        const int nx = c.x + d.x, ny = c.y + d.y;
        if (img.ink(nx, ny) && label[ny * w + nx] < 0) {
          label[ny * w + nx] = count;
          q.push_back({nx, ny});
        }
      }
    }
    ++count;
  }
  return label;
}

bool zs_subiteration(BinaryRaster& img, int step) {
  std::vector<Point> cand;
  for (const auto& p : img.ink_points())
    if (zs_candidate(img, p.x, p.y, step)) cand.push_back(p);
  if (cand.empty()) return false;

  int n_before = 0;
  const std::vector<int> before = label_components(img, n_before);
  BinaryRaster trial = img;
  for (const auto& p : cand) trial.set(p, false);
  int n_after = 0;
  const std::vector<int> after = label_components(trial, n_after);

  // For each original component, the distinct post-deletion labels it maps to.
  const int w = img.width();
  std::vector<int> first(n_before, -1);
  std::vector<bool> broken(n_before, false);
  for (const auto& p : trial.ink_points()) {
    const int o = before[p.y * w + p.x], a = after[p.y * w + p.x];
    if (first[o] < 0) first[o] = a;
    else if (first[o] != a) broken[o] = true;
  }
  for (int o = 0; o < n_before; ++o)
    if (first[o] < 0) broken[o] = true;

  bool changed = false;
  std::vector<Point> sequential;
  for (const auto& p : cand) {
    if (broken[before[p.y * w + p.x]]) {
      sequential.push_back(p);
    } else {
      img.set(p, false);
      changed = true;
    }
  }
  for (const auto& p : sequential) {
    if (simple_removable(img, p.x, p.y)) {
      img.set(p, false);
      changed = true;
    }
  }
  return changed;
}

}  // namespace

BinaryRaster zhang_suen(const BinaryRaster& img) {
  BinaryRaster out = img;
  bool changed = true;
  while (changed) {
    const bool a = zs_subiteration(out, 0);
    const bool b = zs_subiteration(out, 1);
    changed = a || b;
  }
  return out;
}

BinaryRaster clean_skeleton(const BinaryRaster& img) {
  BinaryRaster out = img;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < out.height(); ++y) {
      for (int x = 0; x < out.width(); ++x) {
        if (out.ink(x, y) && simple_removable(out, x, y)) {
          out.set(x, y, false);
          changed = true;
        }
      }
    }
  }
  return out;
}

namespace {

int window_ink(const BinaryRaster& img, int x, int y) {
  return (img.ink(x, y) ? 1 : 0) + img.neighbours(x, y);
}

// Pixels 8-reachable from `start`, limited to ink.
std::vector<Point> reach(const BinaryRaster& img, Point start) {
  const int w = img.width();
  std::vector<std::uint8_t> seen(img.bits().size(), 0);
  std::vector<Point> out;
  std::deque<Point> q{start};
  seen[start.y * w + start.x] = 1;
  while (!q.empty()) {
    const Point c = q.front();
    q.pop_front();
    out.push_back(c);
    for (const auto& d : kRing) {
      const int nx = c.x + d.x, ny = c.y + d.y;
      if (img.ink(nx, ny) && !seen[ny * w + nx]) {
        seen[ny * w + nx] = 1;
        q.push_back({nx, ny});
      }
    }
  }
  return out;
}

struct Replacement {
  BinaryRaster result;
  int overlap = -1;
  std::size_t loss = std::numeric_limits<std::size_t>::max();
};

// Applies one template at (x, y): clear window cells the template leaves off,
// then drop whatever part of the old component is no longer attached to the
// centre.
BinaryRaster apply_template(const BinaryRaster& img, int x, int y, const Mask3& mask,
                            const std::vector<Point>& component) {
  BinaryRaster out = img;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx)
      if (mask.at(dx, dy) != Mask3::Cell::On && img.ink(x + dx, y + dy))
        out.set(x + dx, y + dy, false);
  const std::vector<Point> kept = reach(out, {x, y});
  BinaryRaster keep_mask(img.width(), img.height());
  for (const auto& p : kept) keep_mask.set(p, true);
  for (const auto& p : component)
    if (!keep_mask.ink(p)) out.set(p, false);
  return out;
}

}  // namespace

Skeleton adaptive_thin(const BinaryRaster& img) {
  BinaryRaster cur = img;
  const long limit = static_cast<long>(img.width()) * img.height();
  for (long iter = 0; iter <= limit; ++iter) {
    bool changed = false;
    for (int y = 0; y < cur.height(); ++y) {
      for (int x = 0; x < cur.width(); ++x) {
        if (!cur.ink(x, y) || window_ink(cur, x, y) <= 3) continue;
        const std::vector<Point> comp = reach(cur, {x, y});
        const std::size_t before = cur.count();
        Replacement best{cur};
        for (const auto& t : thin_templates()) {
          int overlap = 0;
          for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
              if (t.mask.at(dx, dy) == Mask3::Cell::On && cur.ink(x + dx, y + dy)) ++overlap;
          if (overlap < best.overlap) continue;
          BinaryRaster trial = apply_template(cur, x, y, t.mask, comp);
          const std::size_t loss = before - trial.count();
          if (overlap > best.overlap || loss < best.loss) {
            best = {std::move(trial), overlap, loss};
          }
        }
        cur = std::move(best.result);
        changed = true;
      }
    }
    if (!changed) return {cur};
  }
  throw Error("thinning divergence");
}

bool is_unit_width(const BinaryRaster& img) {
  for (const auto& p : img.ink_points())
    if (window_ink(img, p.x, p.y) > 3) return false;
  return true;
}

}  // namespace gujfont
