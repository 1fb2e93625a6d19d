#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gujfont/random.hpp"
#include "gujfont/raster.hpp"

namespace testsupport {

using gujfont::BinaryRaster;
using gujfont::Point;

// Union of a few filled discs, bars and thick segments on a w x h canvas.
inline BinaryRaster random_blob(gujfont::Rng& rng, int w = 40, int h = 40) {
  BinaryRaster img(w, h);
  const int shapes = 1 + static_cast<int>(rng.index(4));
  for (int s = 0; s < shapes; ++s) {
    const int kind = static_cast<int>(rng.index(3));
    const double cx = rng.uniform(4, w - 4), cy = rng.uniform(4, h - 4);
    if (kind == 0) {
      const double r = rng.uniform(1.5, 7);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) img.set(x, y, true);
    } else if (kind == 1) {
      const int bw = 2 + static_cast<int>(rng.index(12)), bh = 2 + static_cast<int>(rng.index(12));
      for (int y = static_cast<int>(cy); y < std::min(h, static_cast<int>(cy) + bh); ++y)
        for (int x = static_cast<int>(cx); x < std::min(w, static_cast<int>(cx) + bw); ++x)
          img.set(x, y, true);
    } else {
      const double ex = rng.uniform(2, w - 2), ey = rng.uniform(2, h - 2);
      const double half = rng.uniform(0.5, 2.5);
      const double dx = ex - cx, dy = ey - cy, len2 = dx * dx + dy * dy + 1e-9;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const double t = std::clamp(((x - cx) * dx + (y - cy) * dy) / len2, 0.0, 1.0);
          const double px = cx + t * dx - x, py = cy + t * dy - y;
          if (px * px + py * py <= half * half) img.set(x, y, true);
        }
      }
    }
  }
  return img;
}

// Independent union-find component counter used as an oracle.
inline int count_components_uf(const BinaryRaster& img) {
  const int w = img.width(), h = img.height();
  std::vector<int> parent(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!img.ink(x, y)) continue;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (img.ink(x + dx, y + dy)) parent[find(y * w + x)] = find((y + dy) * w + x + dx);
    }
  int n = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (img.ink(x, y) && find(y * w + x) == y * w + x) ++n;
  return n;
}

inline std::string data_path(const std::string& rel) { return std::string(GUJFONT_DATA_DIR) + "/" + rel; }

}  // namespace testsupport
