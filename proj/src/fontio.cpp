#include "gujfont/fontio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>

#include "gujfont/rules.hpp"

namespace gujfont {

namespace {

// Clockwise as drawn on screen (y down), starting east.
constexpr std::array<Point, 8> kClockwise = {Point{1, 0},  Point{1, 1},   Point{0, 1},  Point{-1, 1},
                                             Point{-1, 0}, Point{-1, -1}, Point{0, -1}, Point{1, -1}};

int direction_of(Point from, Point to) {
  const Point d{to.x - from.x, to.y - from.y};
  for (int i = 0; i < 8; ++i)
    if (kClockwise[i] == d) return i;
  throw Error("border following: points are not neighbours");
}

double shoelace(const std::vector<Point>& pts) {
  double a = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 1) % pts.size()];
    a += static_cast<double>(p.x) * q.y - static_cast<double>(q.x) * p.y;
  }
  return a / 2;
}

}  // namespace

std::vector<PixelContour> trace_pixel_contours(const BinaryRaster& img) {
  const int w = img.width() + 2, h = img.height() + 2;
  std::vector<int> f(static_cast<std::size_t>(w) * h, 0);
  auto at = [&](Point p) -> int& { return f[static_cast<std::size_t>(p.y) * w + p.x]; };
  for (const auto& p : img.ink_points()) at({p.x + 1, p.y + 1}) = 1;

  std::vector<PixelContour> out;
  int nbd = 1;
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const int v = at({x, y});
      Point start2;
      bool hole;
      if (v == 1 && at({x - 1, y}) == 0) {
        hole = false;
        start2 = {x - 1, y};
      } else if (v >= 1 && at({x + 1, y}) == 0) {
        hole = true;
        start2 = {x + 1, y};
      } else {
        continue;
      }
      ++nbd;
      const Point p0{x, y};
      PixelContour c;
      c.hole = hole;
      // 3.1: clockwise from start2 for the first ink neighbour.
      const int d0 = direction_of(p0, start2);
      Point p1{-1, -1};
      for (int k = 0; k < 8; ++k) {
        const Point q{p0.x + kClockwise[(d0 + k) % 8].x, p0.y + kClockwise[(d0 + k) % 8].y};
        if (at(q) != 0) {
          p1 = q;
          break;
        }
      }
      if (p1.x < 0) {
        at(p0) = -nbd;
        c.points.push_back({x - 1, y - 1});
        out.push_back(std::move(c));
        continue;
      }
      Point p2 = p1, p3 = p0;
      for (;;) {
        // 3.3: counter-clockwise around p3, starting just after p2.
        const int d2 = direction_of(p3, p2);
        Point p4{-1, -1};
        bool east_zero = false;
        for (int k = 1; k <= 8; ++k) {
          const int d = ((d2 - k) % 8 + 8) % 8;
          const Point q{p3.x + kClockwise[d].x, p3.y + kClockwise[d].y};
          if (at(q) != 0) {
            p4 = q;
            break;
          }
          if (d == 0) east_zero = true;
        }
        if (east_zero)
          at(p3) = -nbd;
        else if (at(p3) == 1)
          at(p3) = nbd;
        c.points.push_back({p3.x - 1, p3.y - 1});
        if (p4 == p0 && p3 == p1) break;
        p2 = p3;
        p3 = p4;
      }
      // Outer borders clockwise on screen (positive area with y down), holes the other way.
      const double a = shoelace(c.points);
      if ((!hole && a < 0) || (hole && a > 0)) std::reverse(c.points.begin() + 1, c.points.end());
      out.push_back(std::move(c));
    }
  }
  return out;
}

EmPoint pixel_to_em(Point p, int canvas) {
  const double s = static_cast<double>(kEm) / canvas;
  return {static_cast<int>(std::lround((p.x + 0.5) * s)), static_cast<int>(std::lround(kAscent - (p.y + 0.5) * s))};
}

std::vector<Contour> trace_contours(const BinaryRaster& glyph) {
  std::vector<Contour> out;
  for (const auto& pc : trace_pixel_contours(glyph)) {
    if (pc.points.size() < 3) continue;
    Contour c;
    c.hole = pc.hole;
    for (const auto& p : pc.points) c.points.push_back(pixel_to_em(p, glyph.width()));
    out.push_back(std::move(c));
  }
  return out;
}

double screen_area(const Contour& c) {
  double a = 0;
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const auto& p = c.points[i];
    const auto& q = c.points[(i + 1) % c.points.size()];
    a += static_cast<double>(p.x) * q.y - static_cast<double>(q.x) * p.y;
  }
  // em y grows upward; flip to screen orientation.
  return -a / 2;
}

namespace {

double segment_distance(EmPoint p, EmPoint a, EmPoint b) {
  const double dx = b.x - a.x, dy = b.y - a.y, len2 = dx * dx + dy * dy;
  if (len2 == 0) return std::hypot(p.x - a.x, p.y - a.y);
  const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

void dp_range(const std::vector<EmPoint>& pts, std::size_t i, std::size_t j, double eps, std::vector<bool>& keep) {
  if (j <= i + 1) return;
  double best = -1;
  std::size_t idx = i;
  for (std::size_t k = i + 1; k < j; ++k) {
    const double d = segment_distance(pts[k], pts[i], pts[j]);
    if (d > best) best = d, idx = k;
  }
  if (best > eps) {
    keep[idx] = true;
    dp_range(pts, i, idx, eps, keep);
    dp_range(pts, idx, j, eps, keep);
  }
}

}  // namespace

std::vector<EmPoint> douglas_peucker(const std::vector<EmPoint>& pts, double epsilon) {
  if (pts.size() < 3) return pts;
  std::vector<bool> keep(pts.size(), false);
  keep.front() = keep.back() = true;
  dp_range(pts, 0, pts.size() - 1, epsilon, keep);
  std::vector<EmPoint> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (keep[i]) out.push_back(pts[i]);
  return out;
}

std::vector<Contour> simplify(const std::vector<Contour>& cs, double epsilon) {
  if (epsilon < 0) throw Error("simplify: epsilon must be non-negative");
  if (epsilon == 0) return cs;
  std::vector<Contour> out;
  for (const auto& c : cs) {
    const auto& p = c.points;
    if (p.size() <= 3) {
      out.push_back(c);
      continue;
    }
    // Split the ring at the point farthest from the first one.
    std::size_t far = 1;
    double best = -1;
    for (std::size_t k = 1; k < p.size(); ++k) {
      const double d = std::hypot(p[k].x - p[0].x, p[k].y - p[0].y);
      if (d > best) best = d, far = k;
    }
    std::vector<EmPoint> ring = p;
    ring.push_back(p[0]);
    std::vector<bool> keep(ring.size(), false);
    keep[0] = keep[far] = keep.back() = true;
    dp_range(ring, 0, far, epsilon, keep);
    dp_range(ring, far, ring.size() - 1, epsilon, keep);
    Contour s;
    s.hole = c.hole;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i)
      if (keep[i]) s.points.push_back(ring[i]);
    // The start point is kept only because the ring was cut there.
    if (s.points.size() > 3 && segment_distance(s.points[0], s.points.back(), s.points[1]) <= epsilon)
      s.points.erase(s.points.begin());
    if (s.points.size() < 3) {
      // Degenerate sliver: keep the widest triangle the ring offers.
      std::size_t third = 0;
      double d3 = -1;
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double d = segment_distance(p[k], p[0], p[far]);
        if (k != 0 && k != far && d > d3) d3 = d, third = k;
      }
      std::vector<std::size_t> idx{0, far, third};
      std::sort(idx.begin(), idx.end());
      s.points.clear();
      for (auto k : idx) s.points.push_back(p[k]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

BinaryRaster rasterize(const std::vector<Contour>& cs, int canvas) {
  BinaryRaster out(canvas, canvas);
  const double s = static_cast<double>(kEm) / canvas;
  auto px = [&](const EmPoint& p) { return std::pair<double, double>{p.x / s - 0.5, (kAscent - p.y) / s - 0.5}; };
  for (int y = 0; y < canvas; ++y) {
    std::vector<double> xs;
    for (const auto& c : cs) {
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        auto [x0, y0] = px(c.points[i]);
        auto [x1, y1] = px(c.points[(i + 1) % c.points.size()]);
        if ((y0 <= y && y < y1) || (y1 <= y && y < y0)) xs.push_back(x0 + (y - y0) * (x1 - x0) / (y1 - y0));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const int a = std::max(0, static_cast<int>(std::ceil(xs[k] - 1e-9)));
      const int b = std::min(canvas - 1, static_cast<int>(std::floor(xs[k + 1] + 1e-9)));
      for (int x = a; x <= b; ++x) out.set(x, y, true);
    }
  }
  auto plot = [&](int x, int y) {
    if (out.in_bounds(x, y)) out.set(x, y, true);
  };
  for (const auto& c : cs) {
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      auto [fx0, fy0] = px(c.points[i]);
      auto [fx1, fy1] = px(c.points[(i + 1) % c.points.size()]);
      int x0 = static_cast<int>(std::lround(fx0)), y0 = static_cast<int>(std::lround(fy0));
      const int x1 = static_cast<int>(std::lround(fx1)), y1 = static_cast<int>(std::lround(fy1));
      const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
      const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
      int err = dx + dy;
      for (;;) {
        plot(x0, y0);
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) err += dy, x0 += sx;
        if (e2 <= dx) err += dx, y0 += sy;
      }
    }
  }
  return out;
}

void FontProject::add_glyph(char32_t cp, std::vector<Contour> contours) {
  if (cp < 0x0A80 || cp > 0x0AFF) throw Error(codepoint_label(cp) + " is outside the Gujarati block");
  if (contours.empty()) throw Error(codepoint_label(cp) + ": empty glyph");
  int x0 = std::numeric_limits<int>::max(), x1 = std::numeric_limits<int>::min();
  for (const auto& c : contours)
    for (const auto& p : c.points) x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
  for (auto& c : contours)
    for (auto& p : c.points) p.x += kSideBearing - x0;
  FontGlyph g;
  g.codepoint = cp;
  g.contours = std::move(contours);
  g.advance = (x1 - x0) + 2 * kSideBearing;
  glyphs[cp] = std::move(g);
}

std::string export_svg(char32_t cp, const std::vector<Contour>& contours) {
  if (contours.empty()) throw Error("empty glyph");
  std::ostringstream d;
  bool first = true;
  for (const auto& c : contours) {
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      if (!first) d << ' ';
      first = false;
      d << (i == 0 ? "M " : "L ") << c.points[i].x << ' ' << (kAscent - c.points[i].y);
    }
    d << " Z";
  }
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" width=\"1000\" height=\"1000\">\n"
      << "<title>" << codepoint_label(cp) << "</title>\n"
      << "<path fill=\"black\" fill-rule=\"evenodd\" d=\"" << d.str() << "\"/>\n"
      << "</svg>\n";
  return out.str();
}

namespace {

std::string glyph_name(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "uni%04X", static_cast<unsigned>(cp));
  return buf;
}

std::string postscript_name(const std::string& family) {
  std::string out;
  for (char ch : family)
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-') out += ch;
  return out.empty() ? "Untitled" : out;
}

}  // namespace

std::string export_sfd(const FontProject& fp) {
  if (fp.glyphs.empty()) throw Error("font has no glyphs");
  std::ostringstream o;
  o << "SplineFontDB: 3.0\n"
    << "FontName: " << postscript_name(fp.family_name) << "\n"
    << "FullName: " << fp.family_name << "\n"
    << "FamilyName: " << fp.family_name << "\n"
    << "Weight: Regular\n"
    << "Version: 001.000\n"
    << "ItalicAngle: 0\n"
    << "UnderlinePosition: -100\n"
    << "UnderlineWidth: 50\n"
    << "Ascent: " << kAscent << "\n"
    << "Descent: " << kDescent << "\n"
    << "LayerCount: 2\n"
    << "Layer: 0 0 \"Back\" 1\n"
    << "Layer: 1 0 \"Fore\" 0\n"
    << "Encoding: UnicodeFull\n"
    << "BeginChars: 1114112 " << fp.glyphs.size() << "\n";
  int gid = 0;
  for (const auto& [cp, g] : fp.glyphs) {
    if (cp < 0x0A80 || cp > 0x0AFF) throw Error(codepoint_label(cp) + " is outside the Gujarati block");
    if (g.contours.empty()) throw Error(codepoint_label(cp) + ": glyph has no contours");
    o << "\nStartChar: " << glyph_name(cp) << "\n"
      << "Encoding: " << static_cast<unsigned>(cp) << ' ' << static_cast<unsigned>(cp) << ' ' << gid++ << "\n"
      << "Width: " << g.advance << "\n"
      << "Flags: W\n"
      << "LayerCount: 2\n"
      << "Fore\n"
      << "SplineSet\n";
    for (const auto& c : g.contours) {
      o << c.points[0].x << ' ' << c.points[0].y << " m 1\n";
      for (std::size_t i = 1; i < c.points.size(); ++i) o << ' ' << c.points[i].x << ' ' << c.points[i].y << " l 1\n";
      o << ' ' << c.points[0].x << ' ' << c.points[0].y << " l 1\n";
    }
    o << "EndSplineSet\n"
      << "EndChar\n";
  }
  o << "EndChars\n"
    << "EndSplineFont\n";
  return o.str();
}

FontProject parse_sfd(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "SplineFontDB: 3.0") throw Error("not an SFD file");
  FontProject fp;
  FontGlyph cur;
  bool in_char = false, in_set = false, ended = false;
  int line_no = 1;
  auto fail = [&](const std::string& why) { throw Error("SFD line " + std::to_string(line_no) + ": " + why); };
  auto close_contour = [&]() {
    if (cur.contours.empty()) return;
    auto& pts = cur.contours.back().points;
    if (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
    if (pts.size() < 3) fail("contour with fewer than 3 points");
    cur.contours.back().hole = screen_area(cur.contours.back()) < 0;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto value = [&](const char* key) -> std::optional<std::string> {
      const std::string k = std::string(key) + ": ";
      if (line.rfind(k, 0) == 0) return line.substr(k.size());
      return std::nullopt;
    };
    if (in_set) {
      if (line == "EndSplineSet") {
        close_contour();
        in_set = false;
        continue;
      }
      std::istringstream ls(line);
      int x, y, flag;
      std::string op;
      if (!(ls >> x >> y >> op >> flag)) fail("bad spline point");
      if (op == "m") {
        close_contour();
        cur.contours.push_back({{{x, y}}, false});
      } else if (op == "l") {
        if (cur.contours.empty()) fail("line before move");
        cur.contours.back().points.push_back({x, y});
      } else {
        fail("unsupported spline operator '" + op + "'");
      }
      continue;
    }
    if (auto v = value("FamilyName")) {
      fp.family_name = *v;
    } else if (auto v = value("Ascent")) {
      if (std::stoi(*v) != kAscent) fail("unexpected ascent");
    } else if (auto v = value("Descent")) {
      if (std::stoi(*v) != kDescent) fail("unexpected descent");
    } else if (auto v = value("StartChar")) {
      if (in_char) fail("nested StartChar");
      in_char = true;
      cur = FontGlyph{};
    } else if (in_char && value("Encoding")) {
      std::istringstream ls(*value("Encoding"));
      unsigned cp;
      if (!(ls >> cp)) fail("bad Encoding");
      cur.codepoint = static_cast<char32_t>(cp);
    } else if (auto v = value("Width"); in_char && v) {
      cur.advance = std::stoi(*v);
    } else if (in_char && line == "SplineSet") {
      in_set = true;
    } else if (line == "EndChar") {
      if (!in_char) fail("EndChar without StartChar");
      fp.glyphs[cur.codepoint] = cur;
      in_char = false;
    } else if (line == "EndSplineFont") {
      ended = true;
    }
  }
  if (in_char || in_set) throw Error("SFD ends inside a glyph");
  if (!ended) throw Error("SFD is missing EndSplineFont");
  return fp;
}

}  // namespace gujfont
