#include "gujfont/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <regex>
#include <sstream>

#include "gujfont/features.hpp"
#include "gujfont/image_io.hpp"

namespace gujfont {

using nlohmann::json;

std::pair<int, int> parse_layout(const std::string& text) {
  static const std::regex re(R"(\s*(\d+)\s*[xX]\s*(\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw Error("bad layout '" + text + "', expected RxC");
  const int r = std::stoi(m[1]), c = std::stoi(m[2]);
  if (r < 1 || c < 1) throw Error("layout needs at least one row and column");
  return {r, c};
}

std::vector<char32_t> parse_char_list(const std::string& text) {
  std::vector<char32_t> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(parse_codepoint(cur));
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch)))
      flush();
    else
      cur += ch;
  }
  flush();
  return out;
}

SheetResult ingest_sheet(const GrayRaster& scan, const SheetLayout& layout) {
  if (layout.rows < 1 || layout.cols < 1) throw Error("layout needs at least one row and column");
  if (static_cast<std::size_t>(layout.rows) * layout.cols < layout.chars.size())
    throw Error("layout has fewer cells than expected characters");
  const BinaryRaster ink = binarize_otsu(scan);
  const int w = ink.width(), h = ink.height();
  SheetResult res;
  std::map<std::size_t, std::vector<Point>> cells;
  auto cell_of = [&](double x, double y) {
    const int col = std::clamp(static_cast<int>(x * layout.cols / w), 0, layout.cols - 1);
    const int row = std::clamp(static_cast<int>(y * layout.rows / h), 0, layout.rows - 1);
    return static_cast<std::size_t>(row) * layout.cols + col;
  };
  for (const auto& comp : connected_components(ink)) {
    double sx = 0, sy = 0;
    for (const auto& p : comp.pixels) sx += p.x + 0.5, sy += p.y + 0.5;
    const std::size_t cell = cell_of(sx / comp.pixels.size(), sy / comp.pixels.size());
    const auto& b = comp.bbox;
    if (cell_of(b.x0 + 0.5, b.y0 + 0.5) != cell || cell_of(b.x1 + 0.5, b.y1 + 0.5) != cell) {
      res.warnings.push_back("component at (" + std::to_string(b.x0) + "," + std::to_string(b.y0) +
                             ") straddles cells; assigned by centroid to cell " + std::to_string(cell));
    }
    if (cell >= layout.chars.size()) {
      res.warnings.push_back("ink in unused cell " + std::to_string(cell) + " ignored");
      continue;
    }
    auto& dst = cells[cell];
    dst.insert(dst.end(), comp.pixels.begin(), comp.pixels.end());
  }
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < layout.chars.size(); ++i) {
    auto it = cells.find(i);
    if (it == cells.end()) {
      missing.push_back(codepoint_label(layout.chars[i]));
      continue;
    }
    const BinaryRaster full = raster_from_points(w, h, it->second);
    res.crops.insert_or_assign(layout.chars[i], full.crop(full.bbox()));
  }
  if (!missing.empty()) {
    std::string msg = "empty cell for";
    for (const auto& m : missing) msg += " " + m;
    throw Error(msg);
  }
  return res;
}

CharacterSample sample_from_glyph(const BinaryRaster& ink, const Model& model) {
  CharacterSample s;
  s.bbox = ink.bbox();
  if (s.bbox.empty()) throw Error("glyph has no ink");
  const auto strokes = extract_strokes(ink);
  std::vector<BinaryRaster> inks;
  for (const auto& st : strokes) {
    SampleStroke ss;
    ss.stroke_class = predict(model, stroke_features(st.normalized));
    Rect b = st.crop.bbox();
    ss.bbox = {b.x0 + st.origin.x, b.y0 + st.origin.y, b.x1 + st.origin.x, b.y1 + st.origin.y};
    const Point a = st.endpoints.size() >= 1 ? st.endpoints[0] : Point{b.x0, b.y0};
    const Point e = st.endpoints.size() >= 2 ? st.endpoints[1] : a;
    ss.a = {a.x + st.origin.x, a.y + st.origin.y};
    ss.b = {e.x + st.origin.x, e.y + st.origin.y};
    s.strokes.push_back(ss);
    BinaryRaster full(ink.width(), ink.height());
    full.blit_or(st.crop, st.origin.x, st.origin.y);
    inks.push_back(std::move(full));
  }
  for (std::size_t i = 0; i < inks.size(); ++i) {
    for (std::size_t j = i + 1; j < inks.size(); ++j) {
      long sx = 0, sy = 0, n = 0;
      for (const auto& p : inks[i].ink_points()) {
        bool touch = false;
        for (const auto& d : kRing) touch = touch || inks[j].ink(p.x + d.x, p.y + d.y);
        if (touch) sx += p.x, sy += p.y, ++n;
      }
      if (n > 0) s.junctions.push_back({static_cast<int>(sx / n), static_cast<int>(sy / n)});
    }
  }
  return s;
}

BinaryRaster seed_glyph(const BinaryRaster& ink) { return center_on_canvas(normalize_seed(ink)); }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Partial: return "partial";
    case Verdict::Fail: return "fail";
  }
  return "?";
}

std::vector<int> expected_classes(const Variant& v) {
  std::vector<int> out;
  for (const auto& p : v) out.push_back(apparent_class(p.stroke_class, p.appearance));
  std::sort(out.begin(), out.end());
  return out;
}

RoundtripRow roundtrip_glyph(const BinaryRaster& glyph, const std::vector<int>& expected, const Model& model) {
  RoundtripRow row;
  row.expected = expected;
  std::sort(row.expected.begin(), row.expected.end());
  for (const auto& s : extract_strokes(glyph)) row.found.push_back(predict(model, stroke_features(s.normalized)));
  std::sort(row.found.begin(), row.found.end());
  std::vector<int> common;
  std::set_intersection(row.expected.begin(), row.expected.end(), row.found.begin(), row.found.end(),
                        std::back_inserter(common));
  row.verdict = row.found == row.expected ? Verdict::Pass : common.empty() ? Verdict::Fail : Verdict::Partial;
  return row;
}

RoundtripReport run_roundtrip_eval(const std::filesystem::path& glyph_dir, const RuleSet& rules, const Model& model) {
  RoundtripReport rep;
  int pass = 0;
  for (const auto& [cp, rule] : rules.rules) {
    const auto path = glyph_dir / glyph_file_name(cp, 0);
    RoundtripRow row;
    if (!std::filesystem::exists(path)) {
      row.codepoint = cp;
      row.expected = expected_classes(rule.variants[0]);
      row.note = "missing " + path.filename().string();
    } else {
      try {
        row = roundtrip_glyph(read_binary(path), expected_classes(rule.variants[0]), model);
      } catch (const Error& e) {
        row.expected = expected_classes(rule.variants[0]);
        row.verdict = Verdict::Fail;
        row.note = e.what();
      }
      row.codepoint = cp;
    }
    pass += row.verdict == Verdict::Pass;
    rep.rows.push_back(std::move(row));
  }
  rep.overall = rep.rows.empty() ? 0.0 : static_cast<double>(pass) / rep.rows.size();
  return rep;
}

namespace {

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

std::string roundtrip_table(const RoundtripReport& r) {
  std::ostringstream o;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %-5s %-16s %-16s %s\n", "Character", "", "Expected", "Found", "Result");
  o << line;
  int counts[3] = {0, 0, 0};
  for (const auto& row : r.rows) {
    ++counts[static_cast<int>(row.verdict)];
    std::snprintf(line, sizeof line, "%-10s %-5s %-16s %-16s %s\n", codepoint_label(row.codepoint).c_str(),
                  utf8(row.codepoint).c_str(), join_ints(row.expected).c_str(), join_ints(row.found).c_str(),
                  to_string(row.verdict));
    o << line;
  }
  std::snprintf(line, sizeof line, "pass %d, partial %d, fail %d of %zu; overall %.4f\n", counts[0], counts[1],
                counts[2], r.rows.size(), r.overall);
  o << line;
  return o.str();
}

json roundtrip_json(const RoundtripReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j = {{"char", codepoint_label(row.codepoint)},
              {"expected", row.expected},
              {"found", row.found},
              {"result", to_string(row.verdict)}};
    if (!row.note.empty()) j["note"] = row.note;
    rows.push_back(j);
  }
  return {{"rows", rows}, {"overall", r.overall}, {"characters", r.rows.size()}};
}

FontBuild build_font(const std::map<char32_t, BinaryRaster>& glyphs, const std::string& family, double epsilon) {
  FontBuild fb;
  fb.project.family_name = family;
  for (const auto& [cp, img] : glyphs) {
    auto contours = simplify(trace_contours(img), epsilon);
    if (contours.empty()) throw Error(codepoint_label(cp) + ": empty glyph");
    fb.svgs[cp] = export_svg(cp, contours);
    fb.project.add_glyph(cp, std::move(contours));
  }
  if (fb.project.glyphs.empty()) throw Error("no glyphs to build a font from");
  return fb;
}

FontBuild build_font(const std::filesystem::path& glyph_dir, const std::string& family, double epsilon) {
  static const std::regex name_re(R"(u([0-9A-Fa-f]{4,6})_v0\.png)");
  std::map<char32_t, BinaryRaster> glyphs;
  if (!std::filesystem::is_directory(glyph_dir)) throw Error(glyph_dir.string() + " is not a directory");
  for (const auto& entry : std::filesystem::directory_iterator(glyph_dir)) {
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, name_re)) continue;
    glyphs.insert_or_assign(static_cast<char32_t>(std::stoul(m[1], nullptr, 16)), read_binary(entry.path()));
  }
  return build_font(glyphs, family, epsilon);
}

}  // namespace gujfont
