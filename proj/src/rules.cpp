#include "gujfont/rules.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "gujfont/image_io.hpp"
#include "gujfont/random.hpp"

namespace gujfont {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 6> kAppearanceNames = {"identity", "flip-h", "flip-v", "rot90", "rot180", "rot270"};

}  // namespace

const char* to_string(Appearance a) { return kAppearanceNames[static_cast<int>(a)]; }

Appearance parse_appearance(const std::string& s) {
  for (std::size_t i = 0; i < kAppearanceNames.size(); ++i)
    if (s == kAppearanceNames[i]) return static_cast<Appearance>(i);
  throw Error("unknown appearance '" + s + "'");
}

int apparent_class(int cls, Appearance a) {
  // Columns: identity, flip-h, flip-v, rot90, rot180, rot270 (rotations clockwise).
  static const int table[6][6] = {
      {1, 1, 1, 2, 1, 2}, {2, 2, 2, 1, 2, 1}, {3, 4, 3, 6, 4, 5},
      {4, 3, 4, 5, 3, 6}, {5, 5, 6, 3, 6, 4}, {6, 6, 5, 4, 5, 3},
  };
  if (cls < 1 || cls > 6) throw Error("stroke class must be 1-6");
  return table[cls - 1][static_cast<int>(a)];
}

std::string codepoint_label(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(cp));
  return buf;
}

std::string utf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return out;
}

char32_t parse_codepoint(const std::string& text) {
  std::string t = text;
  auto hex = [&](const std::string& digits) -> char32_t {
    if (digits.empty() || digits.size() > 6 ||
        !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isxdigit(c); }))
      throw Error("bad codepoint '" + text + "'");
    return static_cast<char32_t>(std::stoul(digits, nullptr, 16));
  };
  if (t.size() > 2 && (t[0] == 'U' || t[0] == 'u') && t[1] == '+') return hex(t.substr(2));
  if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) return hex(t.substr(2));
  const auto* s = reinterpret_cast<const unsigned char*>(t.data());
  if (!t.empty() && s[0] >= 0x80) {
    int len = s[0] >= 0xF0 ? 4 : s[0] >= 0xE0 ? 3 : s[0] >= 0xC0 ? 2 : 0;
    if (len == 0 || static_cast<int>(t.size()) != len) throw Error("bad codepoint '" + text + "'");
    char32_t cp = s[0] & (0x7F >> len);
    for (int i = 1; i < len; ++i) {
      if ((s[i] & 0xC0) != 0x80) throw Error("bad UTF-8 in '" + text + "'");
      cp = (cp << 6) | (s[i] & 0x3F);
    }
    return cp;
  }
  return hex(t);
}

namespace {

std::string where(const CompositionRule& r, std::size_t v, std::size_t p, const std::string& field) {
  return "character " + codepoint_label(r.codepoint) + " variant " + std::to_string(v) + " placement " +
         std::to_string(p) + ": field '" + field + "': ";
}

void check_ref(const PointRef& ref, const std::string& at) {
  if (ref.kind == PointRef::Kind::Percent &&
      (ref.px < 0 || ref.px > 100 || ref.py < 0 || ref.py > 100))
    throw Error(at + "percent out of range");
}

}  // namespace

void validate_rule(const CompositionRule& r) {
  const std::string who = "character " + codepoint_label(r.codepoint) + ": ";
  if (r.codepoint < 0x0A95 || r.codepoint > 0x0AB9) throw Error(who + "field 'char': not a Gujarati consonant");
  if (r.variants.empty()) throw Error(who + "field 'variants': no variants");
  if (r.variants.size() > 2) throw Error(who + "field 'variants': more than 2 variants");
  for (std::size_t v = 0; v < r.variants.size(); ++v) {
    const auto& var = r.variants[v];
    if (var.empty()) throw Error(who + "variant " + std::to_string(v) + " has no placements");
    for (std::size_t p = 0; p < var.size(); ++p) {
      const auto& pl = var[p];
      if (pl.stroke_class < 1 || pl.stroke_class > 6)
        throw Error(where(r, v, p, "class") + "unknown stroke class " + std::to_string(pl.stroke_class));
      if (pl.occurrence < 0) throw Error(where(r, v, p, "occ") + "negative occurrence");
      if (!(pl.size > 0.0 && pl.size <= 4.0)) throw Error(where(r, v, p, "size") + "must be in (0, 4]");
      if (pl.join && pl.position) throw Error(where(r, v, p, "jp") + "both jp and pos given");
      if (!pl.join && !pl.position) throw Error(where(r, v, p, "pos") + "neither jp nor pos given");
      if (pl.join) {
        if (pl.join->target < 0 || pl.join->target >= static_cast<int>(p))
          throw Error(where(r, v, p, "jp.target") + "must refer to an earlier placement");
        check_ref(pl.join->this_point, where(r, v, p, "jp.this"));
        check_ref(pl.join->target_point, where(r, v, p, "jp.at"));
      }
      if (pl.position) {
        for (int c : *pl.position)
          if (c < 0 || c > 100) throw Error(where(r, v, p, "pos") + "percent out of range");
      }
      if (pl.distance) {
        if (!pl.position) throw Error(where(r, v, p, "ds") + "ds requires pos");
        if (p == 0) throw Error(where(r, v, p, "ds") + "first placement has no predecessor");
        for (int c : *pl.distance)
          if (c < -100 || c > 100) throw Error(where(r, v, p, "ds") + "percent out of range");
      }
    }
  }
}

namespace {

json ref_to_json(const PointRef& r) {
  switch (r.kind) {
    case PointRef::Kind::A: return "A";
    case PointRef::Kind::B: return "B";
    case PointRef::Kind::Percent: return json::array({r.px, r.py});
  }
  return nullptr;
}

PointRef ref_from_json(const json& j, const std::string& at) {
  PointRef r;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "A") r.kind = PointRef::Kind::A;
    else if (s == "B") r.kind = PointRef::Kind::B;
    else throw Error(at + "expected \"A\", \"B\" or [px, py]");
  } else if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    r.kind = PointRef::Kind::Percent;
    r.px = j[0].get<int>();
    r.py = j[1].get<int>();
  } else {
    throw Error(at + "expected \"A\", \"B\" or [px, py]");
  }
  return r;
}

std::array<int, 2> pair_from_json(const json& j, const std::string& at) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw Error(at + "expected [x, y] integers");
  return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

RuleSet load_ruleset(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("ruleset is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "gujfont-ruleset") throw Error("not a gujfont ruleset");
  RuleSet rs;
  rs.version = doc.value("version", 1);
  rs.source = doc.value("source", "");
  if (!doc.contains("characters") || !doc["characters"].is_array()) throw Error("ruleset: missing 'characters'");
  for (const auto& c : doc["characters"]) {
    CompositionRule rule;
    if (!c.contains("char") || !c["char"].is_string()) throw Error("ruleset: character without 'char'");
    rule.codepoint = parse_codepoint(c["char"].get<std::string>());
    rule.name = c.value("name", "");
    if (!c.contains("variants") || !c["variants"].is_array())
      throw Error("character " + codepoint_label(rule.codepoint) + ": field 'variants': missing");
    for (std::size_t v = 0; v < c["variants"].size(); ++v) {
      Variant var;
      const auto& jv = c["variants"][v];
      if (!jv.is_array()) throw Error("character " + codepoint_label(rule.codepoint) + ": variant is not a list");
      for (std::size_t p = 0; p < jv.size(); ++p) {
        const auto& jp = jv[p];
        auto at = [&](const std::string& f) { return where(rule, v, p, f); };
        StrokePlacement pl;
        try {
          pl.stroke_class = jp.at("class").get<int>();
          pl.occurrence = jp.value("occ", 0);
          pl.size = jp.value("size", 1.0);
          pl.appearance = parse_appearance(jp.value("ap", std::string("identity")));
        } catch (const json::exception& e) {
          throw Error(at("class") + e.what());
        } catch (const Error& e) {
          throw Error(at("ap") + e.what());
        }
        if (jp.contains("pos")) pl.position = pair_from_json(jp["pos"], at("pos"));
        if (jp.contains("ds")) pl.distance = pair_from_json(jp["ds"], at("ds"));
        if (jp.contains("jp")) {
          const auto& j = jp["jp"];
          if (!j.is_object() || !j.contains("target") || !j["target"].is_number_integer())
            throw Error(at("jp.target") + "missing or not an integer");
          JoinSpec js;
          js.this_point = ref_from_json(j.value("this", json("A")), at("jp.this"));
          js.target = j["target"].get<int>();
          js.target_point = ref_from_json(j.value("at", json("A")), at("jp.at"));
          pl.join = js;
        }
        var.push_back(pl);
      }
      rule.variants.push_back(var);
    }
    validate_rule(rule);
    if (rs.rules.count(rule.codepoint)) throw Error("character " + codepoint_label(rule.codepoint) + " listed twice");
    rs.rules[rule.codepoint] = rule;
  }
  return rs;
}

std::string save_ruleset(const RuleSet& rs) {
  json chars = json::array();
  for (const auto& [cp, rule] : rs.rules) {
    json variants = json::array();
    for (const auto& var : rule.variants) {
      json jv = json::array();
      for (const auto& pl : var) {
        json p = {{"class", pl.stroke_class}, {"occ", pl.occurrence}, {"size", pl.size}, {"ap", to_string(pl.appearance)}};
        if (pl.position) p["pos"] = *pl.position;
        if (pl.distance) p["ds"] = *pl.distance;
        if (pl.join)
          p["jp"] = {{"this", ref_to_json(pl.join->this_point)},
                     {"target", pl.join->target},
                     {"at", ref_to_json(pl.join->target_point)}};
        jv.push_back(p);
      }
      variants.push_back(jv);
    }
    chars.push_back({{"char", codepoint_label(cp)}, {"name", rule.name}, {"variants", variants}});
  }
  json doc = {{"format", "gujfont-ruleset"}, {"version", rs.version}, {"source", rs.source}, {"characters", chars}};
  return doc.dump(2) + "\n";
}

RuleSet load_ruleset_file(const std::string& path) { return load_ruleset(read_file(path)); }

std::vector<int> class_multiset(const Variant& v) {
  std::vector<int> out;
  for (const auto& p : v) out.push_back(p.stroke_class);
  std::sort(out.begin(), out.end());
  return out;
}

RuleSet scramble_ruleset(const RuleSet& rs, std::uint64_t seed) {
  Rng rng(seed);
  std::array<int, 7> map{};
  for (;;) {
    std::array<int, 6> perm = {1, 2, 3, 4, 5, 6};
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
    bool derangement = true;
    for (int i = 0; i < 6; ++i) derangement = derangement && perm[i] != i + 1;
    if (!derangement) continue;
    for (int i = 0; i < 6; ++i) map[i + 1] = perm[i];
    break;
  }
  RuleSet out = rs;
  out.source = rs.source + " (scrambled)";
  for (auto& [cp, rule] : out.rules)
    for (auto& var : rule.variants)
      for (auto& pl : var) pl.stroke_class = map[pl.stroke_class];
  return out;
}

std::array<int, 2> percent_in(const Rect& box, Point p) {
  auto pct = [](int v, int lo, int extent) {
    const int d = std::max(1, extent - 1);
    const int num = 200 * (v - lo) + d;
    const int r = num >= 0 ? num / (2 * d) : -((-num + 2 * d - 1) / (2 * d));
    return std::clamp(r, 0, 100);
  };
  return {pct(p.x, box.x0, box.width()), pct(p.y, box.y0, box.height())};
}

std::vector<JoinMode> learn_joining_point(const std::vector<JunctionSample>& samples, double closeness) {
  if (samples.empty()) throw Error("learn_joining_point: no samples");
  std::map<std::array<int, 2>, int> counts;
  for (const auto& s : samples) ++counts[percent_in(s.bbox, s.point)];
  std::vector<std::pair<std::array<int, 2>, int>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  const double n = static_cast<double>(samples.size());
  std::vector<JoinMode> out{{ranked[0].first[0], ranked[0].first[1], ranked[0].second / n}};
  if (ranked.size() > 1 && ranked[0].second - ranked[1].second <= closeness * n + 1e-9)
    out.push_back({ranked[1].first[0], ranked[1].first[1], ranked[1].second / n});
  return out;
}

namespace {

template <typename T>
T mode_of(const std::vector<T>& values) {
  std::map<T, int> counts;
  for (const auto& v : values) ++counts[v];
  T best = counts.begin()->first;
  int best_n = 0;
  for (const auto& [v, n] : counts)
    if (n > best_n) best = v, best_n = n;
  return best;
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double distance_to_box(Point p, const Rect& r) {
  const int dx = std::max({r.x0 - p.x, 0, p.x - r.x1});
  const int dy = std::max({r.y0 - p.y, 0, p.y - r.y1});
  return std::hypot(dx, dy);
}

Point box_center(const Rect& r) { return {(r.x0 + r.x1) / 2, (r.y0 + r.y1) / 2}; }

// 0 = A, 1 = B, 2 = interior.
int endpoint_label(const SampleStroke& s, Point j, double tol) {
  const double da = distance(s.a, j), db = distance(s.b, j);
  if (std::min(da, db) > tol) return 2;
  return da <= db ? 0 : 1;
}

std::array<int, 2> quantize5(std::array<int, 2> p) {
  return {std::clamp((p[0] + 2) / 5 * 5, 0, 100), std::clamp((p[1] + 2) / 5 * 5, 0, 100)};
}

}  // namespace

CompositionRule derive_rule(const std::vector<CharacterSample>& input, char32_t codepoint, double closeness) {
  if (input.empty()) throw Error("derive_rule: no samples");
  std::vector<CharacterSample> samples = input;
  for (auto& s : samples) {
    std::sort(s.strokes.begin(), s.strokes.end(), [](const SampleStroke& a, const SampleStroke& b) {
      return std::tie(a.stroke_class, a.bbox.y0, a.bbox.x0, a.bbox.y1, a.bbox.x1) <
             std::tie(b.stroke_class, b.bbox.y0, b.bbox.x0, b.bbox.y1, b.bbox.x1);
    });
  }
  // Sample order must not matter: sort samples by a canonical key too.
  std::sort(samples.begin(), samples.end(), [](const CharacterSample& a, const CharacterSample& b) {
    auto key = [](const CharacterSample& s) {
      std::vector<int> k{s.bbox.x0, s.bbox.y0, s.bbox.x1, s.bbox.y1};
      for (const auto& st : s.strokes) k.insert(k.end(), {st.stroke_class, st.bbox.x0, st.bbox.y0, st.bbox.x1, st.bbox.y1});
      for (const auto& j : s.junctions) k.insert(k.end(), {j.x, j.y});
      return k;
    };
    return key(a) < key(b);
  });
  const std::size_t m = samples[0].strokes.size();
  if (m == 0) throw Error("derive_rule: sample without strokes");
  auto classes_of = [](const CharacterSample& s) {
    std::vector<int> c;
    for (const auto& st : s.strokes) c.push_back(st.stroke_class);
    return c;
  };
  for (const auto& s : samples)
    if (classes_of(s) != classes_of(samples[0])) throw Error("ambiguous decomposition for " + codepoint_label(codepoint));

  std::map<int, std::vector<int>> lengths;
  for (const auto& s : samples)
    for (const auto& st : s.strokes) lengths[st.stroke_class].push_back(std::max(st.bbox.width(), st.bbox.height()));
  std::map<int, int> median;
  for (auto& [c, v] : lengths) {
    std::sort(v.begin(), v.end());
    median[c] = std::max(1, v[(v.size() - 1) / 2]);
  }

  Variant base(m);
  struct PercentJoin {
    std::size_t placement;
    bool this_side;
    std::vector<JoinMode> modes;
  };
  std::optional<PercentJoin> split_join;

  for (std::size_t i = 0; i < m; ++i) {
    StrokePlacement& pl = base[i];
    pl.stroke_class = samples[0].strokes[i].stroke_class;
    for (std::size_t k = 0; k < i; ++k) pl.occurrence += samples[0].strokes[k].stroke_class == pl.stroke_class;

    std::vector<int> sizes;  // quarters
    std::vector<int> aps;
    for (const auto& s : samples) {
      const auto& st = s.strokes[i];
      const double rel = static_cast<double>(std::max(st.bbox.width(), st.bbox.height())) / median[pl.stroke_class];
      sizes.push_back(std::max(1, static_cast<int>(std::lround(rel * 4))));
      aps.push_back(static_cast<int>(st.appearance));
    }
    pl.size = std::min(16, mode_of(sizes)) / 4.0;
    pl.appearance = static_cast<Appearance>(mode_of(aps));

    // Junction evidence per sample: earliest earlier stroke touching a
    // junction that also touches this stroke.
    struct Hit {
      int target;
      Point at;
      double tol;
    };
    std::vector<std::optional<Hit>> hits;
    for (const auto& s : samples) {
      const double tol = std::max(2.0, 0.05 * std::max(s.bbox.width(), s.bbox.height()));
      std::optional<Hit> h;
      for (std::size_t j = 0; j < i && !h; ++j)
        for (const auto& jp : s.junctions)
          if (distance_to_box(jp, s.strokes[i].bbox) <= tol && distance_to_box(jp, s.strokes[j].bbox) <= tol) {
            h = Hit{static_cast<int>(j), jp, tol};
            break;
          }
      hits.push_back(h);
    }
    const auto joined = std::count_if(hits.begin(), hits.end(), [](const auto& h) { return h.has_value(); });

    if (i > 0 && 2 * static_cast<std::size_t>(joined) >= samples.size()) {
      std::vector<int> targets;
      for (const auto& h : hits)
        if (h) targets.push_back(h->target);
      JoinSpec js;
      js.target = mode_of(targets);
      std::vector<int> this_labels, at_labels;
      std::vector<JunctionSample> this_pts, at_pts;
      for (std::size_t s = 0; s < samples.size(); ++s) {
        if (!hits[s] || hits[s]->target != js.target) continue;
        const auto& me = samples[s].strokes[i];
        const auto& tg = samples[s].strokes[js.target];
        this_labels.push_back(endpoint_label(me, hits[s]->at, hits[s]->tol));
        at_labels.push_back(endpoint_label(tg, hits[s]->at, hits[s]->tol));
        this_pts.push_back({hits[s]->at, me.bbox});
        at_pts.push_back({hits[s]->at, tg.bbox});
      }
      auto resolve = [&](const std::vector<int>& labels, const std::vector<JunctionSample>& pts, bool this_side) {
        const int l = mode_of(labels);
        if (l == 0) return PointRef{PointRef::Kind::A, 0, 0};
        if (l == 1) return PointRef{PointRef::Kind::B, 0, 0};
        const auto modes = learn_joining_point(pts, closeness);
        if (modes.size() > 1 && !split_join) split_join = PercentJoin{i, this_side, modes};
        return PointRef{PointRef::Kind::Percent, modes[0].px, modes[0].py};
      };
      js.this_point = resolve(this_labels, this_pts, true);
      js.target_point = resolve(at_labels, at_pts, false);
      pl.join = js;
    } else {
      std::vector<std::array<int, 2>> pos, ds;
      for (const auto& s : samples) {
        const auto& st = s.strokes[i];
        pos.push_back(quantize5(percent_in(s.bbox, box_center(st.bbox))));
        if (i > 0) {
          const auto& prev = s.strokes[i - 1].bbox;
          const double w = std::max(1, s.bbox.width()), h = std::max(1, s.bbox.height());
          auto gap = [](int lo, int hi, int plo, int phi, double extent) {
            if (lo > phi) return std::max(1, static_cast<int>(std::lround(100.0 * (lo - phi - 1) / extent)));
            if (hi < plo) return std::min(-1, -static_cast<int>(std::lround(100.0 * (plo - hi - 1) / extent)));
            return 0;
          };
          ds.push_back({gap(st.bbox.x0, st.bbox.x1, prev.x0, prev.x1, w), gap(st.bbox.y0, st.bbox.y1, prev.y0, prev.y1, h)});
        }
      }
      pl.position = mode_of(pos);
      if (i > 0) pl.distance = mode_of(ds);
    }
  }

  CompositionRule rule;
  rule.codepoint = codepoint;
  rule.variants.push_back(base);
  if (split_join) {
    Variant alt = base;
    auto& js = *alt[split_join->placement].join;
    PointRef& ref = split_join->this_side ? js.this_point : js.target_point;
    ref.px = split_join->modes[1].px;
    ref.py = split_join->modes[1].py;
    rule.variants.push_back(alt);
  }
  validate_rule(rule);
  return rule;
}

}  // namespace gujfont
