#include "gujfont/features.hpp"

#include <sstream>
#include <string>

namespace gujfont {

const std::vector<FeatureTemplate>& feature_templates() {
  static const std::vector<FeatureTemplate> bank = [] {
    std::vector<FeatureTemplate> t;
    for (const auto& m : endpoint_masks()) t.push_back({m, kEndpoint});
    t.push_back({Mask3::parse("000 111 000"), kHorizontal});
    t.push_back({Mask3::parse("010 010 010"), kVertical});
    t.push_back({Mask3::parse("001 010 100"), kRightSlant});
    t.push_back({Mask3::parse("100 010 001"), kLeftSlant});
    t.push_back({Mask3::parse("010 010 100"), kLeftFlat});
    t.push_back({Mask3::parse("100 010 100"), kLeftDeep});
    t.push_back({Mask3::parse("010 010 001"), kRightFlat});
    t.push_back({Mask3::parse("001 010 001"), kRightDeep});
    return t;
  }();
  return bank;
}

bool is_feature_code(int v) { return (v >= 0 && v <= 8) || v == 10; }

std::optional<FeatureCode> match_code(const BinaryRaster& img, int x, int y) {
  if (!img.ink(x, y)) return std::nullopt;
  for (const auto& t : feature_templates())
    if (t.mask.matches(img, x, y)) return t.code;
  return std::nullopt;
}

CodeMatrix code_matrix(const BinaryRaster& stroke30) {
  if (stroke30.width() != kStrokeSize || stroke30.height() != kStrokeSize) {
    throw Error("code_matrix expects a 30x30 stroke");
  }
  CodeMatrix cm;
  int endpoints = 0;
  std::vector<Point> frontier;
  for (const auto& p : stroke30.ink_points()) {
    if (auto c = match_code(stroke30, p.x, p.y)) {
      cm.set(p.x, p.y, *c);
      // Endpoint codes never spread: at most two cells may carry them.
      if (*c == kEndpoint) ++endpoints;
      else frontier.push_back(p);
    }
  }
  if (endpoints > 2) throw Error("not a stroke: " + std::to_string(endpoints) + " endpoints");

  // Level-synchronous spread so equidistant sources compete fairly; the
  // lower code wins a tie.
  while (!frontier.empty()) {
    std::vector<Point> next;
    CodeMatrix staged = cm;
    for (const auto& p : frontier) {
      for (const auto& d : kRing) {
        const int nx = p.x + d.x, ny = p.y + d.y;
        if (!stroke30.ink(nx, ny) || cm.at(nx, ny) != 0) continue;
        const std::uint8_t c = cm.at(p.x, p.y);
        if (staged.at(nx, ny) == 0) {
          staged.set(nx, ny, c);
          next.push_back({nx, ny});
        } else if (c < staged.at(nx, ny)) {
          staged.set(nx, ny, c);
        }
      }
    }
    cm = staged;
    frontier = std::move(next);
  }
  return cm;
}

FeatureVector feature_vector(const CodeMatrix& cm) {
  FeatureVector v{};
  for (int by = 0; by < kBlocks; ++by) {
    for (int bx = 0; bx < kBlocks; ++bx) {
      std::array<int, 11> hist{};
      for (int y = by * kBlockSize; y < (by + 1) * kBlockSize; ++y)
        for (int x = bx * kBlockSize; x < (bx + 1) * kBlockSize; ++x) ++hist[cm.at(x, y)];
      std::uint8_t out = 0;
      int nonzero = 0;
      for (int c = 1; c <= 10; ++c) nonzero += hist[c];
      if (hist[kEndpoint] > 0) {
        out = kEndpoint;
      } else if (nonzero >= 2) {
        int best = 0;
        for (int c = 1; c <= 8; ++c)
          if (hist[c] > best) best = hist[c], out = static_cast<std::uint8_t>(c);
      }
      v[by * kBlocks + bx] = out;
    }
  }
  return v;
}

FeatureVector stroke_features(const BinaryRaster& stroke30) { return feature_vector(code_matrix(stroke30)); }

DatasetRow dataset_row(const Stroke& stroke) {
  if (!stroke.class_label) throw Error("missing label");
  const FeatureVector v = stroke_features(stroke.normalized);
  DatasetRow row{};
  for (int i = 0; i < kFeatureLength; ++i) row[i] = v[i];
  row[kFeatureLength] = *stroke.class_label;
  return row;
}

std::string dataset_csv(const std::vector<DatasetRow>& rows) {
  std::string out;
  for (const auto& r : rows) {
    for (int i = 0; i < kRowLength; ++i) {
      if (i) out += ',';
      out += std::to_string(r[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<DatasetRow> parse_dataset_csv(const std::string& text) {
  std::vector<DatasetRow> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    DatasetRow row{};
    std::istringstream fields(line);
    std::string f;
    int i = 0;
    while (std::getline(fields, f, ',')) {
      if (i >= kRowLength) throw Error("dataset line " + std::to_string(line_no) + ": too many columns");
      try {
        std::size_t used = 0;
        row[i] = std::stoi(f, &used);
        if (used != f.size()) throw std::invalid_argument(f);
      } catch (const std::exception&) {
        throw Error("dataset line " + std::to_string(line_no) + ": bad value '" + f + "'");
      }
      ++i;
    }
    if (i != kRowLength) throw Error("dataset line " + std::to_string(line_no) + ": expected 26 columns");
    for (int k = 0; k < kFeatureLength; ++k)
      if (!is_feature_code(row[k])) throw Error("dataset line " + std::to_string(line_no) + ": bad feature code");
    if (row[kFeatureLength] < 1 || row[kFeatureLength] > 6)
      throw Error("dataset line " + std::to_string(line_no) + ": label must be 1-6");
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gujfont
