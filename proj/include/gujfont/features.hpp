#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "gujfont/raster.hpp"
#include "gujfont/strokes.hpp"

namespace gujfont {

enum FeatureCode : std::uint8_t {
  kBackground = 0,
  kHorizontal = 1,
  kVertical = 2,
  kRightSlant = 3,  // SW-NE
  kLeftSlant = 4,   // NW-SE
  kLeftFlat = 5,
  kLeftDeep = 6,
  kRightFlat = 7,
  kRightDeep = 8,
  kEndpoint = 10,
};

inline constexpr int kBlocks = 5;
inline constexpr int kBlockSize = 6;
inline constexpr int kFeatureLength = kBlocks * kBlocks;
inline constexpr int kRowLength = kFeatureLength + 1;

struct FeatureTemplate {
  Mask3 mask;
  FeatureCode code;
};

// 16 templates in priority order: 8 endpoint, 4 line, 4 curve.
const std::vector<FeatureTemplate>& feature_templates();

struct CodeMatrix {
  std::array<std::uint8_t, kStrokeSize * kStrokeSize> codes{};

  std::uint8_t at(int x, int y) const { return codes[y * kStrokeSize + x]; }
  void set(int x, int y, std::uint8_t c) { codes[y * kStrokeSize + x] = c; }
  friend bool operator==(const CodeMatrix&, const CodeMatrix&) = default;
};

using FeatureVector = std::array<std::uint8_t, kFeatureLength>;
using DatasetRow = std::array<int, kRowLength>;

bool is_feature_code(int v);

// First template matching the pixel's neighbourhood, if any.
std::optional<FeatureCode> match_code(const BinaryRaster& img, int x, int y);

CodeMatrix code_matrix(const BinaryRaster& stroke30);
FeatureVector feature_vector(const CodeMatrix& cm);
FeatureVector stroke_features(const BinaryRaster& stroke30);
DatasetRow dataset_row(const Stroke& stroke);

std::string dataset_csv(const std::vector<DatasetRow>& rows);
std::vector<DatasetRow> parse_dataset_csv(const std::string& text);

}  // namespace gujfont
