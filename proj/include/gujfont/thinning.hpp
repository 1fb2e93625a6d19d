#pragma once

#include <array>
#include <vector>

#include "gujfont/raster.hpp"

namespace gujfont {

// Strictly unit-width skeleton: every ink pixel has at most two ink neighbours.
struct Skeleton {
  BinaryRaster raster;
};

struct ThinTemplate {
  int id;     // 1..12
  Mask3 mask; // on cells are kept, everything else in the window is cleared
};

// The 12 replacement templates used by adaptive_thin: four straight lines
// through the centre followed by eight 135-degree elbows.
const std::array<ThinTemplate, 12>& thin_templates();

// Yokoi 8-connectivity number of the pixel; 1 means removing it keeps the
// local topology intact.
int connectivity_number(const BinaryRaster& img, int x, int y);

// Two-subiteration Zhang-Suen. A component that one parallel pass would
// erase or split is instead thinned pixel by pixel with simple-point removal,
// so component counts never change.
BinaryRaster zhang_suen(const BinaryRaster& img);

// Sequential simple-point removal that turns the 4-connected staircases left
// by Zhang-Suen into 8-connected curves. Junction pixels survive.
BinaryRaster clean_skeleton(const BinaryRaster& img);

// Template replacement until every 3x3 window centred on ink holds fewer than
// four ink pixels. Pieces cut off from the window centre are deleted with it.
Skeleton adaptive_thin(const BinaryRaster& img);

bool is_unit_width(const BinaryRaster& img);

}  // namespace gujfont
