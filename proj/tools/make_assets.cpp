// Regenerates the bundled synthetic data under a data/ directory.
#include <cstdio>
#include <filesystem>

#include "gujfont/image_io.hpp"
#include "gujfont/synth.hpp"

using namespace gujfont;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <data-dir>\n", argv[0]);
    return 2;
  }
  const std::filesystem::path root = argv[1];
  try {
    std::filesystem::create_directories(root / "reference_strokes");
    std::filesystem::create_directories(root / "seeds");
    for (int c = 1; c <= 6; ++c)
      write_png(root / "reference_strokes" / ("class_" + std::to_string(c) + ".png"), render_reference(c));
    for (std::size_t i = 0; i < kSeedChars.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "u%04X.png", static_cast<unsigned>(kSeedChars[i]));
      write_png(root / "seeds" / name, scan_like(render_seed_ink(kSeedChars[i]), 1000 + i));
    }
    write_png(root / "seeds" / "sheet.png", render_seed_sheet(2000));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
