// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#ifndef RAWBAND_PATCH_HPP
#define RAWBAND_PATCH_HPP

#include <filesystem>
#include <vector>

#include "rawband/hotspot.hpp"
#include "rawband/types.hpp"

namespace rawband {

struct PatchGridSpec {
  int size = 256;
  double overlap = 0.25;

  // round(size * (1 - overlap)), half away from zero.
  int stride() const;
  // size >= 1, overlap in [0, 1), stride >= 1.
  void validate() const;
};

// Square windows covering the raster: origins advance by the stride; when the
// last stride-aligned window stops short of the edge, one extra window is
// snapped flush to it.  Windows are unique, lie fully inside the raster,
// jointly cover it, and come back in row-major order of their origins.
// Throws DataError when the patch does not fit the raster.
std::vector<Window> patch_grid(Index rows, Index cols,
                               const PatchGridSpec& spec);

struct PatchLabel {
  Window window;
  bool event = false;
};

// A patch is an event iff the area of (union of boxes) clipped to the patch
// exceeds `min_pixels`.
std::vector<PatchLabel> label_patches(const std::vector<Window>& windows,
                                      const std::vector<PixelBox>& boxes,
                                      int min_pixels = 5);

struct DatasetStats {
  long long events = 0;
  long long nonevents = 0;
  double proportion = 0.0;  // events / (events + nonevents)
};

DatasetStats dataset_stats(const std::vector<PatchLabel>& labels);

// Label text: one `row0 col0 label` line per window, label in
// {event, nonevent}.
void write_labels(const std::filesystem::path& file,
                  const std::vector<PatchLabel>& labels);

// Stats text: `events`, `nonevents` and `proportion` key=value lines.
void write_stats(const std::filesystem::path& file, const DatasetStats& stats);

}  // namespace rawband

#endif  // RAWBAND_PATCH_HPP
