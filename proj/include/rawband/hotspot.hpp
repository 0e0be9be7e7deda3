// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).
//
// Thermal anomaly screening on short-wave infrared reflectance.  The test is
// a fixed cascade of band ratios and absolute thresholds; a pixel is hot when
// any branch fires.  Ratio comparisons against a zero denominator evaluate
// false so dark pixels can never pass a ratio test by division blowup.

#ifndef RAWBAND_HOTSPOT_HPP
#define RAWBAND_HOTSPOT_HPP

#include <filesystem>
#include <vector>

#include "rawband/l1c.hpp"
#include "rawband/types.hpp"

namespace rawband {

// Per-pixel hot mask over the reflectance stack.  With r = (r8A, r11, r12):
//   alpha = r12/r11 >= 1.4  and  r12/r8A >= 1.2  and  r12 >= 0.15
//   beta  = r11/r8A >= 2    and  r11 >= 0.5      and  r12 >= 0.5
//   SR    = 3x3 dilation of (alpha or beta)
//   S     = (r12 >= 1.2 and r8A <= 1)  or  (r11 >= 1.5 and r8A >= 1)
//   gamma = r12 >= 1 and r11 >= 1 and r8A >= 0.5 and SR
//   hot   = alpha or beta or S or gamma
// NaN reflectance anywhere -> DataError.
MaskImage compute_hotmap(const ReflectanceStack& stack);

// 3x3 dilation including the center; the window clamps at the edges.
MaskImage surround(const MaskImage& mask);

struct PixelBox {
  Index row0 = 0;
  Index col0 = 0;
  Index rows = 0;
  Index cols = 0;
  Index active_pixels = 0;

  friend bool operator==(const PixelBox& a, const PixelBox& b) {
    return a.row0 == b.row0 && a.col0 == b.col0 && a.rows == b.rows &&
           a.cols == b.cols && a.active_pixels == b.active_pixels;
  }
};

// Tight bounding boxes of connected hot clusters, dropping clusters smaller
// than `min_cluster` pixels.  Connectivity is 8 (default) or 4.  Boxes come
// back ordered by (row0, col0), then size.
std::vector<PixelBox> extract_event_boxes(const MaskImage& hotmap,
                                          int min_cluster = 9,
                                          int connectivity = 8);

// Box text: one `row0 col0 rows cols active_pixels` line per box, '#' starts
// a comment.
void write_boxes(const std::filesystem::path& file,
                 const std::vector<PixelBox>& boxes);
std::vector<PixelBox> read_boxes(const std::filesystem::path& file);

}  // namespace rawband

#endif  // RAWBAND_HOTSPOT_HPP
