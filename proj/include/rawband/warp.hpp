// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).
//
// Affine transfer of annotation rectangles between pixel frames (e.g. from an
// orthorectified crop back onto the raw detector grid).  Rectangles stay
// real-valued through the warp so that a warp followed by its inverse is a
// clean round trip; snapping to integer pixels happens once, at the end of
// the pipeline.

#ifndef RAWBAND_WARP_HPP
#define RAWBAND_WARP_HPP

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rawband/granule.hpp"
#include "rawband/hotspot.hpp"
#include "rawband/types.hpp"

namespace rawband {

// q = linear * p + offset on (row, col) points.
struct AffineTransform {
  Eigen::Matrix2d linear = Eigen::Matrix2d::Identity();
  Eigen::Vector2d offset = Eigen::Vector2d::Zero();

  Eigen::Vector2d apply(const Eigen::Vector2d& p) const {
    return linear * p + offset;
  }
};

// Exact fit through three correspondences.  Collinear sources span no area
// and are rejected (DataError).
AffineTransform fit_affine(const std::array<Eigen::Vector2d, 3>& src,
                           const std::array<Eigen::Vector2d, 3>& dst);

// Throws DataError when the linear part is singular.
AffineTransform invert_affine(const AffineTransform& t);

// Real-valued rectangle in (row, col) space, extent [row0, row0+rows) x
// [col0, col0+cols).
struct RectD {
  double row0 = 0, col0 = 0, rows = 0, cols = 0;
};

struct WarpOptions {
  // Outward expansion of each warped rectangle, per side, in pixels.
  double buffer = 0.0;
  // Additive correction applied after buffering (row, col).
  Eigen::Vector2d manual_offset = Eigen::Vector2d::Zero();
  // When set, rectangles are clipped to [0, rows) x [0, cols); rectangles
  // falling entirely outside are dropped and reported.
  std::optional<GridShape> clip;
};

struct DroppedBox {
  std::size_t index;  // position in the input list
  std::string reason;
};

struct WarpOutcome {
  std::vector<RectD> boxes;
  std::vector<std::size_t> kept;  // input index per output box
  std::vector<DroppedBox> dropped;
};

// Maps each rectangle's four corners through `t`, takes the axis-aligned
// hull, expands by the buffer, applies the manual offset and finally clips.
WarpOutcome warp_boxes(const AffineTransform& t, const std::vector<RectD>& boxes,
                       const WarpOptions& opts = {});

// floor/ceil snap of a real-valued rectangle to pixels.
PixelBox snap_to_pixels(const RectD& r, Index active_pixels);

// Text form: one line, six reals (linear row-major, then offset).
void write_transform(const std::filesystem::path& file,
                     const AffineTransform& t);
AffineTransform read_transform(const std::filesystem::path& file);

}  // namespace rawband

#endif  // RAWBAND_WARP_HPP
