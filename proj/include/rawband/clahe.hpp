// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#ifndef RAWBAND_CLAHE_HPP
#define RAWBAND_CLAHE_HPP

#include "rawband/types.hpp"

namespace rawband {

// Contrast-limited adaptive histogram equalization over the 16-bit domain.
// `tile` is the tile edge length in pixels (>= 2); `clip_ratio` caps each
// histogram bin at clip_ratio times the uniform bin count, with the excess
// redistributed evenly.  Per-tile mappings are blended bilinearly between
// tile centers and the result is stretched to span [0, 65535].
//
// Rasters smaller than one tile fall back to a single global equalization.
// Constant rasters are returned unchanged (there is no contrast to remap).
// Deterministic: equal inputs give bit-equal outputs.
RawImage equalize_contrast(const RawImage& img, int tile, double clip_ratio);

}  // namespace rawband

#endif  // RAWBAND_CLAHE_HPP
