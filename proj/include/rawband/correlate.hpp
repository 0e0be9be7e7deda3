// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#ifndef RAWBAND_CORRELATE_HPP
#define RAWBAND_CORRELATE_HPP

#include <Eigen/Core>

#include <vector>

#include "rawband/bands.hpp"
#include "rawband/shift_table.hpp"
#include "rawband/types.hpp"

namespace rawband {

enum class CorrelationBackend {
  // Pick per problem size.
  automatic,
  // Per-shift block products; exact integer arithmetic in double.
  direct,
  // FFT cross-correlation for the numerator, integral images for the
  // normalization.  Same argmax as `direct` up to floating-point rounding of
  // the correlation scores.
  fft,
};

// Integer translation t maximizing the normalized cross-correlation between
// b and a translated by t, searched over [-max_shift, max_shift]^2:
// conceptually b ~= translate_image(a, t) on the overlap.  Overlap statistics
// are computed per shift.  Score ties are broken by smallest squared
// magnitude, then ascending along, then ascending across component.
//
// Preconditions: equal dimensions, 1 <= max_shift < min(dimension)/2.
// A raster with zero variance has no texture to lock onto -> DataError.
Eigen::Vector2i estimate_translation(
    const RawImage& a, const RawImage& b, int max_shift,
    CorrelationBackend backend = CorrelationBackend::automatic);

// One calibration observation: rasters of two acquisition-adjacent bands
// covering the same scene on a common pixel grid.
struct BandPairSample {
  Band first = Band::B02;
  Band second = Band::B08;
  RawImage a;  // raster of `first`
  RawImage b;  // raster of `second`
};

struct EstimationOptions {
  // Tile edge for the contrast equalization pre-pass; 0 = min(dims)/8,
  // floored at 2 (an 8x8 tile grid).
  int clahe_tile = 0;
  double clahe_clip = 2.0;
  // Correlation search radius; 0 = min(dims)/2 - 1 capped at 192.
  int max_shift = 0;
  CorrelationBackend backend = CorrelationBackend::automatic;
};

// Fits adjacent-pair shift coefficients from repeated observations.  Per
// sample: equalize contrast, then correlation search for the translation
// taking the later band onto the earlier one (the correction the
// coregistration stage applies, in pixels of the sample grid).  Per pair and
// per component: estimates farther than two population standard deviations
// from the mean are discarded, the rest averaged; kept counts are recorded on
// the coefficient.  The reduction is order-independent (estimates are sorted
// before trimming).
ShiftCoefficientSet estimate_shift_coefficients(
    const std::vector<BandPairSample>& samples,
    const EstimationOptions& opts = {});

}  // namespace rawband

#endif  // RAWBAND_CORRELATE_HPP
