// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#ifndef RAWBAND_COREG_HPP
#define RAWBAND_COREG_HPP

#include <Eigen/Core>

#include <map>
#include <vector>

#include "rawband/granule.hpp"
#include "rawband/shift_table.hpp"
#include "rawband/types.hpp"

namespace rawband {

enum class FillPolicy {
  // Translated bands keep their dimensions; vacated pixels become zero.
  zero_fill,
  // All bands (including the reference) are cropped to the region where every
  // translated band carries source data.
  crop_to_valid,
};

struct CoregResult {
  Granule granule;
  // Integer displacement applied to each requested band (zero for the
  // reference, which is the first entry of the band set).
  std::map<Band, Eigen::Vector2i> applied;
  // Crop window per band, in that band's pre-crop pixel grid.  Full frames
  // under FillPolicy::zero_fill.
  std::map<Band, Window> windows;
};

// Registers every band of `band_set` onto the first entry by rigid integer
// translation.  The displacement is the composed correction taking the band
// onto the reference, rounded half away from zero in the band's own pixel
// grid.  Throws DataError when a band is missing from the granule, a chain
// coefficient is absent, or a shift meets/exceeds a raster dimension.
CoregResult apply_coarse_coregistration(const Granule& g,
                                        const std::vector<Band>& band_set,
                                        const ShiftCoefficientSet& coeffs,
                                        FillPolicy fill);

}  // namespace rawband

#endif  // RAWBAND_COREG_HPP
