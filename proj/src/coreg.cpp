// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#include "rawband/coreg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rawband {

namespace {

Eigen::Vector2i round_half_away(const ShiftVector& s) {
  return {static_cast<int>(std::llround(s.along)),
          static_cast<int>(std::llround(s.across))};
}

}  // namespace

CoregResult apply_coarse_coregistration(const Granule& g,
                                        const std::vector<Band>& band_set,
                                        const ShiftCoefficientSet& coeffs,
                                        FillPolicy fill) {
  if (band_set.empty()) {
    throw std::invalid_argument("band set must name at least the reference band");
  }
  for (Band b : band_set) {
    if (!g.bands.count(b)) {
      throw DataError("missing-band", "granule has no raster for band " +
                                          std::string(band_name(b)));
    }
  }
  const Band ref = band_set.front();

  CoregResult result;
  result.granule.meta = g.meta;

  for (Band b : band_set) {
    const RawImage& src = g.bands.at(b);
    Eigen::Vector2i d(0, 0);
    if (b != ref) {
      d = round_half_away(compose_shift(coeffs, b, ref));
    }
    result.applied[b] = d;
    result.granule.bands[b] =
        (d.x() == 0 && d.y() == 0) ? src
                                   : translate_image(src, d.x(), d.y());
    result.windows[b] =
        Window{0, 0, src.rows(), src.cols()};
  }

  if (fill == FillPolicy::crop_to_valid) {
    // Intersect the per-band valid regions on the reference pixel grid, then
    // crop each band to the inner integer window of the intersection on its
    // own grid (conservative rounding, exact for equal-resolution sets).
    const double res_ref = band_resolution_m(ref);
    double r0 = 0.0, c0 = 0.0;
    double r1 = 1e18, c1 = 1e18;
    for (Band b : band_set) {
      const RawImage& src = g.bands.at(b);
      const Eigen::Vector2i d = result.applied.at(b);
      const Window v = valid_region_after_translation(src.rows(), src.cols(),
                                                      d.x(), d.y());
      const double scale = band_resolution_m(b) / res_ref;
      r0 = std::max(r0, static_cast<double>(v.row0) * scale);
      c0 = std::max(c0, static_cast<double>(v.col0) * scale);
      r1 = std::min(r1, static_cast<double>(v.row0 + v.rows) * scale);
      c1 = std::min(c1, static_cast<double>(v.col0 + v.cols) * scale);
    }
    for (Band b : band_set) {
      const double scale = band_resolution_m(b) / res_ref;
      Window w;
      w.row0 = static_cast<Index>(std::ceil(r0 / scale - 1e-9));
      w.col0 = static_cast<Index>(std::ceil(c0 / scale - 1e-9));
      const Index rend = static_cast<Index>(std::floor(r1 / scale + 1e-9));
      const Index cend = static_cast<Index>(std::floor(c1 / scale + 1e-9));
      w.rows = std::min(rend, result.granule.bands.at(b).rows()) - w.row0;
      w.cols = std::min(cend, result.granule.bands.at(b).cols()) - w.col0;
      if (w.rows < 1 || w.cols < 1) {
        throw DataError("empty-overlap",
                        "no common valid region after registration for band " +
                            std::string(band_name(b)));
      }
      result.granule.bands.at(b) = crop(result.granule.bands.at(b), w);
      result.windows[b] = w;
    }
  }
  return result;
}

}  // namespace rawband
