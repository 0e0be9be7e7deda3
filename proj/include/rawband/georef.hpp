// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).
//
// Coarse per-band geolocation derived from the acquisition corner metadata
// and the systematic inter-band displacement.  No ground control points are
// involved: accuracy is bounded by the displacement model, which is the point
// (it is cheap enough to run on the platform that produced the acquisition).

#ifndef RAWBAND_GEOREF_HPP
#define RAWBAND_GEOREF_HPP

#include <array>
#include <filesystem>
#include <vector>

#include "rawband/granule.hpp"
#include "rawband/shift_table.hpp"
#include "rawband/types.hpp"

namespace rawband {

// Corner geolocation of one band.  pc0/pc1 are the first-scanned west/east
// corners, ac0/ac1 the last-scanned ones; the polygon ring is
// pc0, pc1, ac1, ac0.
struct BandFootprint {
  Band band = Band::B02;
  GeoPoint pc0, pc1, ac0, ac1;

  std::array<GeoPoint, 4> corners() const { return {pc0, pc1, ac0, ac1}; }
};

// First-scanned corner pair of `band`: the granule corners displaced by the
// band's systematic shift relative to the 10 m reference band, converted to
// reference pixels and scaled by the per-axis arc of one reference pixel
// (track arc from corner0->corner2 over ref.rows, scan arc from
// corner0->corner1 over ref.cols).  A zero shift returns the granule corners
// unchanged.
std::array<GeoPoint, 2> compute_band_prior_coords(
    const GranuleMetadata& meta, const ShiftCoefficientSet& coeffs, Band band,
    const GridShape& ref);

struct BandExtent {
  GeoPoint ac0, ac1;
  // Arc swept by the band along the west and east granule edges, per axis.
  GeoPoint delta_west, delta_east;
};

// Last-scanned corners: each prior corner advanced along its granule edge by
// the fraction band_rows / ref.rows of the corner0->corner2 (west) and
// corner1->corner3 (east) arcs.  When the band spans the full acquisition the
// result reproduces the granule corners exactly.
BandExtent compute_band_extent(const GranuleMetadata& meta, Index band_rows,
                               Index ref_rows, const GeoPoint& pc0,
                               const GeoPoint& pc1);

BandFootprint compute_band_footprint(const GranuleMetadata& meta,
                                     const ShiftCoefficientSet& coeffs,
                                     Band band, const GridShape& band_shape,
                                     const GridShape& ref);

struct GeoRefModel {
  BandFootprint footprint;
  Index rows = 0;
  Index cols = 0;
};

// Bilinear interpolation of the footprint corners; fractional pixel indices
// are allowed within [0, rows-1] x [0, cols-1].  Corner pixels map exactly to
// the footprint corners.
GeoPoint georeference_pixel(const GeoRefModel& model, double row, double col);

// Axis-aligned geodetic rectangle centered on `center`: 14 km north and south
// plus east_west_km/2 east and west, on the small-angle spherical model
// (111.32 km per degree of latitude).  Corner order matches granule corners
// (NW, NE, SW, SE).  Centers poleward of 85 degrees are rejected.
std::array<GeoPoint, 4> compute_download_polygon(const GeoPoint& center,
                                                 double east_west_km);

// Footprint polygon text: one line per band,
//   band lat0,lon0 lat1,lon1 lat2,lon2 lat3,lon3
// in corner order pc0 pc1 ac0 ac1.
void write_footprints(const std::filesystem::path& file,
                      const std::vector<BandFootprint>& footprints);
std::vector<BandFootprint> read_footprints(const std::filesystem::path& file);

}  // namespace rawband

#endif  // RAWBAND_GEOREF_HPP
