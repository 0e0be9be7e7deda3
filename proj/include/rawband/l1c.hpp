// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).
//
// Minimal handling of orthorectified product tiles: enough to mosaic the
// bands needed for event annotation, cut the mosaic down to an acquisition
// footprint and bring the planes onto a common grid as reflectance.
//
// A tile bundle is a directory with metadata.txt (tile_id, quantification,
// geotransform=a,b,c,d,e,f) and one B<ID>.rawb per band.  The geotransform
// maps fractional pixel (col, row) to (lon, lat):
//   lon = a + b*col + c*row,  lat = d + e*col + f*row.

#ifndef RAWBAND_L1C_HPP
#define RAWBAND_L1C_HPP

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rawband/bands.hpp"
#include "rawband/georef.hpp"
#include "rawband/types.hpp"

namespace rawband {

struct GeoTransform {
  double a = 0, b = 1, c = 0, d = 0, e = 0, f = 1;

  std::pair<double, double> apply(double col, double row) const {
    return {a + b * col + c * row, d + e * col + f * row};
  }
  // (col, row) of a geodetic point; throws DataError when the linear part is
  // singular.
  std::pair<double, double> inverse_apply(double lon, double lat) const;

  friend bool operator==(const GeoTransform& x, const GeoTransform& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d &&
           x.e == y.e && x.f == y.f;
  }
};

struct L1CTile {
  std::string tile_id;
  double quantification = 10000.0;
  GeoTransform gt;
  std::map<Band, RawImage> bands;
};

L1CTile load_tile_bundle(const std::filesystem::path& dir);
void save_tile_bundle(const L1CTile& tile, const std::filesystem::path& dir);

// One band raster pinned to the ground by its geotransform.
struct MosaicPlane {
  RawImage dn;
  GeoTransform gt;
};

// Joins the given band across tiles on the minimal covering grid.  Tiles must
// share the linear geotransform part and sit on integer pixel offsets of one
// another (within 1e-6 px).  Where tiles overlap, the first tile in ascending
// tile_id order with a non-nodata sample (nodata = 0) wins; uncovered cells
// stay nodata.  The output is independent of input order.
MosaicPlane mosaic_tiles(const std::vector<L1CTile>& tiles, Band band);

// Cuts the plane down to the geodetic bounding box of the footprint corners,
// pixel bounds obtained by floor/ceil of the inverse geotransform.  Throws
// DataError listing both extents when they do not overlap.
MosaicPlane crop_to_footprint(const MosaicPlane& plane,
                              const BandFootprint& footprint);

enum class ResampleMethod { block_mean, nearest };

struct BandPlane {
  Band band = Band::B8A;
  MosaicPlane plane;
  double resolution_m = 0.0;
};

// Reflectance planes for event annotation, on the coarsest input grid.
struct ReflectanceStack {
  Plane r8a, r11, r12;
  GeoTransform gt;
  double resolution_m = 0.0;
};

// Converts digital numbers to reflectance (dn / quantification) and brings
// all planes to the coarsest resolution.  block_mean averages reflectance
// over ratio x ratio blocks (the default); nearest picks the block-center
// sample.  Resolution ratios must be integral and dimensions divisible by
// them.  Expects exactly the B8A, B11 and B12 planes of a common area.
ReflectanceStack resample_to_coarsest(const std::vector<BandPlane>& planes,
                                      double quantification,
                                      ResampleMethod method);

}  // namespace rawband

#endif  // RAWBAND_L1C_HPP
