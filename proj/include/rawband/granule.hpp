// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#ifndef RAWBAND_GRANULE_HPP
#define RAWBAND_GRANULE_HPP

#include <array>
#include <map>
#include <string>

#include "rawband/bands.hpp"
#include "rawband/types.hpp"

namespace rawband {

// A granule is one detector acquisition: a handful of band rasters plus the
// acquisition geometry.  Corner indices follow the scan:
//   0 = first-scanned west, 1 = first-scanned east,
//   2 = last-scanned west,  3 = last-scanned east.
// The footprint ring is therefore 0, 1, 3, 2.
struct GranuleMetadata {
  Satellite satellite = Satellite::S2A;
  int detector = 1;
  std::string sensing_time;  // ISO-8601 UTC, kept verbatim
  std::array<GeoPoint, 4> corners{};
};

// Throws DataError when the detector index, coordinate ranges or corner ring
// are invalid (the ring must be a simple quadrilateral).
void validate_metadata(const GranuleMetadata& meta);

struct Granule {
  GranuleMetadata meta;
  std::map<Band, RawImage> bands;
};

// Dimension coherence: bands of equal resolution must match exactly; across
// resolutions, dimensions must agree with the resolution ratio within one
// pixel.  Throws DataError otherwise.
void validate_granule(const Granule& g);

struct GridShape {
  Index rows = 0;
  Index cols = 0;
};

// Dimensions of the acquisition expressed on the 10 m reference band grid,
// derived from the finest-resolution band present.
GridShape reference_grid_shape(const Granule& g);

}  // namespace rawband

#endif  // RAWBAND_GRANULE_HPP
