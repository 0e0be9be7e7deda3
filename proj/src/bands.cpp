// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#include "rawband/bands.hpp"

#include <string>

namespace rawband {

Band band_from_name(std::string_view name) {
  for (Band b : kAllBands) {
    if (band_name(b) == name) return b;
  }
  throw DataError("unknown-band", "unknown band id '" + std::string(name) + "'");
}

Satellite satellite_from_name(std::string_view name) {
  if (name == "S2A") return Satellite::S2A;
  if (name == "S2B") return Satellite::S2B;
  throw DataError("unknown-satellite",
                  "unknown satellite '" + std::string(name) + "'");
}

}  // namespace rawband
