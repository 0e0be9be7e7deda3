// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#ifndef RAWBAND_BANDS_HPP
#define RAWBAND_BANDS_HPP

#include <array>
#include <string_view>

#include "rawband/types.hpp"

namespace rawband {

// The thirteen spectral bands of the instrument, in spectral naming order.
enum class Band : int {
  B01,
  B02,
  B03,
  B04,
  B05,
  B06,
  B07,
  B08,
  B8A,
  B09,
  B10,
  B11,
  B12,
};

inline constexpr int kBandCount = 13;

inline constexpr std::array<Band, kBandCount> kAllBands = {
    Band::B01, Band::B02, Band::B03, Band::B04, Band::B05, Band::B06,
    Band::B07, Band::B08, Band::B8A, Band::B09, Band::B10, Band::B11,
    Band::B12};

// Detector acquisition order.  Adjacent entries are imaged closest in time,
// which is why inter-band displacement is calibrated pairwise along this
// sequence and composed for arbitrary band couples.
inline constexpr std::array<Band, kBandCount> kAcquisitionOrder = {
    Band::B02, Band::B08, Band::B03, Band::B10, Band::B04, Band::B05,
    Band::B11, Band::B06, Band::B07, Band::B8A, Band::B12, Band::B01,
    Band::B09};

constexpr double band_resolution_m(Band b) {
  switch (b) {
    case Band::B02:
    case Band::B03:
    case Band::B04:
    case Band::B08:
      return 10.0;
    case Band::B05:
    case Band::B06:
    case Band::B07:
    case Band::B8A:
    case Band::B11:
    case Band::B12:
      return 20.0;
    case Band::B01:
    case Band::B09:
    case Band::B10:
      return 60.0;
  }
  return 0.0;  // unreachable for valid enum values
}

constexpr std::string_view band_name(Band b) {
  switch (b) {
    case Band::B01: return "B01";
    case Band::B02: return "B02";
    case Band::B03: return "B03";
    case Band::B04: return "B04";
    case Band::B05: return "B05";
    case Band::B06: return "B06";
    case Band::B07: return "B07";
    case Band::B08: return "B08";
    case Band::B8A: return "B8A";
    case Band::B09: return "B09";
    case Band::B10: return "B10";
    case Band::B11: return "B11";
    case Band::B12: return "B12";
  }
  return "";
}

// Position of `b` in kAcquisitionOrder.
constexpr int acquisition_index(Band b) {
  for (int i = 0; i < kBandCount; ++i) {
    if (kAcquisitionOrder[static_cast<std::size_t>(i)] == b) return i;
  }
  return -1;  // unreachable for valid enum values
}

Band band_from_name(std::string_view name);

enum class Satellite : int { S2A, S2B };

constexpr std::string_view satellite_name(Satellite s) {
  return s == Satellite::S2A ? "S2A" : "S2B";
}

Satellite satellite_from_name(std::string_view name);

}  // namespace rawband

#endif  // RAWBAND_BANDS_HPP
