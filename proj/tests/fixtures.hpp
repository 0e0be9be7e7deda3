// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).
//
// Deterministic synthetic inputs shared by the test binaries: random
// rasters, translated band pairs cut from one big scene, and a small
// end-to-end scene (granule + calibration + orthorectified tile) whose
// geometry is chosen so hand-derived expectations hold.

#ifndef RAWBAND_TESTS_FIXTURES_HPP
#define RAWBAND_TESTS_FIXTURES_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "rawband/bands.hpp"
#include "rawband/correlate.hpp"
#include "rawband/granule.hpp"
#include "rawband/l1c.hpp"
#include "rawband/shift_table.hpp"
#include "rawband/types.hpp"

namespace rawband::fixtures {

inline RawImage random_raster(Index rows, Index cols, std::uint32_t seed,
                              int lo = 0, int hi = 4095) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dist(lo, hi);
  RawImage img(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      img(r, c) = static_cast<std::uint16_t>(dist(rng));
    }
  }
  return img;
}

// Two same-size crops of one larger random scene, the second displaced by
// `d` pixels: the second crop's content is the first's translated by +d,
// with no fill artifacts anywhere.  `margin` must dominate |d|.
struct TranslatedPair {
  RawImage first;
  RawImage second;
};

inline TranslatedPair translated_pair(Index rows, Index cols,
                                      Eigen::Vector2i d, std::uint32_t seed,
                                      Index margin = 64) {
  const RawImage scene =
      random_raster(rows + 2 * margin, cols + 2 * margin, seed);
  TranslatedPair p;
  p.first = scene.block(margin, margin, rows, cols);
  p.second = scene.block(margin + d.x(), margin + d.y(), rows, cols);
  return p;
}

// Flips `frac` of the pixels to 0 or 65535, half and half by coin toss.
inline void salt_pepper(RawImage& img, double frac, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (Index r = 0; r < img.rows(); ++r) {
    for (Index c = 0; c < img.cols(); ++c) {
      if (coin(rng) >= frac) continue;
      img(r, c) = coin(rng) < 0.5 ? 0 : 65535;
    }
  }
}

// Axis-aligned granule corner metadata: a small rectangle in a quiet spot.
inline GranuleMetadata rect_metadata(Satellite sat = Satellite::S2A,
                                     int detector = 1) {
  GranuleMetadata meta;
  meta.satellite = sat;
  meta.detector = detector;
  meta.sensing_time = "2023-07-15T10:30:00Z";
  meta.corners = {GeoPoint{1.00, 5.00}, GeoPoint{1.00, 5.10},
                  GeoPoint{0.90, 5.00}, GeoPoint{0.90, 5.10}};
  return meta;
}

// A coefficient set with every adjacent pair present and zero.
inline void zero_chain(ShiftCoefficientSet& set) {
  for (int k = 0; k + 1 < kBandCount; ++k) {
    set.set(kAcquisitionOrder[static_cast<std::size_t>(k)],
            kAcquisitionOrder[static_cast<std::size_t>(k) + 1],
            Eigen::Vector2d::Zero());
  }
}

// End-to-end scene: a three-band 20 m granule of 220x260 px on a gently
// rotated parallelogram, a zero-shift calibration for its detector and one
// 180x320 north-up tile whose grid contains the granule footprint.  The
// reference band footprint is the first-scanned half of the granule quad
// (220 band rows against a 440-row reference grid).  Band reflectance away
// from any event block is 0.2 (no detector branch fires); an event block
// carries rho12 = 1.5, rho11 = rho8A = 0.5 (the ratio branch fires).
enum class SceneEvent { none, in_footprint, out_of_footprint, small_cluster };

struct SceneFixture {
  Granule granule;
  ShiftTable table;
  std::vector<L1CTile> tiles;
  std::string granule_id;
};

inline SceneFixture make_scene(SceneEvent ev, bool split_tile = false) {
  SceneFixture fx;
  switch (ev) {
    case SceneEvent::in_footprint: fx.granule_id = "etna0"; break;
    case SceneEvent::out_of_footprint: fx.granule_id = "etna2"; break;
    case SceneEvent::small_cluster: fx.granule_id = "small8"; break;
    case SceneEvent::none: fx.granule_id = "quiet"; break;
  }

  GranuleMetadata meta;
  meta.satellite = Satellite::S2A;
  meta.detector = 5;
  meta.sensing_time = "2023-07-15T10:30:00Z";
  const double th = 4.0 * std::numbers::pi / 180.0;
  const double step = 0.00009;  // degrees per 10 m reference pixel
  const double u_lat = -step * std::cos(th);  // track direction, per px
  const double u_lon = -step * std::sin(th);
  const double v_lat = -step * std::sin(th);  // scan direction, per px
  const double v_lon = step * std::cos(th);
  const GeoPoint c0{0.2, 10.0};
  const GeoPoint c1{c0.lat + 520 * v_lat, c0.lon + 520 * v_lon};
  const GeoPoint c2{c0.lat + 440 * u_lat, c0.lon + 440 * u_lon};
  const GeoPoint c3{c2.lat + 520 * v_lat, c2.lon + 520 * v_lon};
  meta.corners = {c0, c1, c2, c3};
  fx.granule.meta = meta;
  int salt = 0;
  for (Band b : {Band::B8A, Band::B11, Band::B12}) {
    fx.granule.bands[b] = random_raster(220, 260, 0x5CE0 + salt++, 1000, 3000);
  }

  zero_chain(fx.table.emplace(Satellite::S2A, 5));

  L1CTile tile;
  tile.tile_id = "T33SVB";
  tile.quantification = 10000.0;
  tile.gt = GeoTransform{9.995, 0.00018, 0.0, 0.2036, 0.0, -0.00018};
  for (Band b : {Band::B8A, Band::B11, Band::B12}) {
    tile.bands[b] = RawImage::Constant(180, 320, 2000);
  }
  const auto paint = [&tile](Index r0, Index c0_, Index nr, Index nc) {
    for (Index r = r0; r < r0 + nr; ++r) {
      for (Index c = c0_; c < c0_ + nc; ++c) {
        tile.bands[Band::B12](r, c) = 15000;
        tile.bands[Band::B11](r, c) = 5000;
        tile.bands[Band::B8A](r, c) = 5000;
      }
    }
  };
  switch (ev) {
    case SceneEvent::in_footprint: paint(82, 152, 4, 4); break;
    case SceneEvent::out_of_footprint: paint(143, 26, 4, 4); break;
    case SceneEvent::small_cluster: paint(82, 152, 2, 4); break;
    case SceneEvent::none: break;
  }

  if (split_tile) {
    // Two abutting halves exercise the mosaic path; their join equals the
    // whole tile because coverage is disjoint and complete.
    L1CTile left = tile;
    left.tile_id = "T33SVA";
    L1CTile right = tile;
    right.tile_id = "T33SVB";
    for (Band b : {Band::B8A, Band::B11, Band::B12}) {
      const RawImage& full = tile.bands.at(b);
      left.bands[b] = full.block(0, 0, 180, 160);
      right.bands[b] = full.block(0, 160, 180, 160);
    }
    right.gt.a = tile.gt.a + 160 * tile.gt.b;
    fx.tiles = {left, right};
  } else {
    fx.tiles = {tile};
  }
  return fx;
}

}  // namespace rawband::fixtures

#endif  // RAWBAND_TESTS_FIXTURES_HPP
