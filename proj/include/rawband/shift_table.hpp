// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).
//
// Systematic inter-band displacement is calibrated once per (satellite,
// detector) as a chain of adjacent-pair coefficients along the acquisition
// order and composed on demand for arbitrary band couples.

#ifndef RAWBAND_SHIFT_TABLE_HPP
#define RAWBAND_SHIFT_TABLE_HPP

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "rawband/bands.hpp"
#include "rawband/types.hpp"

namespace rawband {

// A displacement in pixels of the grid whose sampling distance is
// `resolution_m`.  `along` moves with the scan (rows), `across` across it
// (columns).
struct ShiftVector {
  double along = 0.0;
  double across = 0.0;
  double resolution_m = 0.0;
};

// Adjacent-pair shift coefficients for one (satellite, detector).  Slot k
// holds the correction registering acquisition-order band k+1 onto band k --
// the translation that takes band k+1's raster onto band k's -- expressed in
// pixels of band k.  Slots may be empty; composition across a gap fails
// loudly.
class ShiftCoefficientSet {
 public:
  static constexpr int kPairs = kBandCount - 1;

  // `from` and `to` must be adjacent in acquisition order.
  void set(Band from, Band to, const Eigen::Vector2d& coeff,
           const Eigen::Vector2i& samples = Eigen::Vector2i::Zero());

  const std::optional<Eigen::Vector2d>& coefficient(int pair_index) const;
  // Number of estimates kept per component when the coefficient was fitted
  // from data; zero for tabulated values.
  const Eigen::Vector2i& sample_count(int pair_index) const;

  static int pair_index(Band from, Band to);

  ShiftCoefficientSet() { samples_.fill(Eigen::Vector2i::Zero()); }

 private:
  std::array<std::optional<Eigen::Vector2d>, kPairs> coeff_{};
  // Eigen vectors stay uninitialized under value-init, hence the fill above.
  std::array<Eigen::Vector2i, kPairs> samples_{};
};

// Correction registering band `n` onto band `m`: the translation that,
// applied to band n's raster, aligns its content with band m's.  Expressed in
// pixels of band `n`.  For acquisition_index(n) > acquisition_index(m) this
// is the running sum of the adjacent coefficients between them, each
// contribution rescaled as (coeff * res(first band of pair)) / res(n); the
// opposite direction is the negated sum rescaled by res(m)/res(n).
// compose_shift(x, x) is exactly zero.  Throws DataError when a required
// adjacent coefficient is absent.
ShiftVector compose_shift(const ShiftCoefficientSet& set, Band n, Band m);

// Calibration for a constellation: one coefficient set per (satellite,
// detector).
class ShiftTable {
 public:
  const ShiftCoefficientSet& lookup(Satellite sat, int detector) const;
  ShiftCoefficientSet& emplace(Satellite sat, int detector);
  bool contains(Satellite sat, int detector) const;

  // Text format, one coefficient per line:
  //   satellite detector band_from band_to along across resolution
  // '#' starts a comment.  band_from/band_to must be acquisition-adjacent
  // and resolution must equal the native resolution of band_from.
  static ShiftTable load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;

 private:
  std::map<std::pair<Satellite, int>, ShiftCoefficientSet> sets_;
};

// compose_shift on the coefficient set of (sat, detector); fails loudly when
// that detector is not calibrated.
ShiftVector lookup_shift(const ShiftTable& table, Satellite sat, int detector,
                         Band n, Band m);

}  // namespace rawband

#endif  // RAWBAND_SHIFT_TABLE_HPP
