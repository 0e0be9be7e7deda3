// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).
//
// Registration latency harness.  Two ways of registering a band set onto its
// reference band are timed against each other: table-driven rigid translation
// (the production path) and an exhaustive normalized-cross-correlation search
// followed by the same translation (the heavy classical baseline).  Table
// lookups, shift composition and rounding happen before any clock starts; the
// timed body is registration work only.

#ifndef RAWBAND_BENCH_HPP
#define RAWBAND_BENCH_HPP

#include <string>
#include <vector>

#include "rawband/bands.hpp"
#include "rawband/granule.hpp"
#include "rawband/shift_table.hpp"

namespace rawband {

struct BenchConfig {
  // First entry is the reference band.
  std::vector<Band> band_set = {Band::B8A, Band::B11, Band::B12};
  // Timed passes over the full granule list.
  int runs = 3;
  // Untimed passes over the first granule before each method's timed runs.
  int warmups = 15;
  // Search radius of the correlation baseline, in pixels.
  int baseline_max_shift = 192;
  // Also time an empty per-granule body; bounds the harness overhead.
  bool include_noop = false;
  // Compare the corrections the two methods apply; mismatches are reported,
  // not fatal (real data may defeat the table).
  bool verify_outputs = true;
};

struct MethodTiming {
  std::string method;
  std::vector<double> run_ms;  // one timed pass over all granules each
  double mean_ms = 0.0;
  double mean_per_granule_ms = 0.0;
};

struct BenchReport {
  std::vector<MethodTiming> methods;
  int granule_count = 0;
  std::vector<Band> band_set;
  int warmups = 0;
  int runs = 0;
  // mean of the correlation baseline over mean of the table-driven method.
  double speedup = 0.0;
  // True when both methods applied identical corrections everywhere (only
  // meaningful with BenchConfig::verify_outputs).
  bool outputs_match = true;

  const MethodTiming* find(const std::string& method) const;
  // Human-readable aligned table.
  std::string table() const;
  // One line per method: `method mean_ms run1_ms run2_ms ...`.
  std::string machine_lines() const;
};

// Times registration of `band_set` onto its first band over `granules`.
// Methods: "csc" translates each band by the precomputed table correction;
// "ncc-exhaustive" searches [-max_shift, max_shift]^2 for the correction,
// then translates.  Per method: `warmups` untimed passes over the first
// granule, then `runs` timed passes over all granules on a monotonic clock,
// single-threaded.  Throws DataError on an empty granule list, a missing
// band, mixed dimensions, or an uncalibrated detector.
BenchReport benchmark_registration(const std::vector<Granule>& granules,
                                   const ShiftTable& table,
                                   const BenchConfig& config = {});

}  // namespace rawband

#endif  // RAWBAND_BENCH_HPP
