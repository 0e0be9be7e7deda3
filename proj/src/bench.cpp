// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#include "rawband/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

#include "rawband/correlate.hpp"
#include "rawband/types.hpp"

namespace rawband {

namespace {

std::string fmt_ms(double ms) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", ms);
  return buf;
}

struct GranuleWork {
  const RawImage* ref = nullptr;
  std::vector<const RawImage*> bands;     // non-reference bands
  std::vector<Eigen::Vector2i> table_d;   // precomputed corrections
};

// Runs `body` once per granule, `warmups` times on the first granule
// untimed, then `runs` timed passes over all granules.
MethodTiming time_method(const std::string& name, int warmups, int runs,
                         std::size_t granule_count,
                         const std::function<void(std::size_t)>& body) {
  using clock = std::chrono::steady_clock;
  for (int w = 0; w < warmups; ++w) body(0);
  MethodTiming t;
  t.method = name;
  t.run_ms.reserve(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r) {
    const auto t0 = clock::now();
    for (std::size_t g = 0; g < granule_count; ++g) body(g);
    const auto t1 = clock::now();
    t.run_ms.push_back(
        std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  double sum = 0.0;
  for (double ms : t.run_ms) sum += ms;
  t.mean_ms = sum / static_cast<double>(runs);
  t.mean_per_granule_ms = t.mean_ms / static_cast<double>(granule_count);
  return t;
}

}  // namespace

const MethodTiming* BenchReport::find(const std::string& method) const {
  for (const MethodTiming& t : methods) {
    if (t.method == method) return &t;
  }
  return nullptr;
}

std::string BenchReport::table() const {
  std::string out;
  out += "granules: " + std::to_string(granule_count) + "  bands:";
  for (Band b : band_set) out += " " + std::string(band_name(b));
  out += "  warmups: " + std::to_string(warmups) +
         "  runs: " + std::to_string(runs) + "\n";
  std::size_t width = 6;
  for (const MethodTiming& t : methods) width = std::max(width, t.method.size());
  for (const MethodTiming& t : methods) {
    out += t.method;
    out.append(width - t.method.size() + 2, ' ');
    out += "mean " + fmt_ms(t.mean_ms) + " ms";
    out += "  per-granule " + fmt_ms(t.mean_per_granule_ms) + " ms\n";
  }
  out += "speedup: " + fmt_ms(speedup) + "x";
  out += outputs_match ? "  (outputs agree)\n" : "  (OUTPUTS DIFFER)\n";
  return out;
}

std::string BenchReport::machine_lines() const {
  std::string out;
  for (const MethodTiming& t : methods) {
    out += t.method + " " + fmt_ms(t.mean_ms);
    for (double ms : t.run_ms) out += " " + fmt_ms(ms);
    out += "\n";
  }
  return out;
}

BenchReport benchmark_registration(const std::vector<Granule>& granules,
                                   const ShiftTable& table,
                                   const BenchConfig& config) {
  if (granules.empty()) {
    throw DataError("empty-granule-list", "nothing to benchmark");
  }
  if (config.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (config.warmups < 0) throw std::invalid_argument("warmups must be >= 0");
  if (config.band_set.size() < 2) {
    throw std::invalid_argument("band set needs a reference and >= 1 band");
  }

  const Band ref = config.band_set.front();
  std::vector<GranuleWork> work(granules.size());
  for (std::size_t i = 0; i < granules.size(); ++i) {
    const Granule& g = granules[i];
    const ShiftCoefficientSet& coeffs =
        table.lookup(g.meta.satellite, g.meta.detector);
    auto rit = g.bands.find(ref);
    if (rit == g.bands.end()) {
      throw DataError("missing-band", "granule lacks reference band " +
                                          std::string(band_name(ref)));
    }
    work[i].ref = &rit->second;
    for (std::size_t k = 1; k < config.band_set.size(); ++k) {
      const Band b = config.band_set[k];
      auto it = g.bands.find(b);
      if (it == g.bands.end()) {
        throw DataError("missing-band", "granule lacks band " +
                                            std::string(band_name(b)));
      }
      if (it->second.rows() != work[i].ref->rows() ||
          it->second.cols() != work[i].ref->cols()) {
        throw DataError("dim-mismatch",
                        "band " + std::string(band_name(b)) +
                            " does not share the reference dimensions");
      }
      const ShiftVector s = compose_shift(coeffs, b, ref);
      work[i].bands.push_back(&it->second);
      work[i].table_d.push_back(
          {static_cast<int>(std::llround(s.along)),
           static_cast<int>(std::llround(s.across))});
    }
  }

  // Scratch for the corrections each method applies; preallocated so the
  // timed body never allocates for bookkeeping.
  std::vector<std::vector<Eigen::Vector2i>> csc_applied(granules.size());
  std::vector<std::vector<Eigen::Vector2i>> ncc_applied(granules.size());
  std::vector<std::vector<Eigen::Vector2i>> noop_applied(granules.size());
  for (std::size_t i = 0; i < granules.size(); ++i) {
    csc_applied[i].resize(work[i].bands.size());
    ncc_applied[i].resize(work[i].bands.size());
    noop_applied[i].resize(work[i].bands.size());
  }

  RawImage sink;  // keeps the translation result alive, reused across calls

  const auto csc_body = [&](std::size_t i) {
    const GranuleWork& w = work[i];
    for (std::size_t k = 0; k < w.bands.size(); ++k) {
      const Eigen::Vector2i d = w.table_d[k];
      sink = translate_image(*w.bands[k], d.x(), d.y());
      csc_applied[i][k] = d;
    }
  };
  const auto ncc_body = [&](std::size_t i) {
    const GranuleWork& w = work[i];
    for (std::size_t k = 0; k < w.bands.size(); ++k) {
      const Eigen::Vector2i d =
          estimate_translation(*w.bands[k], *w.ref, config.baseline_max_shift,
                               CorrelationBackend::fft);
      sink = translate_image(*w.bands[k], d.x(), d.y());
      ncc_applied[i][k] = d;
    }
  };
  // Same loop structure and bookkeeping stores as the real methods, no
  // registration work: what it measures is the harness itself.
  const auto noop_body = [&](std::size_t i) {
    const GranuleWork& w = work[i];
    for (std::size_t k = 0; k < w.bands.size(); ++k) {
      noop_applied[i][k] = Eigen::Vector2i::Zero();
    }
  };

  BenchReport report;
  report.granule_count = static_cast<int>(granules.size());
  report.band_set = config.band_set;
  report.warmups = config.warmups;
  report.runs = config.runs;

  report.methods.push_back(time_method("csc", config.warmups, config.runs,
                                       granules.size(), csc_body));
  report.methods.push_back(time_method("ncc-exhaustive", config.warmups,
                                       config.runs, granules.size(),
                                       ncc_body));
  if (config.include_noop) {
    report.methods.push_back(time_method("noop", config.warmups, config.runs,
                                         granules.size(), noop_body));
  }

  const MethodTiming* csc = report.find("csc");
  const MethodTiming* ncc = report.find("ncc-exhaustive");
  report.speedup = csc->mean_ms > 0.0 ? ncc->mean_ms / csc->mean_ms : 0.0;

  if (config.verify_outputs) {
    for (std::size_t i = 0; i < granules.size(); ++i) {
      for (std::size_t k = 0; k < work[i].bands.size(); ++k) {
        if (csc_applied[i][k] != ncc_applied[i][k]) {
          report.outputs_match = false;
        }
      }
    }
  }
  return report;
}

}  // namespace rawband
