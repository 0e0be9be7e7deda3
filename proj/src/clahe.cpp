// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#include "rawband/clahe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rawband {

namespace {

// 4096 bins keep per-tile histograms cheap while preserving value order
// (mapping uses the high 12 bits, so v1 <= v2 implies bin1 <= bin2).
constexpr int kBins = 4096;
constexpr int kBinShift = 4;

struct Axis {
  std::vector<Index> lo;      // tile start per tile index
  std::vector<Index> hi;      // tile end (exclusive)
  std::vector<double> center;
};

Axis split_axis(Index extent, Index n_tiles) {
  Axis ax;
  ax.lo.resize(static_cast<std::size_t>(n_tiles));
  ax.hi.resize(static_cast<std::size_t>(n_tiles));
  ax.center.resize(static_cast<std::size_t>(n_tiles));
  for (Index i = 0; i < n_tiles; ++i) {
    ax.lo[static_cast<std::size_t>(i)] = (i * extent) / n_tiles;
    ax.hi[static_cast<std::size_t>(i)] = ((i + 1) * extent) / n_tiles;
    ax.center[static_cast<std::size_t>(i)] =
        0.5 * static_cast<double>(ax.lo[static_cast<std::size_t>(i)] +
                                  ax.hi[static_cast<std::size_t>(i)] - 1);
  }
  return ax;
}

// For each coordinate along an axis: bracketing tile pair and blend weight.
void blend_coords(const Axis& ax, Index extent, std::vector<int>& i0,
                  std::vector<int>& i1, std::vector<double>& w) {
  const int n = static_cast<int>(ax.center.size());
  i0.resize(static_cast<std::size_t>(extent));
  i1.resize(static_cast<std::size_t>(extent));
  w.resize(static_cast<std::size_t>(extent));
  for (Index p = 0; p < extent; ++p) {
    const double x = static_cast<double>(p);
    int hi = 0;
    while (hi < n && ax.center[static_cast<std::size_t>(hi)] < x) ++hi;
    int lo = hi - 1;
    if (hi >= n) hi = n - 1;
    if (lo < 0) lo = 0;
    double t = 0.0;
    if (hi != lo) {
      t = (x - ax.center[static_cast<std::size_t>(lo)]) /
          (ax.center[static_cast<std::size_t>(hi)] -
           ax.center[static_cast<std::size_t>(lo)]);
    }
    i0[static_cast<std::size_t>(p)] = lo;
    i1[static_cast<std::size_t>(p)] = hi;
    w[static_cast<std::size_t>(p)] = t;
  }
}

}  // namespace

RawImage equalize_contrast(const RawImage& img, int tile, double clip_ratio) {
  if (tile < 2) throw std::invalid_argument("CLAHE tile edge must be >= 2 px");
  if (!(clip_ratio > 0.0)) {
    throw std::invalid_argument("CLAHE clip ratio must be positive");
  }
  const Index rows = img.rows();
  const Index cols = img.cols();
  if (rows < 1 || cols < 1) return img;

  const std::uint16_t mn_v = img.minCoeff();
  const std::uint16_t mx_v = img.maxCoeff();
  if (mn_v == mx_v) return img;

  Index nty = 1;
  Index ntx = 1;
  if (rows >= tile && cols >= tile) {
    nty = (rows + tile - 1) / tile;
    ntx = (cols + tile - 1) / tile;
  }
  if (static_cast<std::size_t>(nty) * static_cast<std::size_t>(ntx) * kBins >
      (std::size_t(1) << 23)) {
    throw std::invalid_argument("CLAHE tile edge too small for this raster");
  }

  const Axis ay = split_axis(rows, nty);
  const Axis ax = split_axis(cols, ntx);

  // Per-tile clipped cumulative mapping, normalized to (0, 1].
  std::vector<double> lut(static_cast<std::size_t>(nty * ntx) * kBins);
  std::vector<long long> hist(kBins);
  for (Index ti = 0; ti < nty; ++ti) {
    for (Index tj = 0; tj < ntx; ++tj) {
      std::fill(hist.begin(), hist.end(), 0);
      const Index y0 = ay.lo[static_cast<std::size_t>(ti)];
      const Index y1 = ay.hi[static_cast<std::size_t>(ti)];
      const Index x0 = ax.lo[static_cast<std::size_t>(tj)];
      const Index x1 = ax.hi[static_cast<std::size_t>(tj)];
      for (Index r = y0; r < y1; ++r) {
        for (Index c = x0; c < x1; ++c) {
          ++hist[img(r, c) >> kBinShift];
        }
      }
      const long long area = static_cast<long long>(y1 - y0) * (x1 - x0);
      const long long limit = std::max<long long>(
          1, std::llround(clip_ratio * static_cast<double>(area) / kBins));
      long long excess = 0;
      for (long long& h : hist) {
        if (h > limit) {
          excess += h - limit;
          h = limit;
        }
      }
      // Redistributing the excess evenly returns the total to `area`, so the
      // cumulative mapping normalizes by the tile area.
      const long long add = excess / kBins;
      const long long rem = excess % kBins;
      double* out = &lut[static_cast<std::size_t>(ti * ntx + tj) * kBins];
      long long cum = 0;
      for (int b = 0; b < kBins; ++b) {
        cum += hist[static_cast<std::size_t>(b)] + add + (b < rem ? 1 : 0);
        out[b] = static_cast<double>(cum) / static_cast<double>(area);
      }
    }
  }

  std::vector<int> ri0, ri1, ci0, ci1;
  std::vector<double> rw, cw;
  blend_coords(ay, rows, ri0, ri1, rw);
  blend_coords(ax, cols, ci0, ci1, cw);

  Plane mapped(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const int t0 = ri0[static_cast<std::size_t>(r)];
    const int t1 = ri1[static_cast<std::size_t>(r)];
    const double wy = rw[static_cast<std::size_t>(r)];
    for (Index c = 0; c < cols; ++c) {
      const int u0 = ci0[static_cast<std::size_t>(c)];
      const int u1 = ci1[static_cast<std::size_t>(c)];
      const double wx = cw[static_cast<std::size_t>(c)];
      const int bin = img(r, c) >> kBinShift;
      const double v00 = lut[(static_cast<std::size_t>(t0) * static_cast<std::size_t>(ntx) + static_cast<std::size_t>(u0)) * kBins + static_cast<std::size_t>(bin)];
      const double v01 = lut[(static_cast<std::size_t>(t0) * static_cast<std::size_t>(ntx) + static_cast<std::size_t>(u1)) * kBins + static_cast<std::size_t>(bin)];
      const double v10 = lut[(static_cast<std::size_t>(t1) * static_cast<std::size_t>(ntx) + static_cast<std::size_t>(u0)) * kBins + static_cast<std::size_t>(bin)];
      const double v11 = lut[(static_cast<std::size_t>(t1) * static_cast<std::size_t>(ntx) + static_cast<std::size_t>(u1)) * kBins + static_cast<std::size_t>(bin)];
      mapped(r, c) = (1.0 - wy) * ((1.0 - wx) * v00 + wx * v01) +
                     wy * ((1.0 - wx) * v10 + wx * v11);
    }
  }

  const double lo = mapped.minCoeff();
  const double hi = mapped.maxCoeff();
  if (!(hi > lo)) return img;
  RawImage out(rows, cols);
  const double scale = 65535.0 / (hi - lo);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      out(r, c) = static_cast<std::uint16_t>(
          std::llround((mapped(r, c) - lo) * scale));
    }
  }
  return out;
}

}  // namespace rawband
