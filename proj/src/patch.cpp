// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#include "rawband/patch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rawband/warp.hpp"
#include "text_format.hpp"

namespace rawband {

int PatchGridSpec::stride() const {
  return static_cast<int>(
      std::llround(static_cast<double>(size) * (1.0 - overlap)));
}

void PatchGridSpec::validate() const {
  if (size < 1) throw std::invalid_argument("patch size must be positive");
  if (!(overlap >= 0.0) || overlap >= 1.0) {
    throw std::invalid_argument("patch overlap must lie in [0, 1)");
  }
  if (stride() < 1) {
    throw std::invalid_argument("patch overlap leaves a zero stride");
  }
}

namespace {

std::vector<Index> axis_origins(Index extent, Index size, Index stride) {
  std::vector<Index> origins;
  Index o = 0;
  while (true) {
    origins.push_back(o);
    if (o + size == extent) break;
    const Index next = o + stride;
    if (next + size <= extent) {
      o = next;
      continue;
    }
    const Index last = extent - size;
    if (last != o) origins.push_back(last);
    break;
  }
  return origins;
}

}  // namespace

std::vector<Window> patch_grid(Index rows, Index cols,
                               const PatchGridSpec& spec) {
  spec.validate();
  const Index size = spec.size;
  if (size > rows || size > cols) {
    throw DataError("patch-too-large",
                    "patch size " + std::to_string(size) +
                        " exceeds raster " + std::to_string(rows) + "x" +
                        std::to_string(cols));
  }
  const auto row_origins = axis_origins(rows, size, spec.stride());
  const auto col_origins = axis_origins(cols, size, spec.stride());
  std::vector<Window> windows;
  windows.reserve(row_origins.size() * col_origins.size());
  for (Index r : row_origins) {
    for (Index c : col_origins) {
      windows.push_back(Window{r, c, size, size});
    }
  }
  return windows;
}

namespace {

struct Span {
  double lo, hi;
};

// Area of the union of rectangles by sweeping the column axis between
// breakpoints and merging row intervals inside each strip.
double union_area(const std::vector<RectD>& rects) {
  if (rects.empty()) return 0.0;
  std::vector<double> edges;
  edges.reserve(rects.size() * 2);
  for (const RectD& r : rects) {
    edges.push_back(r.col0);
    edges.push_back(r.col0 + r.cols);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  double area = 0.0;
  std::vector<Span> spans;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double x0 = edges[i];
    const double x1 = edges[i + 1];
    if (!(x1 > x0)) continue;
    spans.clear();
    for (const RectD& r : rects) {
      if (r.col0 <= x0 && r.col0 + r.cols >= x1) {
        spans.push_back(Span{r.row0, r.row0 + r.rows});
      }
    }
    if (spans.empty()) continue;
    std::sort(spans.begin(), spans.end(),
              [](const Span& a, const Span& b) { return a.lo < b.lo; });
    double covered = 0.0;
    double cur_lo = spans.front().lo;
    double cur_hi = spans.front().hi;
    for (std::size_t k = 1; k < spans.size(); ++k) {
      if (spans[k].lo > cur_hi) {
        covered += cur_hi - cur_lo;
        cur_lo = spans[k].lo;
        cur_hi = spans[k].hi;
      } else {
        cur_hi = std::max(cur_hi, spans[k].hi);
      }
    }
    covered += cur_hi - cur_lo;
    area += covered * (x1 - x0);
  }
  return area;
}

}  // namespace

std::vector<PatchLabel> label_patches(const std::vector<Window>& windows,
                                      const std::vector<PixelBox>& boxes,
                                      int min_pixels) {
  if (min_pixels < 0) {
    throw std::invalid_argument("min_pixels must be non-negative");
  }
  std::vector<PatchLabel> labels;
  labels.reserve(windows.size());
  std::vector<RectD> clipped;
  for (const Window& w : windows) {
    clipped.clear();
    for (const PixelBox& b : boxes) {
      const double r0 = std::max<double>(b.row0, w.row0);
      const double c0 = std::max<double>(b.col0, w.col0);
      const double r1 =
          std::min<double>(b.row0 + b.rows, w.row0 + w.rows);
      const double c1 =
          std::min<double>(b.col0 + b.cols, w.col0 + w.cols);
      if (r1 > r0 && c1 > c0) {
        clipped.push_back(RectD{r0, c0, r1 - r0, c1 - c0});
      }
    }
    const double area = union_area(clipped);
    labels.push_back(
        PatchLabel{w, area > static_cast<double>(min_pixels)});
  }
  return labels;
}

DatasetStats dataset_stats(const std::vector<PatchLabel>& labels) {
  if (labels.empty()) {
    throw DataError("empty-dataset", "no patch labels to summarize");
  }
  DatasetStats stats;
  for (const PatchLabel& l : labels) {
    if (l.event) {
      ++stats.events;
    } else {
      ++stats.nonevents;
    }
  }
  stats.proportion = static_cast<double>(stats.events) /
                     static_cast<double>(stats.events + stats.nonevents);
  return stats;
}

void write_labels(const std::filesystem::path& file,
                  const std::vector<PatchLabel>& labels) {
  auto out = detail::open_out(file);
  for (const PatchLabel& l : labels) {
    out << l.window.row0 << " " << l.window.col0 << " "
        << (l.event ? "event" : "nonevent") << "\n";
  }
  out.close();
  if (!out) {
    throw DataError("write-failed", "short write to " + file.string());
  }
}

void write_stats(const std::filesystem::path& file, const DatasetStats& stats) {
  auto out = detail::open_out(file);
  out << "events=" << stats.events << "\n";
  out << "nonevents=" << stats.nonevents << "\n";
  out << "proportion=" << detail::fmt_g17(stats.proportion) << "\n";
  out.close();
  if (!out) {
    throw DataError("write-failed", "short write to " + file.string());
  }
}

}  // namespace rawband
