// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#include "rawband/warp.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "text_format.hpp"

namespace rawband {

AffineTransform fit_affine(const std::array<Eigen::Vector2d, 3>& src,
                           const std::array<Eigen::Vector2d, 3>& dst) {
  const Eigen::Vector2d e1 = src[1] - src[0];
  const Eigen::Vector2d e2 = src[2] - src[0];
  const double cross = e1.x() * e2.y() - e1.y() * e2.x();
  if (std::abs(cross) <= 1e-9 * std::max(1.0, e1.norm() * e2.norm())) {
    throw DataError("collinear-points",
                    "affine fit needs three non-collinear source points");
  }
  Eigen::Matrix2d basis;
  basis.col(0) = e1;
  basis.col(1) = e2;
  Eigen::Matrix2d image;
  image.col(0) = dst[1] - dst[0];
  image.col(1) = dst[2] - dst[0];
  AffineTransform t;
  t.linear = image * basis.inverse();
  t.offset = dst[0] - t.linear * src[0];
  return t;
}

AffineTransform invert_affine(const AffineTransform& t) {
  const double det = t.linear.determinant();
  if (std::abs(det) <= 1e-12) {
    throw DataError("singular-transform",
                    "affine transform is not invertible (det=" +
                        detail::fmt_g17(det) + ")");
  }
  AffineTransform inv;
  inv.linear = t.linear.inverse();
  inv.offset = -(inv.linear * t.offset);
  return inv;
}

WarpOutcome warp_boxes(const AffineTransform& t, const std::vector<RectD>& boxes,
                       const WarpOptions& opts) {
  if (opts.buffer < 0.0) {
    throw std::invalid_argument("buffer must be non-negative");
  }
  WarpOutcome out;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const RectD& box = boxes[i];
    if (!(box.rows > 0.0) || !(box.cols > 0.0)) {
      throw std::invalid_argument("boxes must have positive extent");
    }
    const Eigen::Vector2d corners[4] = {
        {box.row0, box.col0},
        {box.row0, box.col0 + box.cols},
        {box.row0 + box.rows, box.col0},
        {box.row0 + box.rows, box.col0 + box.cols},
    };
    double r0 = 1e300, c0 = 1e300, r1 = -1e300, c1 = -1e300;
    for (const Eigen::Vector2d& p : corners) {
      const Eigen::Vector2d q = t.apply(p);
      r0 = std::min(r0, q.x());
      r1 = std::max(r1, q.x());
      c0 = std::min(c0, q.y());
      c1 = std::max(c1, q.y());
    }
    r0 -= opts.buffer;
    c0 -= opts.buffer;
    r1 += opts.buffer;
    c1 += opts.buffer;
    r0 += opts.manual_offset.x();
    r1 += opts.manual_offset.x();
    c0 += opts.manual_offset.y();
    c1 += opts.manual_offset.y();
    if (opts.clip) {
      r0 = std::max(r0, 0.0);
      c0 = std::max(c0, 0.0);
      r1 = std::min(r1, static_cast<double>(opts.clip->rows));
      c1 = std::min(c1, static_cast<double>(opts.clip->cols));
      if (!(r1 > r0) || !(c1 > c0)) {
        out.dropped.push_back(
            {i, "warped box " + std::to_string(i) +
                    " falls outside the target raster"});
        continue;
      }
    }
    out.boxes.push_back(RectD{r0, c0, r1 - r0, c1 - c0});
    out.kept.push_back(i);
  }
  return out;
}

PixelBox snap_to_pixels(const RectD& r, Index active_pixels) {
  PixelBox box;
  box.row0 = static_cast<Index>(std::floor(r.row0));
  box.col0 = static_cast<Index>(std::floor(r.col0));
  box.rows = static_cast<Index>(std::ceil(r.row0 + r.rows)) - box.row0;
  box.cols = static_cast<Index>(std::ceil(r.col0 + r.cols)) - box.col0;
  box.active_pixels = active_pixels;
  return box;
}

void write_transform(const std::filesystem::path& file,
                     const AffineTransform& t) {
  auto out = detail::open_out(file);
  out << detail::fmt_g17(t.linear(0, 0)) << " " << detail::fmt_g17(t.linear(0, 1))
      << " " << detail::fmt_g17(t.linear(1, 0)) << " "
      << detail::fmt_g17(t.linear(1, 1)) << " " << detail::fmt_g17(t.offset.x())
      << " " << detail::fmt_g17(t.offset.y()) << "\n";
  out.close();
  if (!out) {
    throw DataError("write-failed", "short write to " + file.string());
  }
}

AffineTransform read_transform(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw DataError("missing-file", "cannot open " + file.string());
  }
  std::vector<double> vals;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    for (auto tok : detail::split_ws(s)) {
      vals.push_back(detail::parse_double(
          tok, file.string() + ":" + std::to_string(lineno)));
    }
  }
  if (vals.size() != 6) {
    throw DataError("bad-transform", file.string() + ": expected 6 reals, got " +
                                         std::to_string(vals.size()));
  }
  AffineTransform t;
  t.linear << vals[0], vals[1], vals[2], vals[3];
  t.offset << vals[4], vals[5];
  return t;
}

}  // namespace rawband
