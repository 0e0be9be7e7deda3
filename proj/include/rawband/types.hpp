// rawband: lightweight processing of raw multispectral pushbroom acquisitions.
//
// Copyright 2026 the rawband authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAWBAND_TYPES_HPP
#define RAWBAND_TYPES_HPP

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace rawband {

// Rasters are dense row-major matrices so scanline order matches the on-disk
// layout of band files.  Row index = along-track, column index = across-track.
template <typename Scalar>
using Image =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using RawImage = Image<std::uint16_t>;
using MaskImage = Image<std::uint8_t>;

// Reflectance planes and other real-valued grids.
using Plane = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Index = Eigen::Index;

// Error raised by anything that consumes external data (files, tables,
// rasters).  `code` is a stable machine-readable slug; the message names the
// offending file, key or value.
class DataError : public std::runtime_error {
 public:
  DataError(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint& a, const GeoPoint& b) {
    return a.lat == b.lat && a.lon == b.lon;
  }
};

// Half-open pixel window: rows [row0, row0+rows), cols [col0, col0+cols).
struct Window {
  Index row0 = 0;
  Index col0 = 0;
  Index rows = 0;
  Index cols = 0;

  friend bool operator==(const Window& a, const Window& b) {
    return a.row0 == b.row0 && a.col0 == b.col0 && a.rows == b.rows &&
           a.cols == b.cols;
  }
};

template <typename Scalar>
Image<Scalar> crop(const Image<Scalar>& img, const Window& w) {
  if (w.rows < 0 || w.cols < 0 || w.row0 < 0 || w.col0 < 0 ||
      w.row0 + w.rows > img.rows() || w.col0 + w.cols > img.cols()) {
    throw DataError("window-out-of-bounds",
                    "crop window [" + std::to_string(w.row0) + "," +
                        std::to_string(w.col0) + " " + std::to_string(w.rows) +
                        "x" + std::to_string(w.cols) + "] exceeds raster " +
                        std::to_string(img.rows()) + "x" +
                        std::to_string(img.cols()));
  }
  return img.block(w.row0, w.col0, w.rows, w.cols);
}

// Rigid integer translation with constant fill.  A positive `d_along` moves
// content toward higher row indices, positive `d_across` toward higher
// columns: out(r, c) = img(r - d_along, c - d_across) where defined.
template <typename Scalar>
Image<Scalar> translate_image(const Image<Scalar>& img, Index d_along,
                              Index d_across, Scalar fill = Scalar(0)) {
  const Index rows = img.rows();
  const Index cols = img.cols();
  const Index a = d_along < 0 ? -d_along : d_along;
  const Index c = d_across < 0 ? -d_across : d_across;
  if (a >= rows || c >= cols) {
    throw DataError("shift-out-of-range",
                    "translation (" + std::to_string(d_along) + "," +
                        std::to_string(d_across) +
                        ") meets or exceeds raster dimensions " +
                        std::to_string(rows) + "x" + std::to_string(cols));
  }
  Image<Scalar> out = Image<Scalar>::Constant(rows, cols, fill);
  out.block(d_along > 0 ? d_along : 0, d_across > 0 ? d_across : 0, rows - a,
            cols - c) =
      img.block(d_along < 0 ? -d_along : 0, d_across < 0 ? -d_across : 0,
                rows - a, cols - c);
  return out;
}

// Pixels of `img` that carry source data after translate_image with the same
// displacement (the rest is fill).
inline Window valid_region_after_translation(Index rows, Index cols,
                                             Index d_along, Index d_across) {
  Window w;
  w.row0 = d_along > 0 ? d_along : 0;
  w.col0 = d_across > 0 ? d_across : 0;
  w.rows = rows - (d_along < 0 ? -d_along : d_along);
  w.cols = cols - (d_across < 0 ? -d_across : d_across);
  return w;
}

}  // namespace rawband

#endif  // RAWBAND_TYPES_HPP
