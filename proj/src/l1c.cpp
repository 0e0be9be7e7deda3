// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#include "rawband/l1c.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "rawband/bundle_io.hpp"
#include "text_format.hpp"

namespace rawband {

namespace fs = std::filesystem;

std::pair<double, double> GeoTransform::inverse_apply(double lon,
                                                      double lat) const {
  const double det = b * f - c * e;
  if (det == 0.0) {
    throw DataError("degenerate-geotransform",
                    "geotransform linear part is singular");
  }
  const double dx = lon - a;
  const double dy = lat - d;
  return {(f * dx - c * dy) / det, (b * dy - e * dx) / det};
}

L1CTile load_tile_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw DataError("missing-file", dir.string() + " is not a directory");
  }
  const fs::path meta_file = dir / "metadata.txt";
  auto kv = detail::read_kv_file(meta_file);
  auto take = [&](const char* key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw DataError("missing-key",
                      meta_file.string() + ": missing key '" + key + "'");
    }
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  L1CTile tile;
  tile.tile_id = take("tile_id");
  if (tile.tile_id.empty()) {
    throw DataError("bad-key", meta_file.string() + ": empty tile_id");
  }
  tile.quantification = detail::parse_double(
      take("quantification"), meta_file.string() + ": quantification");
  if (!(tile.quantification > 0.0)) {
    throw DataError("bad-quantification",
                    meta_file.string() + ": quantification must be positive");
  }
  const std::string gt_text = take("geotransform");
  auto parts = detail::split_char(gt_text, ',');
  if (parts.size() != 6) {
    throw DataError("bad-geotransform",
                    meta_file.string() + ": geotransform needs 6 values");
  }
  const std::string where = meta_file.string() + ": geotransform";
  tile.gt.a = detail::parse_double(parts[0], where);
  tile.gt.b = detail::parse_double(parts[1], where);
  tile.gt.c = detail::parse_double(parts[2], where);
  tile.gt.d = detail::parse_double(parts[3], where);
  tile.gt.e = detail::parse_double(parts[4], where);
  tile.gt.f = detail::parse_double(parts[5], where);
  if (tile.gt.b * tile.gt.f - tile.gt.c * tile.gt.e == 0.0) {
    throw DataError("degenerate-geotransform",
                    meta_file.string() + ": geotransform is singular");
  }
  if (!kv.empty()) {
    throw DataError("unknown-key", meta_file.string() + ": unknown key '" +
                                       kv.begin()->first + "'");
  }

  std::vector<fs::path> band_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".rawb") band_files.push_back(entry.path());
  }
  std::sort(band_files.begin(), band_files.end());
  for (const fs::path& f : band_files) {
    Band b;
    try {
      b = band_from_name(f.stem().string());
    } catch (const DataError&) {
      throw DataError("unknown-band",
                      f.string() + ": file name is not a band id");
    }
    tile.bands[b] = read_rawb(f);
  }
  if (tile.bands.empty()) {
    throw DataError("no-bands", dir.string() + " holds no band rasters");
  }
  return tile;
}

void save_tile_bundle(const L1CTile& tile, const fs::path& dir) {
  fs::create_directories(dir);
  auto out = detail::open_out(dir / "metadata.txt");
  out << "tile_id=" << tile.tile_id << "\n";
  out << "quantification=" << detail::fmt_g17(tile.quantification) << "\n";
  out << "geotransform=" << detail::fmt_g17(tile.gt.a) << ","
      << detail::fmt_g17(tile.gt.b) << "," << detail::fmt_g17(tile.gt.c) << ","
      << detail::fmt_g17(tile.gt.d) << "," << detail::fmt_g17(tile.gt.e) << ","
      << detail::fmt_g17(tile.gt.f) << "\n";
  out.close();
  for (const auto& [band, img] : tile.bands) {
    write_rawb(dir / (std::string(band_name(band)) + ".rawb"), img);
  }
}

MosaicPlane mosaic_tiles(const std::vector<L1CTile>& tiles, Band band) {
  if (tiles.empty()) {
    throw DataError("no-tiles", "mosaic of zero tiles");
  }
  std::vector<const L1CTile*> order;
  order.reserve(tiles.size());
  std::set<std::string> ids;
  for (const L1CTile& t : tiles) {
    if (!ids.insert(t.tile_id).second) {
      throw DataError("duplicate-tile-id",
                      "tile id '" + t.tile_id + "' appears twice");
    }
    if (!t.bands.count(band)) {
      throw DataError("missing-band", "tile '" + t.tile_id +
                                          "' has no raster for band " +
                                          std::string(band_name(band)));
    }
    order.push_back(&t);
  }
  std::sort(order.begin(), order.end(),
            [](const L1CTile* x, const L1CTile* y) {
              return x->tile_id < y->tile_id;
            });

  const GeoTransform ref = order.front()->gt;
  struct Placed {
    const L1CTile* tile;
    Index row_off, col_off;
  };
  std::vector<Placed> placed;
  Index min_r = 0, min_c = 0, max_r = 0, max_c = 0;
  for (const L1CTile* t : order) {
    if (t->gt.b != ref.b || t->gt.c != ref.c || t->gt.e != ref.e ||
        t->gt.f != ref.f) {
      throw DataError("mixed-resolution",
                      "tile '" + t->tile_id +
                          "' does not share the mosaic pixel grid");
    }
    // Offset of this tile's origin on the reference tile grid.
    const auto [col_off, row_off] = ref.inverse_apply(t->gt.a, t->gt.d);
    const double rr = std::round(row_off);
    const double rc = std::round(col_off);
    if (std::abs(row_off - rr) > 1e-6 || std::abs(col_off - rc) > 1e-6) {
      throw DataError("misaligned-tiles",
                      "tile '" + t->tile_id +
                          "' is not pixel-aligned with the mosaic grid");
    }
    const Index r = static_cast<Index>(std::llround(rr));
    const Index c = static_cast<Index>(std::llround(rc));
    const RawImage& img = t->bands.at(band);
    min_r = std::min(min_r, r);
    min_c = std::min(min_c, c);
    max_r = std::max(max_r, r + img.rows());
    max_c = std::max(max_c, c + img.cols());
    placed.push_back({t, r, c});
  }

  MosaicPlane out;
  out.dn = RawImage::Zero(max_r - min_r, max_c - min_c);
  const auto [o_lon, o_lat] =
      ref.apply(static_cast<double>(min_c), static_cast<double>(min_r));
  out.gt = ref;
  out.gt.a = o_lon;
  out.gt.d = o_lat;
  for (const Placed& p : placed) {
    const RawImage& img = p.tile->bands.at(band);
    const Index r0 = p.row_off - min_r;
    const Index c0 = p.col_off - min_c;
    for (Index r = 0; r < img.rows(); ++r) {
      for (Index c = 0; c < img.cols(); ++c) {
        std::uint16_t& cell = out.dn(r0 + r, c0 + c);
        const std::uint16_t v = img(r, c);
        if (cell == 0 && v != 0) cell = v;
      }
    }
  }
  return out;
}

MosaicPlane crop_to_footprint(const MosaicPlane& plane,
                              const BandFootprint& footprint) {
  double min_row = 1e300, min_col = 1e300;
  double max_row = -1e300, max_col = -1e300;
  for (const GeoPoint& p : footprint.corners()) {
    const auto [col, row] = plane.gt.inverse_apply(p.lon, p.lat);
    min_row = std::min(min_row, row);
    max_row = std::max(max_row, row);
    min_col = std::min(min_col, col);
    max_col = std::max(max_col, col);
  }
  const Index r0 = std::max<Index>(0, static_cast<Index>(std::floor(min_row)));
  const Index c0 = std::max<Index>(0, static_cast<Index>(std::floor(min_col)));
  const Index r1 = std::min<Index>(plane.dn.rows(),
                                   static_cast<Index>(std::ceil(max_row)));
  const Index c1 = std::min<Index>(plane.dn.cols(),
                                   static_cast<Index>(std::ceil(max_col)));
  if (r1 <= r0 || c1 <= c0) {
    const auto [w_lon, n_lat] = plane.gt.apply(0.0, 0.0);
    const auto [e_lon, s_lat] = plane.gt.apply(
        static_cast<double>(plane.dn.cols()), static_cast<double>(plane.dn.rows()));
    throw DataError(
        "no-overlap",
        "footprint rows [" + detail::fmt_g17(min_row) + ", " +
            detail::fmt_g17(max_row) + ") cols [" + detail::fmt_g17(min_col) +
            ", " + detail::fmt_g17(max_col) + ") does not meet mosaic of " +
            std::to_string(plane.dn.rows()) + "x" +
            std::to_string(plane.dn.cols()) + " px spanning lon [" +
            detail::fmt_g17(w_lon) + ", " + detail::fmt_g17(e_lon) +
            "] lat [" + detail::fmt_g17(s_lat) + ", " +
            detail::fmt_g17(n_lat) + "]");
  }
  MosaicPlane out;
  out.dn = plane.dn.block(r0, c0, r1 - r0, c1 - c0);
  const auto [lon, lat] =
      plane.gt.apply(static_cast<double>(c0), static_cast<double>(r0));
  out.gt = plane.gt;
  out.gt.a = lon;
  out.gt.d = lat;
  return out;
}

ReflectanceStack resample_to_coarsest(const std::vector<BandPlane>& planes,
                                      double quantification,
                                      ResampleMethod method) {
  if (!(quantification > 0.0)) {
    throw std::invalid_argument("quantification must be positive");
  }
  const Band wanted[3] = {Band::B8A, Band::B11, Band::B12};
  const BandPlane* by_band[3] = {nullptr, nullptr, nullptr};
  for (const BandPlane& p : planes) {
    bool matched = false;
    for (int i = 0; i < 3; ++i) {
      if (p.band == wanted[i]) {
        if (by_band[i]) {
          throw DataError("duplicate-band",
                          "band " + std::string(band_name(p.band)) +
                              " supplied twice");
        }
        by_band[i] = &p;
        matched = true;
      }
    }
    if (!matched) {
      throw DataError("unexpected-band",
                      "band " + std::string(band_name(p.band)) +
                          " has no slot in the reflectance stack");
    }
  }
  double coarsest = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (!by_band[i]) {
      throw DataError("missing-band",
                      "reflectance stack needs band " +
                          std::string(band_name(wanted[i])));
    }
    if (!(by_band[i]->resolution_m > 0.0)) {
      throw DataError("bad-resolution", "plane resolution must be positive");
    }
    coarsest = std::max(coarsest, by_band[i]->resolution_m);
  }

  Plane out[3];
  for (int i = 0; i < 3; ++i) {
    const BandPlane& p = *by_band[i];
    const double ratio_real = coarsest / p.resolution_m;
    const Index ratio = static_cast<Index>(std::llround(ratio_real));
    if (std::abs(ratio_real - static_cast<double>(ratio)) > 1e-9 || ratio < 1) {
      throw DataError("non-integer-ratio",
                      "resolution ratio " + detail::fmt_g17(ratio_real) +
                          " for band " + std::string(band_name(p.band)) +
                          " is not integral");
    }
    const Index rows = p.plane.dn.rows();
    const Index cols = p.plane.dn.cols();
    if (rows % ratio != 0 || cols % ratio != 0) {
      throw DataError("indivisible-dims",
                      "band " + std::string(band_name(p.band)) + " raster " +
                          std::to_string(rows) + "x" + std::to_string(cols) +
                          " is not divisible by ratio " +
                          std::to_string(ratio));
    }
    const Plane rho = p.plane.dn.cast<double>() / quantification;
    if (ratio == 1) {
      out[i] = rho;
      continue;
    }
    Plane reduced(rows / ratio, cols / ratio);
    if (method == ResampleMethod::block_mean) {
      for (Index r = 0; r < reduced.rows(); ++r) {
        for (Index c = 0; c < reduced.cols(); ++c) {
          reduced(r, c) =
              rho.block(r * ratio, c * ratio, ratio, ratio).mean();
        }
      }
    } else {
      const Index off = ratio / 2;
      for (Index r = 0; r < reduced.rows(); ++r) {
        for (Index c = 0; c < reduced.cols(); ++c) {
          reduced(r, c) = rho(r * ratio + off, c * ratio + off);
        }
      }
    }
    out[i] = std::move(reduced);
  }
  if (out[0].rows() != out[1].rows() || out[0].rows() != out[2].rows() ||
      out[0].cols() != out[1].cols() || out[0].cols() != out[2].cols()) {
    throw DataError("dim-mismatch",
                    "planes disagree in size after resampling to the "
                    "coarsest grid");
  }

  ReflectanceStack stack;
  stack.r8a = std::move(out[0]);
  stack.r11 = std::move(out[1]);
  stack.r12 = std::move(out[2]);
  stack.resolution_m = coarsest;
  for (int i = 0; i < 3; ++i) {
    if (by_band[i]->resolution_m == coarsest) {
      stack.gt = by_band[i]->plane.gt;
      break;
    }
  }
  return stack;
}

}  // namespace rawband
