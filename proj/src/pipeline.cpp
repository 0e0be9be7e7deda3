// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#include "rawband/pipeline.hpp"

#include <utility>

#include "text_format.hpp"

namespace rawband {

namespace {

[[noreturn]] void rethrow_with_stage(const char* stage, const DataError& e) {
  throw DataError(e.code(), std::string(stage) + ": " + e.what());
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const DataError& e) {
    rethrow_with_stage(name, e);
  }
}

}  // namespace

Eigen::Vector2d PipelineConfig::offset_for(const std::string& granule_id) const {
  auto it = manual_offsets.find(granule_id);
  return it == manual_offsets.end() ? Eigen::Vector2d::Zero() : it->second;
}

PipelineConfig parse_pipeline_config(const std::filesystem::path& file) {
  auto kv = detail::read_kv_file(file);
  PipelineConfig cfg;
  for (const auto& [key, val] : kv) {
    const std::string where = file.string() + ": key '" + key + "'";
    if (key == "shift_table") {
      cfg.shift_table = val;
    } else if (key == "fill") {
      if (val == "zero_fill") {
        cfg.fill = FillPolicy::zero_fill;
      } else if (val == "crop_to_valid") {
        cfg.fill = FillPolicy::crop_to_valid;
      } else {
        throw DataError("bad-value",
                        where + ": expected zero_fill or crop_to_valid");
      }
    } else if (key == "buffer") {
      cfg.buffer = detail::parse_double(val, where);
    } else if (key == "min_cluster") {
      cfg.min_cluster = static_cast<int>(detail::parse_int(val, where));
    } else if (key == "connectivity") {
      cfg.connectivity = static_cast<int>(detail::parse_int(val, where));
      if (cfg.connectivity != 4 && cfg.connectivity != 8) {
        throw DataError("bad-value", where + ": connectivity must be 4 or 8");
      }
    } else if (key == "min_pixels") {
      cfg.min_pixels = static_cast<int>(detail::parse_int(val, where));
    } else if (key == "patch_size") {
      cfg.patch_size = static_cast<int>(detail::parse_int(val, where));
    } else if (key == "overlap") {
      cfg.overlap = detail::parse_double(val, where);
    } else if (key == "resample") {
      if (val == "block_mean") {
        cfg.resample = ResampleMethod::block_mean;
      } else if (val == "nearest") {
        cfg.resample = ResampleMethod::nearest;
      } else {
        throw DataError("bad-value",
                        where + ": expected block_mean or nearest");
      }
    } else if (key.rfind("offset.", 0) == 0) {
      const std::string id = key.substr(7);
      if (id.empty()) {
        throw DataError("bad-key", where + ": empty granule id");
      }
      auto parts = detail::split_char(val, ',');
      if (parts.size() != 2) {
        throw DataError("bad-value", where + ": expected '<along>,<across>'");
      }
      cfg.manual_offsets[id] = {detail::parse_double(parts[0], where),
                                detail::parse_double(parts[1], where)};
    } else {
      throw DataError("unknown-key", where + " is not a config key");
    }
  }
  return cfg;
}

L1CTile mosaic_and_crop(const std::vector<L1CTile>& tiles,
                        const BandFootprint& footprint) {
  double quantification = 0.0;
  for (const L1CTile& t : tiles) {
    if (quantification == 0.0) {
      quantification = t.quantification;
    } else if (t.quantification != quantification) {
      throw DataError("quantification-mismatch",
                      "tile '" + t.tile_id +
                          "' disagrees on the quantification scale");
    }
  }
  L1CTile crop;
  crop.tile_id = "crop";
  crop.quantification = quantification;
  bool have_gt = false;
  for (Band b : kPipelineBands) {
    const MosaicPlane plane = mosaic_tiles(tiles, b);
    const MosaicPlane cropped = crop_to_footprint(plane, footprint);
    if (!have_gt) {
      crop.gt = cropped.gt;
      have_gt = true;
    } else if (!(crop.gt == cropped.gt)) {
      throw DataError("grid-mismatch", "band crops do not share one pixel grid");
    }
    crop.bands[b] = cropped.dn;
  }
  return crop;
}

DetectionResult detect_events(const L1CTile& crop, ResampleMethod method,
                              int min_cluster, int connectivity) {
  DetectionResult det;
  std::vector<BandPlane> planes;
  for (Band b : kPipelineBands) {
    auto it = crop.bands.find(b);
    if (it == crop.bands.end()) {
      throw DataError("missing-band", "crop has no raster for band " +
                                          std::string(band_name(b)));
    }
    planes.push_back(
        BandPlane{b, MosaicPlane{it->second, crop.gt}, band_resolution_m(b)});
  }
  det.stack = resample_to_coarsest(planes, crop.quantification, method);
  det.hotmap = compute_hotmap(det.stack);
  det.boxes = extract_event_boxes(det.hotmap, min_cluster, connectivity);
  return det;
}

AffineTransform fit_grid_to_frame(const GeoTransform& grid,
                                  const BandFootprint& footprint,
                                  const GridShape& full_shape,
                                  const Window& frame) {
  // Correspondences: three footprint corners, as detection-grid pixels on
  // one side and registered-frame pixels on the other.  The frame window's
  // origin (zero under zero fill) re-anchors the full-frame corners.
  const GeoPoint corner_pts[3] = {footprint.pc0, footprint.pc1, footprint.ac0};
  std::array<Eigen::Vector2d, 3> src;
  for (int i = 0; i < 3; ++i) {
    const auto [col, row] =
        grid.inverse_apply(corner_pts[i].lon, corner_pts[i].lat);
    src[static_cast<std::size_t>(i)] = {row, col};
  }
  const double full_r = static_cast<double>(full_shape.rows - 1);
  const double full_c = static_cast<double>(full_shape.cols - 1);
  const double row_org = static_cast<double>(frame.row0);
  const double col_org = static_cast<double>(frame.col0);
  const std::array<Eigen::Vector2d, 3> dst = {
      Eigen::Vector2d{0.0 - row_org, 0.0 - col_org},
      Eigen::Vector2d{0.0 - row_org, full_c - col_org},
      Eigen::Vector2d{full_r - row_org, 0.0 - col_org},
  };
  return fit_affine(src, dst);
}

PipelineResult run_pipeline(const Granule& g, const std::vector<L1CTile>& tiles,
                            const ShiftTable& table,
                            const PipelineConfig& config,
                            const std::string& granule_id) {
  PipelineResult res;
  res.verdict.granule_id = granule_id;

  stage("validate", [&] {
    validate_metadata(g.meta);
    validate_granule(g);
  });

  const std::vector<Band> bands(kPipelineBands.begin(), kPipelineBands.end());
  const Band ref_band = bands.front();

  const ShiftCoefficientSet* coeffs = nullptr;
  stage("coregister", [&] {
    coeffs = &table.lookup(g.meta.satellite, g.meta.detector);
    res.coreg = apply_coarse_coregistration(g, bands, *coeffs, config.fill);
  });

  stage("georef", [&] {
    const GridShape ref_grid = reference_grid_shape(g);
    for (Band b : bands) {
      const RawImage& img = g.bands.at(b);
      res.footprints.push_back(compute_band_footprint(
          g.meta, *coeffs, b, GridShape{img.rows(), img.cols()}, ref_grid));
    }
  });
  const BandFootprint& ref_fp = res.footprints.front();

  bool overlap_failed = false;
  std::string overlap_reason;
  stage("mosaic", [&] {
    try {
      res.l1c_crop = mosaic_and_crop(tiles, ref_fp);
    } catch (const DataError& e) {
      if (e.code() == "no-overlap") {
        overlap_failed = true;
        overlap_reason = e.what();
        return;
      }
      throw;
    }
  });
  if (overlap_failed) {
    res.verdict.useful = false;
    res.verdict.reason =
        "reference footprint does not meet the tile mosaic (" +
        overlap_reason + ")";
    return res;
  }

  stage("detect", [&] {
    DetectionResult det = detect_events(res.l1c_crop, config.resample,
                                        config.min_cluster, config.connectivity);
    res.stack = std::move(det.stack);
    res.hotmap = std::move(det.hotmap);
    res.l1c_boxes = std::move(det.boxes);
  });
  res.reached_detection = true;

  stage("warp", [&] {
    const RawImage& ref_raster = g.bands.at(ref_band);
    const Window& rw = res.coreg.windows.at(ref_band);
    res.to_raw = fit_grid_to_frame(
        res.stack.gt, ref_fp, GridShape{ref_raster.rows(), ref_raster.cols()},
        rw);

    WarpOptions opts;
    opts.buffer = config.buffer;
    opts.manual_offset = config.offset_for(granule_id);
    opts.clip = GridShape{rw.rows, rw.cols};
    std::vector<RectD> rects;
    rects.reserve(res.l1c_boxes.size());
    for (const PixelBox& b : res.l1c_boxes) {
      rects.push_back(RectD{static_cast<double>(b.row0),
                            static_cast<double>(b.col0),
                            static_cast<double>(b.rows),
                            static_cast<double>(b.cols)});
    }
    res.warp = warp_boxes(res.to_raw, rects, opts);
  });

  if (res.l1c_boxes.empty()) {
    res.verdict.useful = false;
    res.verdict.reason = "no hot cluster of at least " +
                         std::to_string(config.min_cluster) + " pixels";
  } else if (res.warp.boxes.empty()) {
    res.verdict.useful = false;
    res.verdict.reason = "no event box meets the reference band frame";
  } else {
    res.verdict.useful = true;
    for (std::size_t j = 0; j < res.warp.boxes.size(); ++j) {
      const Index active = res.l1c_boxes[res.warp.kept[j]].active_pixels;
      res.verdict.boxes.push_back(snap_to_pixels(res.warp.boxes[j], active));
    }
  }
  return res;
}

GranuleVerdict classify_useful_granule(const Granule& g,
                                       const std::vector<L1CTile>& tiles,
                                       const ShiftTable& table,
                                       const PipelineConfig& config,
                                       const std::string& granule_id) {
  return run_pipeline(g, tiles, table, config, granule_id).verdict;
}

void write_applied_shifts(const std::filesystem::path& file,
                          const CoregResult& coreg,
                          const std::vector<Band>& band_set) {
  auto out = detail::open_out(file);
  out << "# band along across row0 col0 rows cols\n";
  for (Band b : band_set) {
    const Eigen::Vector2i& d = coreg.applied.at(b);
    const Window& w = coreg.windows.at(b);
    out << band_name(b) << " " << d.x() << " " << d.y() << " " << w.row0
        << " " << w.col0 << " " << w.rows << " " << w.cols << "\n";
  }
  out.close();
  if (!out) {
    throw DataError("write-failed", "short write to " + file.string());
  }
}

void write_verdict(const std::filesystem::path& file,
                   const GranuleVerdict& verdict) {
  auto out = detail::open_out(file);
  out << "granule=" << verdict.granule_id << "\n";
  out << "verdict=" << (verdict.useful ? "useful" : "discarded") << "\n";
  if (!verdict.useful) {
    out << "reason=" << verdict.reason << "\n";
  }
  out << "boxes=" << verdict.boxes.size() << "\n";
  for (const PixelBox& b : verdict.boxes) {
    out << "box=" << b.row0 << " " << b.col0 << " " << b.rows << " " << b.cols
        << " " << b.active_pixels << "\n";
  }
  out.close();
  if (!out) {
    throw DataError("write-failed", "short write to " + file.string());
  }
}

}  // namespace rawband
