// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).
//
// End-to-end granule screening: register the short-wave infrared bands, geo-
// locate them from the acquisition metadata, pull the matching orthorectified
// reflectance, detect thermal anomalies there and carry the event boxes back
// onto the raw reference-band frame.  A granule is worth keeping ("useful")
// exactly when at least one event box lands on the reference band.

#ifndef RAWBAND_PIPELINE_HPP
#define RAWBAND_PIPELINE_HPP

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rawband/coreg.hpp"
#include "rawband/georef.hpp"
#include "rawband/granule.hpp"
#include "rawband/hotspot.hpp"
#include "rawband/l1c.hpp"
#include "rawband/shift_table.hpp"
#include "rawband/warp.hpp"

namespace rawband {

// Bands the screening runs on; the first entry is the reference frame all
// boxes are expressed in.
inline constexpr std::array<Band, 3> kPipelineBands = {Band::B8A, Band::B11,
                                                       Band::B12};

struct PipelineConfig {
  std::filesystem::path shift_table;
  FillPolicy fill = FillPolicy::zero_fill;
  double buffer = 2.0;
  int min_cluster = 9;
  int connectivity = 8;
  int min_pixels = 5;
  int patch_size = 256;
  double overlap = 0.25;
  ResampleMethod resample = ResampleMethod::block_mean;
  // Hand-tuned residual corrections, keyed by granule id, applied to warped
  // boxes after buffering.
  std::map<std::string, Eigen::Vector2d> manual_offsets;

  Eigen::Vector2d offset_for(const std::string& granule_id) const;
};

// key=value text.  Keys: shift_table, fill (zero_fill|crop_to_valid), buffer,
// min_cluster, connectivity (4|8), min_pixels, patch_size, overlap, resample
// (block_mean|nearest) and offset.<granule-id> = "<along>,<across>".  Unknown
// keys are errors; absent keys keep their defaults.
PipelineConfig parse_pipeline_config(const std::filesystem::path& file);

struct GranuleVerdict {
  std::string granule_id;
  bool useful = false;
  std::string reason;           // why the granule was discarded
  std::vector<PixelBox> boxes;  // reference-frame boxes, snapped to pixels
};

// Joins the screening bands across tiles and cuts each to `footprint`.  The
// result carries tile_id "crop" and is saveable as a regular tile bundle.
// Tiles must agree on the quantification scale and the band crops must land
// on one pixel grid.  Throws DataError (code "no-overlap") when the
// footprint misses the mosaic.
L1CTile mosaic_and_crop(const std::vector<L1CTile>& tiles,
                        const BandFootprint& footprint);

struct DetectionResult {
  ReflectanceStack stack;
  MaskImage hotmap;
  std::vector<PixelBox> boxes;  // on the detection grid
};

// Reflectance stack, hot mask and event clusters of a mosaicked crop.
DetectionResult detect_events(const L1CTile& crop, ResampleMethod method,
                              int min_cluster, int connectivity);

// Affine taking detection-grid (row, col) pixels onto the registered frame
// of the band behind `footprint`: the footprint corners are pinned to the
// corners of the band's full `full_shape` frame, re-anchored by the crop
// window that survived registration (the full frame under zero fill).
AffineTransform fit_grid_to_frame(const GeoTransform& grid,
                                  const BandFootprint& footprint,
                                  const GridShape& full_shape,
                                  const Window& frame);

// Every intermediate the run produces, so stage outputs can be persisted and
// the end-to-end path stays byte-identical with stage-by-stage execution.
struct PipelineResult {
  GranuleVerdict verdict;
  CoregResult coreg;
  std::vector<BandFootprint> footprints;  // kPipelineBands order
  L1CTile l1c_crop;                       // mosaicked + cropped DN planes
  ReflectanceStack stack;
  MaskImage hotmap;
  std::vector<PixelBox> l1c_boxes;  // on the detection grid
  AffineTransform to_raw;           // detection grid -> reference frame
  WarpOutcome warp;
  // False when the reference footprint missed the mosaic; the stages from
  // detection on never ran and their fields are empty.
  bool reached_detection = false;
};

// Stage order: coregister, georef, mosaic (mosaic + crop), detect (resample +
// hotmap + clustering), warp.  Stage failures rethrow the underlying error
// with the stage name prefixed to the message.  A reference footprint that
// misses the tile mosaic is not an error: the granule is discarded with a
// reason.  All tiles must agree on the quantification scale.
PipelineResult run_pipeline(const Granule& g, const std::vector<L1CTile>& tiles,
                            const ShiftTable& table,
                            const PipelineConfig& config,
                            const std::string& granule_id);

GranuleVerdict classify_useful_granule(const Granule& g,
                                       const std::vector<L1CTile>& tiles,
                                       const ShiftTable& table,
                                       const PipelineConfig& config,
                                       const std::string& granule_id);

// Sidecar text: one `band along across row0 col0 rows cols` line per band of
// `band_set` (the integer correction applied and the surviving window).
void write_applied_shifts(const std::filesystem::path& file,
                          const CoregResult& coreg,
                          const std::vector<Band>& band_set);

// Verdict text: `granule=`, `verdict=`, `reason=` (discarded only),
// `boxes=<count>` then one `box=row0 col0 rows cols active_pixels` line each.
void write_verdict(const std::filesystem::path& file,
                   const GranuleVerdict& verdict);

}  // namespace rawband

#endif  // RAWBAND_PIPELINE_HPP
