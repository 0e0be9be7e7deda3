// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).
//
// rawband: command-line driver.  Every pipeline stage is a subcommand that
// reads and writes the library's text/bundle formats, so a stage-by-stage run
// over intermediate files reproduces the end-to-end `pipeline` subcommand
// byte for byte.  Options mirror the config-file keys; a flag given on the
// command line wins over the file value.
//
// Exit codes: 0 success, 1 usage error, 2 bad data, 3 internal failure.

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rawband/bench.hpp"
#include "rawband/bundle_io.hpp"
#include "rawband/coreg.hpp"
#include "rawband/georef.hpp"
#include "rawband/granule.hpp"
#include "rawband/hotspot.hpp"
#include "rawband/l1c.hpp"
#include "rawband/patch.hpp"
#include "rawband/pipeline.hpp"
#include "rawband/shift_table.hpp"
#include "rawband/types.hpp"
#include "rawband/warp.hpp"

namespace fs = std::filesystem;

namespace {

using namespace rawband;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<Band> parse_band_list(const std::string& s) {
  std::vector<Band> bands;
  for (const std::string& tok : split_list(s)) bands.push_back(band_from_name(tok));
  return bands;
}

std::string default_bands() {
  std::string s;
  for (Band b : kPipelineBands) {
    if (!s.empty()) s += ",";
    s += band_name(b);
  }
  return s;
}

// Rejects unknown band ids at parse time so typos are usage errors.
const CLI::Validator kBandList{
    [](std::string& s) -> std::string {
      for (const std::string& tok : split_list(s)) {
        try {
          band_from_name(tok);
        } catch (const DataError&) {
          return "unknown band id '" + tok + "'";
        }
      }
      return {};
    },
    "comma-separated band ids, reference first", "BANDS"};

// Config-file keys exposed as flags.  resolve() layers: defaults, then the
// file named by --config, then any flag the user actually passed.
struct ConfigCli {
  std::string file;
  std::string shift_table;
  std::string fill;
  std::string resample;
  double buffer = 0.0;
  double overlap = 0.0;
  int min_cluster = 0;
  int connectivity = 0;
  int min_pixels = 0;
  int patch_size = 0;

  CLI::Option* shift_table_opt = nullptr;
  CLI::Option* fill_opt = nullptr;
  CLI::Option* resample_opt = nullptr;
  CLI::Option* buffer_opt = nullptr;
  CLI::Option* overlap_opt = nullptr;
  CLI::Option* min_cluster_opt = nullptr;
  CLI::Option* connectivity_opt = nullptr;
  CLI::Option* min_pixels_opt = nullptr;
  CLI::Option* patch_size_opt = nullptr;

  void attach(CLI::App* sub) {
    sub->add_option("--config", file, "key=value config file");
    shift_table_opt = sub->add_option("--shift-table", shift_table,
                                      "shift coefficient table (config key 'shift_table')");
    fill_opt = sub->add_option("--fill", fill, "fill policy after registration (config key 'fill')")
                   ->check(CLI::IsMember({"zero_fill", "crop_to_valid"}));
    buffer_opt = sub->add_option("--buffer", buffer,
                                 "warped-box expansion, pixels per side (config key 'buffer')");
    min_cluster_opt = sub->add_option("--min-cluster", min_cluster,
                                      "smallest hot cluster kept, pixels (config key 'min_cluster')");
    connectivity_opt = sub->add_option("--connectivity", connectivity,
                                       "cluster connectivity (config key 'connectivity')")
                           ->check(CLI::IsMember(std::set<int>{4, 8}));
    min_pixels_opt = sub->add_option("--min-pixels", min_pixels,
                                     "event area a patch must exceed (config key 'min_pixels')");
    patch_size_opt = sub->add_option("--patch-size", patch_size,
                                     "patch edge, pixels (config key 'patch_size')");
    overlap_opt = sub->add_option("--overlap", overlap,
                                  "fractional patch overlap (config key 'overlap')");
    resample_opt = sub->add_option("--resample", resample,
                                   "resampling onto the coarsest grid (config key 'resample')")
                       ->check(CLI::IsMember({"block_mean", "nearest"}));
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (!file.empty()) cfg = parse_pipeline_config(file);
    if (shift_table_opt->count() > 0) cfg.shift_table = shift_table;
    if (fill_opt->count() > 0) {
      cfg.fill = fill == "zero_fill" ? FillPolicy::zero_fill
                                     : FillPolicy::crop_to_valid;
    }
    if (buffer_opt->count() > 0) cfg.buffer = buffer;
    if (min_cluster_opt->count() > 0) cfg.min_cluster = min_cluster;
    if (connectivity_opt->count() > 0) cfg.connectivity = connectivity;
    if (min_pixels_opt->count() > 0) cfg.min_pixels = min_pixels;
    if (patch_size_opt->count() > 0) cfg.patch_size = patch_size;
    if (overlap_opt->count() > 0) cfg.overlap = overlap;
    if (resample_opt->count() > 0) {
      cfg.resample = resample == "nearest" ? ResampleMethod::nearest
                                           : ResampleMethod::block_mean;
    }
    return cfg;
  }
};

ShiftTable load_table(const PipelineConfig& cfg) {
  if (cfg.shift_table.empty()) {
    throw DataError("missing-config",
                    "no shift table given (config key 'shift_table' or --shift-table)");
  }
  return ShiftTable::load(cfg.shift_table);
}

std::string granule_id_of(fs::path in) {
  if (in.filename().empty()) in = in.parent_path();  // trailing slash
  const std::string id = in.filename().string();
  return id.empty() ? in.string() : id;
}

// Every immediate subdirectory holding a metadata.txt, in name order.
std::vector<fs::path> bundle_dirs_under(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw DataError("bad-directory", dir.string() + " is not a directory");
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "metadata.txt")) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

std::vector<L1CTile> load_tiles_dir(const fs::path& dir) {
  std::vector<L1CTile> tiles;
  for (const fs::path& d : bundle_dirs_under(dir)) {
    tiles.push_back(load_tile_bundle(d));
  }
  if (tiles.empty()) {
    throw DataError("no-tiles", "no tile bundles under " + dir.string());
  }
  return tiles;
}

// A single granule bundle, or a directory of them.
std::vector<Granule> load_granules_dir(const fs::path& dir) {
  if (fs::exists(dir / "metadata.txt")) return {load_granule_bundle(dir)};
  std::vector<Granule> granules;
  for (const fs::path& d : bundle_dirs_under(dir)) {
    granules.push_back(load_granule_bundle(d));
  }
  if (granules.empty()) {
    throw DataError("no-granules", "no granule bundles under " + dir.string());
  }
  return granules;
}

const BandFootprint& footprint_of(const std::vector<BandFootprint>& fps,
                                  Band band) {
  for (const BandFootprint& fp : fps) {
    if (fp.band == band) return fp;
  }
  throw DataError("missing-band", "no footprint for band " +
                                      std::string(band_name(band)));
}

PatchGridSpec make_patch_spec(const PipelineConfig& cfg) {
  PatchGridSpec spec{cfg.patch_size, cfg.overlap};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError("bad-value", e.what());
  }
  return spec;
}

std::vector<PixelBox> snap_outcome(const WarpOutcome& outcome,
                                   const std::vector<PixelBox>& grid_boxes) {
  std::vector<PixelBox> out;
  out.reserve(outcome.boxes.size());
  for (std::size_t j = 0; j < outcome.boxes.size(); ++j) {
    out.push_back(snap_to_pixels(outcome.boxes[j],
                                 grid_boxes[outcome.kept[j]].active_pixels));
  }
  return out;
}

// ---- subcommands --------------------------------------------------------

struct CoregisterArgs {
  std::string in, out;
  std::string bands = default_bands();
  ConfigCli cfg;
};

void run_coregister(const CoregisterArgs& args) {
  const PipelineConfig cfg = args.cfg.resolve();
  const std::vector<Band> bands = parse_band_list(args.bands);
  const Granule g = load_granule_bundle(args.in);
  const ShiftTable table = load_table(cfg);
  const ShiftCoefficientSet& coeffs =
      table.lookup(g.meta.satellite, g.meta.detector);
  const CoregResult coreg =
      apply_coarse_coregistration(g, bands, coeffs, cfg.fill);
  fs::create_directories(args.out);
  save_granule_bundle(coreg.granule, fs::path(args.out) / "registered");
  write_applied_shifts(fs::path(args.out) / "applied_shifts.txt", coreg, bands);
  std::cout << "coregister: " << bands.size() << " band(s) -> " << args.out
            << "/registered\n";
}

struct GeorefArgs {
  std::string in, out;
  std::string bands = default_bands();
  ConfigCli cfg;
};

void run_georef(const GeorefArgs& args) {
  const PipelineConfig cfg = args.cfg.resolve();
  const std::vector<Band> bands = parse_band_list(args.bands);
  const Granule g = load_granule_bundle(args.in);
  const ShiftTable table = load_table(cfg);
  const ShiftCoefficientSet& coeffs =
      table.lookup(g.meta.satellite, g.meta.detector);
  const GridShape ref_grid = reference_grid_shape(g);
  std::vector<BandFootprint> footprints;
  for (Band b : bands) {
    auto it = g.bands.find(b);
    if (it == g.bands.end()) {
      throw DataError("missing-band", "granule has no raster for band " +
                                          std::string(band_name(b)));
    }
    footprints.push_back(compute_band_footprint(
        g.meta, coeffs, b, GridShape{it->second.rows(), it->second.cols()},
        ref_grid));
  }
  fs::create_directories(args.out);
  write_footprints(fs::path(args.out) / "footprints.txt", footprints);
  std::cout << "georef: " << footprints.size() << " footprint(s) -> "
            << args.out << "/footprints.txt\n";
}

struct MosaicArgs {
  std::string tiles, footprints, out;
};

void run_mosaic(const MosaicArgs& args) {
  const std::vector<L1CTile> tiles = load_tiles_dir(args.tiles);
  const std::vector<BandFootprint> fps = read_footprints(args.footprints);
  const BandFootprint& ref_fp = footprint_of(fps, kPipelineBands.front());
  const L1CTile crop = mosaic_and_crop(tiles, ref_fp);
  fs::create_directories(args.out);
  save_tile_bundle(crop, fs::path(args.out) / "l1c");
  const auto& first = crop.bands.begin()->second;
  std::cout << "mosaic: " << first.rows() << "x" << first.cols()
            << " crop -> " << args.out << "/l1c\n";
}

struct DetectArgs {
  std::string l1c, out;
  ConfigCli cfg;
};

void run_detect(const DetectArgs& args) {
  const PipelineConfig cfg = args.cfg.resolve();
  const L1CTile crop = load_tile_bundle(args.l1c);
  const DetectionResult det =
      detect_events(crop, cfg.resample, cfg.min_cluster, cfg.connectivity);
  fs::create_directories(args.out);
  write_boxes(fs::path(args.out) / "l1c_boxes.txt", det.boxes);
  std::cout << "detect: " << det.boxes.size() << " event box(es) -> "
            << args.out << "/l1c_boxes.txt\n";
}

struct WarpArgs {
  std::string in, footprints, l1c, boxes, out;
  ConfigCli cfg;
};

void run_warp(const WarpArgs& args) {
  const PipelineConfig cfg = args.cfg.resolve();
  const Granule g = load_granule_bundle(args.in);
  const ShiftTable table = load_table(cfg);
  const ShiftCoefficientSet& coeffs =
      table.lookup(g.meta.satellite, g.meta.detector);
  const std::vector<Band> bands(kPipelineBands.begin(), kPipelineBands.end());
  const CoregResult coreg =
      apply_coarse_coregistration(g, bands, coeffs, cfg.fill);

  const std::vector<BandFootprint> fps = read_footprints(args.footprints);
  const BandFootprint& ref_fp = footprint_of(fps, bands.front());
  const L1CTile crop = load_tile_bundle(args.l1c);
  const std::vector<PixelBox> grid_boxes = read_boxes(args.boxes);

  const RawImage& ref_raster = g.bands.at(bands.front());
  const Window& frame = coreg.windows.at(bands.front());
  const AffineTransform to_raw = fit_grid_to_frame(
      crop.gt, ref_fp, GridShape{ref_raster.rows(), ref_raster.cols()}, frame);

  WarpOptions opts;
  opts.buffer = cfg.buffer;
  opts.manual_offset = cfg.offset_for(granule_id_of(args.in));
  opts.clip = GridShape{frame.rows, frame.cols};
  std::vector<RectD> rects;
  rects.reserve(grid_boxes.size());
  for (const PixelBox& b : grid_boxes) {
    rects.push_back(RectD{static_cast<double>(b.row0),
                          static_cast<double>(b.col0),
                          static_cast<double>(b.rows),
                          static_cast<double>(b.cols)});
  }
  const WarpOutcome outcome = warp_boxes(to_raw, rects, opts);

  fs::create_directories(args.out);
  write_transform(fs::path(args.out) / "transform.txt", to_raw);
  write_boxes(fs::path(args.out) / "raw_boxes.txt",
              snap_outcome(outcome, grid_boxes));
  std::cout << "warp: " << outcome.boxes.size() << " of " << grid_boxes.size()
            << " box(es) kept -> " << args.out << "/raw_boxes.txt\n";
}

struct PatchifyArgs {
  std::string in, boxes, out;
  std::string bands = default_bands();
  long long rows = 0, cols = 0;
  ConfigCli cfg;
};

void run_patchify(const PatchifyArgs& args) {
  const PipelineConfig cfg = args.cfg.resolve();
  Index rows = static_cast<Index>(args.rows);
  Index cols = static_cast<Index>(args.cols);
  if (!args.in.empty()) {
    const std::vector<Band> bands = parse_band_list(args.bands);
    const Granule g = load_granule_bundle(args.in);
    auto it = g.bands.find(bands.front());
    if (it == g.bands.end()) {
      throw DataError("missing-band", "granule has no raster for band " +
                                          std::string(band_name(bands.front())));
    }
    rows = it->second.rows();
    cols = it->second.cols();
  } else if (rows < 1 || cols < 1) {
    throw CLI::ValidationError(
        "patchify", "give --in, or both --rows and --cols");
  }
  const std::vector<PixelBox> boxes = read_boxes(args.boxes);
  const std::vector<Window> windows =
      patch_grid(rows, cols, make_patch_spec(cfg));
  const std::vector<PatchLabel> labels =
      label_patches(windows, boxes, cfg.min_pixels);
  const DatasetStats stats = dataset_stats(labels);
  fs::create_directories(args.out);
  write_labels(fs::path(args.out) / "labels.txt", labels);
  write_stats(fs::path(args.out) / "stats.txt", stats);
  std::cout << "patchify: " << stats.events << " event / " << stats.nonevents
            << " nonevent patch(es) -> " << args.out << "\n";
}

struct BenchArgs {
  std::string in, out;
  std::string bands = default_bands();
  int runs = 3, warmups = 15, max_shift = 192;
  bool noop = false;
  ConfigCli cfg;
};

void run_bench(const BenchArgs& args) {
  const PipelineConfig cfg = args.cfg.resolve();
  const std::vector<Granule> granules = load_granules_dir(args.in);
  const ShiftTable table = load_table(cfg);
  BenchConfig bc;
  bc.band_set = parse_band_list(args.bands);
  bc.runs = args.runs;
  bc.warmups = args.warmups;
  bc.baseline_max_shift = args.max_shift;
  bc.include_noop = args.noop;
  const BenchReport report = benchmark_registration(granules, table, bc);
  std::cout << report.table();
  if (!args.out.empty()) {
    fs::create_directories(args.out);
    const fs::path file = fs::path(args.out) / "bench.txt";
    std::ofstream out(file);
    out << report.table() << "\n" << report.machine_lines();
    out.close();
    if (!out) {
      throw DataError("write-failed", "short write to " + file.string());
    }
  }
}

struct PipelineArgs {
  std::string in, tiles, out;
  ConfigCli cfg;
};

void run_pipeline_cmd(const PipelineArgs& args) {
  const PipelineConfig cfg = args.cfg.resolve();
  const Granule g = load_granule_bundle(args.in);
  const std::vector<L1CTile> tiles = load_tiles_dir(args.tiles);
  const ShiftTable table = load_table(cfg);
  const std::string id = granule_id_of(args.in);

  const PipelineResult res = run_pipeline(g, tiles, table, cfg, id);

  const fs::path out(args.out);
  fs::create_directories(out);
  const std::vector<Band> bands(kPipelineBands.begin(), kPipelineBands.end());
  save_granule_bundle(res.coreg.granule, out / "registered");
  write_applied_shifts(out / "applied_shifts.txt", res.coreg, bands);
  write_footprints(out / "footprints.txt", res.footprints);
  if (res.reached_detection) {
    save_tile_bundle(res.l1c_crop, out / "l1c");
    write_boxes(out / "l1c_boxes.txt", res.l1c_boxes);
    write_transform(out / "transform.txt", res.to_raw);
    const std::vector<PixelBox> raw_boxes =
        snap_outcome(res.warp, res.l1c_boxes);
    write_boxes(out / "raw_boxes.txt", raw_boxes);
    const Window& frame = res.coreg.windows.at(bands.front());
    const std::vector<Window> windows =
        patch_grid(frame.rows, frame.cols, make_patch_spec(cfg));
    const std::vector<PatchLabel> labels =
        label_patches(windows, raw_boxes, cfg.min_pixels);
    write_labels(out / "labels.txt", labels);
    write_stats(out / "stats.txt", dataset_stats(labels));
  }
  write_verdict(out / "verdict.txt", res.verdict);

  std::cout << "granule " << id << ": ";
  if (res.verdict.useful) {
    std::cout << "useful, " << res.verdict.boxes.size() << " box(es)\n";
  } else {
    std::cout << "discarded (" << res.verdict.reason << ")\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "registration, geolocation, event screening and patch extraction for "
      "raw multispectral granules"};
  app.require_subcommand(1);

  CoregisterArgs coreg_args;
  auto* coreg_cmd = app.add_subcommand(
      "coregister", "register a granule's bands onto the reference band");
  coreg_cmd->add_option("--in", coreg_args.in, "granule bundle directory")
      ->required();
  coreg_cmd->add_option("--out", coreg_args.out, "output directory")->required();
  coreg_cmd->add_option("--bands", coreg_args.bands, "band set, reference first")
      ->check(kBandList);
  coreg_args.cfg.attach(coreg_cmd);
  coreg_cmd->callback([&] { run_coregister(coreg_args); });

  GeorefArgs georef_args;
  auto* georef_cmd = app.add_subcommand(
      "georef", "compute per-band footprints from the acquisition corners");
  georef_cmd->add_option("--in", georef_args.in, "granule bundle directory")
      ->required();
  georef_cmd->add_option("--out", georef_args.out, "output directory")->required();
  georef_cmd->add_option("--bands", georef_args.bands, "bands to geolocate")
      ->check(kBandList);
  georef_args.cfg.attach(georef_cmd);
  georef_cmd->callback([&] { run_georef(georef_args); });

  MosaicArgs mosaic_args;
  auto* mosaic_cmd = app.add_subcommand(
      "mosaic", "mosaic tiles and crop them to the reference-band footprint");
  mosaic_cmd->add_option("--tiles", mosaic_args.tiles,
                         "directory of tile bundle directories")
      ->required();
  mosaic_cmd
      ->add_option("--footprints", mosaic_args.footprints,
                   "footprint file from `georef`")
      ->required();
  mosaic_cmd->add_option("--out", mosaic_args.out, "output directory")->required();
  mosaic_cmd->callback([&] { run_mosaic(mosaic_args); });

  DetectArgs detect_args;
  auto* detect_cmd = app.add_subcommand(
      "detect", "screen a mosaicked crop for thermal events");
  detect_cmd->add_option("--l1c", detect_args.l1c,
                         "tile bundle from `mosaic` (the crop)")
      ->required();
  detect_cmd->add_option("--out", detect_args.out, "output directory")->required();
  detect_args.cfg.attach(detect_cmd);
  detect_cmd->callback([&] { run_detect(detect_args); });

  WarpArgs warp_args;
  auto* warp_cmd = app.add_subcommand(
      "warp", "carry detection boxes back onto the registered raw frame");
  warp_cmd->add_option("--in", warp_args.in, "granule bundle directory")
      ->required();
  warp_cmd
      ->add_option("--footprints", warp_args.footprints,
                   "footprint file from `georef`")
      ->required();
  warp_cmd->add_option("--l1c", warp_args.l1c, "tile bundle from `mosaic`")
      ->required();
  warp_cmd->add_option("--boxes", warp_args.boxes, "box file from `detect`")
      ->required();
  warp_cmd->add_option("--out", warp_args.out, "output directory")->required();
  warp_args.cfg.attach(warp_cmd);
  warp_cmd->callback([&] { run_warp(warp_args); });

  PatchifyArgs patch_args;
  auto* patch_cmd = app.add_subcommand(
      "patchify", "tile a frame into patches and label them against boxes");
  patch_cmd->add_option("--in", patch_args.in,
                        "granule bundle whose reference band sets the frame");
  patch_cmd->add_option("--bands", patch_args.bands, "band set, reference first")
      ->check(kBandList);
  patch_cmd->add_option("--rows", patch_args.rows, "frame rows (alternative to --in)");
  patch_cmd->add_option("--cols", patch_args.cols, "frame columns (alternative to --in)");
  patch_cmd->add_option("--boxes", patch_args.boxes, "box file in frame pixels")
      ->required();
  patch_cmd->add_option("--out", patch_args.out, "output directory")->required();
  patch_args.cfg.attach(patch_cmd);
  patch_cmd->callback([&] { run_patchify(patch_args); });

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand(
      "bench", "time table-driven registration against the correlation baseline");
  bench_cmd->add_option("--in", bench_args.in,
                        "granule bundle, or directory of granule bundles")
      ->required();
  bench_cmd->add_option("--out", bench_args.out, "output directory (optional)");
  bench_cmd->add_option("--bands", bench_args.bands, "band set, reference first")
      ->check(kBandList);
  bench_cmd->add_option("--runs", bench_args.runs, "timed passes per method");
  bench_cmd->add_option("--warmups", bench_args.warmups,
                        "untimed passes before the timed ones");
  bench_cmd->add_option("--max-shift", bench_args.max_shift,
                        "search radius of the correlation baseline");
  bench_cmd->add_flag("--noop", bench_args.noop,
                      "also time an empty body (harness overhead)");
  bench_args.cfg.attach(bench_cmd);
  bench_cmd->callback([&] { run_bench(bench_args); });

  PipelineArgs pipeline_args;
  auto* pipeline_cmd = app.add_subcommand(
      "pipeline", "run every stage end-to-end and classify the granule");
  pipeline_cmd->add_option("--in", pipeline_args.in, "granule bundle directory")
      ->required();
  pipeline_cmd->add_option("--tiles", pipeline_args.tiles,
                           "directory of tile bundle directories")
      ->required();
  pipeline_cmd->add_option("--out", pipeline_args.out, "output directory")
      ->required();
  pipeline_args.cfg.attach(pipeline_cmd);
  pipeline_cmd->callback([&] { run_pipeline_cmd(pipeline_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const rawband::DataError& e) {
    std::cerr << "rawband: error (" << e.code() << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rawband: internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
