// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).
//
// Drives the installed `rawband` binary over a synthetic scene written to a
// scratch directory: runs the stage subcommands one by one, runs the
// end-to-end `pipeline` subcommand, and requires their outputs to agree byte
// for byte.  Also spot-checks the exit-code contract (0 ok, 1 usage, 2 bad
// data).  Arguments: <rawband-binary> <data-dir>; the data directory is
// accepted for symmetry with the other test drivers but not needed here (the
// scene ships its own calibration table).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "fixtures.hpp"
#include "rawband/bundle_io.hpp"
#include "rawband/hotspot.hpp"
#include "rawband/l1c.hpp"
#include "rawband/shift_table.hpp"

using namespace rawband;
namespace fs = std::filesystem;

namespace {

int checks_failed = 0;

void expect(bool ok, const std::string& what) {
  if (ok) return;
  ++checks_failed;
  std::printf("[FAIL] %s\n", what.c_str());
}

void require(bool ok, const std::string& what) {
  if (!ok) {
    ++checks_failed;
    throw std::runtime_error(what);
  }
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Exit status of a shell command, with stdout/stderr folded into a log file
// so test output stays one line per check.
int run(const std::string& cmd, const fs::path& log) {
  const std::string full = cmd + " >> \"" + log.string() + "\" 2>&1";
  const int rc = std::system(full.c_str());
  if (rc == -1 || !WIFEXITED(rc)) return -1;
  return WEXITSTATUS(rc);
}

void check_same_bytes(const fs::path& a, const fs::path& b) {
  expect(fs::exists(a), "missing stage output " + a.string());
  expect(fs::exists(b), "missing pipeline output " + b.string());
  if (fs::exists(a) && fs::exists(b)) {
    expect(slurp(a) == slurp(b),
           a.string() + " and " + b.string() + " differ");
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <rawband-binary> <data-dir>\n", argv[0]);
    return 1;
  }
  const std::string rawband_bin = std::string("\"") + argv[1] + "\"";

  const fs::path root = fs::temp_directory_path() / "rawband-cli-test";
  std::error_code ec;
  fs::remove_all(root, ec);
  fs::create_directories(root);
  const fs::path log = root / "commands.log";

  try {
    // -- scene on disk ------------------------------------------------------
    const auto fx =
        fixtures::make_scene(fixtures::SceneEvent::in_footprint, true);
    const fs::path granule_dir = root / "in" / fx.granule_id;
    fs::create_directories(root / "in");
    save_granule_bundle(fx.granule, granule_dir);
    const fs::path tiles_dir = root / "tiles";
    for (const L1CTile& tile : fx.tiles) {
      save_tile_bundle(tile, tiles_dir / tile.tile_id);
    }
    const fs::path table_file = root / "table.txt";
    fx.table.save(table_file);
    const fs::path config_file = root / "config.cfg";
    std::ofstream(config_file) << "shift_table = " << table_file.string()
                               << "\npatch_size = 64\n";
    const std::string with_config = " --config \"" + config_file.string() + "\"";

    // -- stage-by-stage run -------------------------------------------------
    const fs::path stage = root / "stage";
    require(run(rawband_bin + " coregister --in \"" + granule_dir.string() +
                    "\" --out \"" + (stage / "coreg").string() + "\"" +
                    with_config,
                log) == 0,
            "coregister subcommand failed");
    require(run(rawband_bin + " georef --in \"" + granule_dir.string() +
                    "\" --out \"" + (stage / "georef").string() + "\"" +
                    with_config,
                log) == 0,
            "georef subcommand failed");
    const fs::path footprints = stage / "georef" / "footprints.txt";
    require(run(rawband_bin + " mosaic --tiles \"" + tiles_dir.string() +
                    "\" --footprints \"" + footprints.string() +
                    "\" --out \"" + (stage / "mosaic").string() + "\"",
                log) == 0,
            "mosaic subcommand failed");
    const fs::path l1c = stage / "mosaic" / "l1c";
    require(run(rawband_bin + " detect --l1c \"" + l1c.string() +
                    "\" --out \"" + (stage / "detect").string() + "\"" +
                    with_config,
                log) == 0,
            "detect subcommand failed");
    const fs::path l1c_boxes = stage / "detect" / "l1c_boxes.txt";
    require(run(rawband_bin + " warp --in \"" + granule_dir.string() +
                    "\" --footprints \"" + footprints.string() +
                    "\" --l1c \"" + l1c.string() + "\" --boxes \"" +
                    l1c_boxes.string() + "\" --out \"" +
                    (stage / "warp").string() + "\"" + with_config,
                log) == 0,
            "warp subcommand failed");
    require(run(rawband_bin + " patchify --in \"" + granule_dir.string() +
                    "\" --boxes \"" +
                    (stage / "warp" / "raw_boxes.txt").string() +
                    "\" --out \"" + (stage / "patch").string() + "\"" +
                    with_config,
                log) == 0,
            "patchify subcommand failed");

    // -- end-to-end run -----------------------------------------------------
    const fs::path pipe = root / "pipe";
    require(run(rawband_bin + " pipeline --in \"" + granule_dir.string() +
                    "\" --tiles \"" + tiles_dir.string() + "\" --out \"" +
                    pipe.string() + "\"" + with_config,
                log) == 0,
            "pipeline subcommand failed");

    // -- byte-for-byte agreement --------------------------------------------
    check_same_bytes(stage / "coreg" / "applied_shifts.txt",
                     pipe / "applied_shifts.txt");
    for (const char* name :
         {"metadata.txt", "B8A.rawb", "B11.rawb", "B12.rawb"}) {
      check_same_bytes(stage / "coreg" / "registered" / name,
                       pipe / "registered" / name);
      check_same_bytes(stage / "mosaic" / "l1c" / name, pipe / "l1c" / name);
    }
    check_same_bytes(footprints, pipe / "footprints.txt");
    check_same_bytes(l1c_boxes, pipe / "l1c_boxes.txt");
    check_same_bytes(stage / "warp" / "transform.txt",
                     pipe / "transform.txt");
    check_same_bytes(stage / "warp" / "raw_boxes.txt",
                     pipe / "raw_boxes.txt");
    check_same_bytes(stage / "patch" / "labels.txt", pipe / "labels.txt");
    check_same_bytes(stage / "patch" / "stats.txt", pipe / "stats.txt");

    // -- verdict contents ----------------------------------------------------
    const std::string verdict = slurp(pipe / "verdict.txt");
    expect(verdict.find("granule=" + fx.granule_id + "\n") != std::string::npos,
           "verdict.txt does not name the granule");
    expect(verdict.find("verdict=useful\n") != std::string::npos,
           "an in-footprint event must yield verdict=useful");
    const std::vector<PixelBox> raw_boxes =
        read_boxes(pipe / "raw_boxes.txt");
    expect(verdict.find("boxes=" + std::to_string(raw_boxes.size()) + "\n") !=
               std::string::npos,
           "verdict box count disagrees with raw_boxes.txt");
    expect(!raw_boxes.empty(), "expected at least one raw-frame event box");

    // -- a quiet scene is still a clean (exit 0) run -------------------------
    const auto quiet = fixtures::make_scene(fixtures::SceneEvent::none, true);
    const fs::path quiet_dir = root / "in" / quiet.granule_id;
    save_granule_bundle(quiet.granule, quiet_dir);
    const fs::path quiet_tiles = root / "tiles-quiet";
    for (const L1CTile& tile : quiet.tiles) {
      save_tile_bundle(tile, quiet_tiles / tile.tile_id);
    }
    const fs::path quiet_out = root / "pipe-quiet";
    require(run(rawband_bin + " pipeline --in \"" + quiet_dir.string() +
                    "\" --tiles \"" + quiet_tiles.string() + "\" --out \"" +
                    quiet_out.string() + "\"" + with_config,
                log) == 0,
            "pipeline over a quiet scene failed");
    const std::string quiet_verdict = slurp(quiet_out / "verdict.txt");
    expect(quiet_verdict.find("verdict=discarded\n") != std::string::npos,
           "a quiet scene must be discarded");
    expect(quiet_verdict.find("reason=no hot cluster") != std::string::npos,
           "quiet-scene discard reason missing");
    expect(slurp(quiet_out / "stats.txt").find("events=0\n") !=
               std::string::npos,
           "quiet scene should label zero event patches");

    // -- exit-code contract ---------------------------------------------------
    expect(run(rawband_bin + " --help", log) == 0, "--help must exit 0");
    expect(run(rawband_bin, log) == 1,
           "a missing subcommand is a usage error (1)");
    expect(run(rawband_bin + " frobnicate", log) == 1,
           "an unknown subcommand is a usage error (1)");
    expect(run(rawband_bin + " coregister --out x", log) == 1,
           "a missing required flag is a usage error (1)");
    expect(run(rawband_bin + " detect --l1c \"" +
                   (root / "no-such-bundle").string() + "\" --out \"" +
                   (root / "x").string() + "\"",
               log) == 2,
           "a missing input bundle is a data error (2)");
    expect(run(rawband_bin + " coregister --in \"" + granule_dir.string() +
                   "\" --out \"" + (root / "x").string() + "\"",
               log) == 2,
           "a run without a shift table is a data error (2)");
  } catch (const std::exception& e) {
    std::printf("[FAIL] %s\n", e.what());
    std::printf("command log: %s\n", log.string().c_str());
    return 1;
  }

  if (checks_failed != 0) {
    std::printf("%d check(s) failed; command log: %s\n", checks_failed,
                log.string().c_str());
    return 1;
  }
  std::printf("all command-line checks passed\n");
  return 0;
}
