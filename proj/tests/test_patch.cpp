// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rawband/patch.hpp"

using namespace rawband;
namespace fs = std::filesystem;

namespace {

std::vector<Index> column_origins(const std::vector<Window>& windows) {
  std::set<Index> cols;
  for (const Window& w : windows) cols.insert(w.col0);
  return {cols.begin(), cols.end()};
}

fs::path temp_dir(const char* tag) {
  const fs::path dir =
      fs::temp_directory_path() / (std::string("rawband-patch-") + tag);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("stride rounds half away from zero") {
  CHECK(PatchGridSpec{256, 0.25}.stride() == 192);
  CHECK(PatchGridSpec{256, 0.33}.stride() == 172);   // 171.52 rounds up
  CHECK(PatchGridSpec{128, 0.75}.stride() == 32);
  CHECK(PatchGridSpec{5, 0.5}.stride() == 3);        // 2.5 -> 3, not 2
  CHECK(PatchGridSpec{64, 0.0}.stride() == 64);
}

TEST_CASE("grid specs validate their fields") {
  CHECK_THROWS_AS((PatchGridSpec{0, 0.25}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((PatchGridSpec{256, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((PatchGridSpec{256, -0.1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((PatchGridSpec{1, 0.75}.validate()), std::invalid_argument);
  CHECK_NOTHROW((PatchGridSpec{256, 0.0}.validate()));
}

TEST_CASE("a patch the size of the raster yields one window") {
  const auto windows = patch_grid(128, 128, PatchGridSpec{128, 0.0});
  REQUIRE(windows.size() == 1);
  CHECK(windows[0] == Window{0, 0, 128, 128});
}

TEST_CASE("stride-192 columns on a 1296-wide raster snap to the edge") {
  const auto windows = patch_grid(1296, 1296, PatchGridSpec{256, 0.25});
  const std::vector<Index> expect = {0, 192, 384, 576, 768, 960, 1040};
  CHECK(column_origins(windows) == expect);
  CHECK(windows.size() == expect.size() * expect.size());
}

TEST_CASE("zero overlap tiles a divisible raster exactly") {
  const auto windows = patch_grid(512, 512, PatchGridSpec{128, 0.0});
  REQUIRE(windows.size() == 16);
  long long area = 0;
  for (const Window& w : windows) area += w.rows * w.cols;
  CHECK(area == 512 * 512);  // disjoint cover has no double counting
}

TEST_CASE("patch grids cover, stay in bounds and match the enumeration") {
  const Index dims[][2] = {{1152, 1296}, {220, 260}, {130, 131}, {64, 64}};
  const PatchGridSpec specs[] = {{256, 0.25}, {64, 0.25}, {64, 0.33},
                                 {128, 0.5},  {100, 0.75}, {64, 0.0}};
  for (const auto& d : dims) {
    for (const PatchGridSpec& spec : specs) {
      if (spec.size > std::min(d[0], d[1])) {
        CHECK_THROWS_AS(static_cast<void>(patch_grid(d[0], d[1], spec)),
                        DataError);
        continue;
      }
      const auto windows = patch_grid(d[0], d[1], spec);
      const auto rows = oracle::patch_origins(d[0], spec.size, spec.stride());
      const auto cols = oracle::patch_origins(d[1], spec.size, spec.stride());
      REQUIRE(windows.size() == rows.size() * cols.size());
      std::size_t i = 0;
      for (Index r : rows) {
        for (Index c : cols) {
          CHECK(windows[i] == Window{r, c, spec.size, spec.size});
          ++i;
        }
      }
      // Bounds and joint coverage.
      std::vector<bool> covered(static_cast<std::size_t>(d[0] * d[1]), false);
      for (const Window& w : windows) {
        REQUIRE(w.row0 >= 0);
        REQUIRE(w.col0 >= 0);
        REQUIRE(w.row0 + w.rows <= d[0]);
        REQUIRE(w.col0 + w.cols <= d[1]);
        for (Index r = w.row0; r < w.row0 + w.rows; ++r) {
          for (Index c = w.col0; c < w.col0 + w.cols; ++c) {
            covered[static_cast<std::size_t>(r * d[1] + c)] = true;
          }
        }
      }
      CHECK(std::all_of(covered.begin(), covered.end(),
                        [](bool b) { return b; }));
    }
  }
}

TEST_CASE("oversized patches are rejected") {
  try {
    static_cast<void>(patch_grid(100, 300, PatchGridSpec{128, 0.25}));
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    CHECK(e.code() == "patch-too-large");
  }
}

TEST_CASE("labels require strictly more than min_pixels of event area") {
  const std::vector<Window> windows = {{0, 0, 64, 64}, {0, 64, 64, 64}};

  CHECK_FALSE(label_patches(windows, {})[0].event);

  // A 3x2 box holds 6 pixels: 6 > 5 makes the first window an event.
  const std::vector<PixelBox> six = {{10, 10, 3, 2, 6}};
  auto labels = label_patches(windows, six);
  CHECK(labels[0].event);
  CHECK_FALSE(labels[1].event);

  // Five pixels exactly is not an event.
  const std::vector<PixelBox> five = {{10, 10, 5, 1, 5}};
  labels = label_patches(windows, five);
  CHECK_FALSE(labels[0].event);

  // The threshold knob shifts the boundary.
  labels = label_patches(windows, five, 4);
  CHECK(labels[0].event);
  CHECK_THROWS_AS(static_cast<void>(label_patches(windows, five, -1)),
                  std::invalid_argument);
}

TEST_CASE("clipping splits a box's area across windows") {
  const std::vector<Window> windows = {{0, 0, 8, 8}, {0, 8, 8, 8}};
  // 4x4 box straddling the boundary: 8 px in each window.
  const std::vector<PixelBox> boxes = {{2, 6, 4, 4, 16}};
  const auto labels = label_patches(windows, boxes, 5);
  CHECK(labels[0].event);
  CHECK(labels[1].event);
  const auto strict = label_patches(windows, boxes, 8);
  CHECK_FALSE(strict[0].event);
  CHECK_FALSE(strict[1].event);
}

TEST_CASE("overlapping boxes count their union, not their sum") {
  const std::vector<Window> windows = {{0, 0, 16, 16}};
  // Two 2x2 boxes sharing two pixels: union is 6, sum would be 8.
  const std::vector<PixelBox> boxes = {{4, 4, 2, 2, 4}, {4, 5, 2, 2, 4}};
  CHECK(label_patches(windows, boxes, 6)[0].event == false);
  CHECK(label_patches(windows, boxes, 5)[0].event == true);
}

TEST_CASE("label areas agree with the rasterized union on random boxes") {
  std::mt19937 rng(2718);
  std::uniform_int_distribution<Index> origin(0, 30);
  std::uniform_int_distribution<Index> extent(1, 8);
  const std::vector<Window> windows = {
      {0, 0, 16, 16}, {0, 16, 16, 16}, {16, 0, 16, 16}, {8, 8, 16, 16}};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<PixelBox> boxes;
    const int n = static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) {
      PixelBox b;
      b.row0 = origin(rng);
      b.col0 = origin(rng);
      b.rows = extent(rng);
      b.cols = extent(rng);
      b.active_pixels = b.rows * b.cols;
      boxes.push_back(b);
    }
    for (int min_pixels : {0, 3, 10}) {
      const auto labels = label_patches(windows, boxes, min_pixels);
      for (std::size_t w = 0; w < windows.size(); ++w) {
        const long long area = oracle::union_area(boxes, windows[w]);
        CHECK(labels[w].event == (area > min_pixels));
      }
    }
  }
}

TEST_CASE("dataset stats reproduce published proportions") {
  const auto stats_for = [](long long events, long long nonevents) {
    std::vector<PatchLabel> labels;
    labels.reserve(static_cast<std::size_t>(events + nonevents));
    for (long long i = 0; i < events; ++i) {
      labels.push_back({Window{0, 0, 1, 1}, true});
    }
    for (long long i = 0; i < nonevents; ++i) {
      labels.push_back({Window{0, 0, 1, 1}, false});
    }
    return dataset_stats(labels);
  };

  const DatasetStats a = stats_for(1090, 33335);
  CHECK(a.events == 1090);
  CHECK(a.nonevents == 33335);
  CHECK(std::abs(a.proportion - 0.031663) < 5e-6);

  const DatasetStats b = stats_for(2189, 7603);
  CHECK(std::abs(b.proportion - 0.223550) < 5e-6);

  const DatasetStats none = stats_for(0, 12);
  CHECK(none.proportion == 0.0);

  CHECK_THROWS_AS(static_cast<void>(dataset_stats({})), DataError);
}

TEST_CASE("label and stats files carry the expected text") {
  const fs::path dir = temp_dir("io");
  const std::vector<PatchLabel> labels = {{Window{0, 0, 64, 64}, true},
                                          {Window{0, 48, 64, 64}, false}};
  write_labels(dir / "labels.txt", labels);
  CHECK(slurp(dir / "labels.txt") == "0 0 event\n0 48 nonevent\n");

  DatasetStats stats;
  stats.events = 3;
  stats.nonevents = 9;
  stats.proportion = 0.25;
  write_stats(dir / "stats.txt", stats);
  const std::string text = slurp(dir / "stats.txt");
  CHECK_MESSAGE(text.find("events=3") != std::string::npos, text);
  CHECK_MESSAGE(text.find("nonevents=9") != std::string::npos, text);
  CHECK_MESSAGE(text.find("proportion=0.25") != std::string::npos, text);
  fs::remove_all(dir);
}
