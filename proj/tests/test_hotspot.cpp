// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "rawband/hotspot.hpp"

using namespace rawband;
namespace fs = std::filesystem;

namespace {

ReflectanceStack constant_stack(Index rows, Index cols, double r8a,
                                double r11, double r12) {
  ReflectanceStack s;
  s.r8a = Plane::Constant(rows, cols, r8a);
  s.r11 = Plane::Constant(rows, cols, r11);
  s.r12 = Plane::Constant(rows, cols, r12);
  return s;
}

ReflectanceStack random_stack(Index rows, Index cols, std::uint32_t seed,
                              double hi) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, hi);
  ReflectanceStack s;
  s.r8a.resize(rows, cols);
  s.r11.resize(rows, cols);
  s.r12.resize(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      s.r8a(r, c) = dist(rng);
      s.r11(r, c) = dist(rng);
      s.r12(r, c) = dist(rng);
    }
  }
  return s;
}

MaskImage mask_from(std::initializer_list<std::initializer_list<int>> rows) {
  const Index nr = static_cast<Index>(rows.size());
  const Index nc = static_cast<Index>(rows.begin()->size());
  MaskImage m = MaskImage::Zero(nr, nc);
  Index r = 0;
  for (const auto& row : rows) {
    Index c = 0;
    for (int v : row) m(r, c++) = static_cast<std::uint8_t>(v);
    ++r;
  }
  return m;
}

fs::path temp_dir(const char* tag) {
  const fs::path dir =
      fs::temp_directory_path() / (std::string("rawband-hotspot-") + tag);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("an all-zero stack produces an all-false hotmap") {
  const MaskImage hot = compute_hotmap(constant_stack(6, 7, 0.0, 0.0, 0.0));
  CHECK((hot.array() == 0).all());
}

TEST_CASE("hand-evaluated threshold cases") {
  // First branch: both ratios 1.5 and the absolute floor pass.
  const MaskImage alpha =
      compute_hotmap(constant_stack(2, 2, 0.20, 0.20, 0.30));
  CHECK((alpha.array() == 1).all());

  // Absolute branch: r12 >= 1.2 with a sub-unit r8A.
  const MaskImage s_branch =
      compute_hotmap(constant_stack(2, 2, 0.9, 0.9, 1.3));
  CHECK((s_branch.array() == 1).all());

  // Just below the ratio threshold the first branch stays quiet.
  const MaskImage cold =
      compute_hotmap(constant_stack(2, 2, 0.25, 0.22, 0.30));
  CHECK((cold.array() == 0).all());
}

TEST_CASE("zero denominators never fire a ratio test") {
  // r11 = r8A = 0 kills both ratio branches; r12 large but below the
  // absolute S threshold leaves the pixel cold.
  const MaskImage hot = compute_hotmap(constant_stack(3, 3, 0.0, 0.0, 1.1));
  CHECK((hot.array() == 0).all());
}

TEST_CASE("NaN reflectance is rejected") {
  ReflectanceStack s = constant_stack(4, 4, 0.1, 0.1, 0.1);
  s.r11(2, 3) = std::numeric_limits<double>::quiet_NaN();
  try {
    static_cast<void>(compute_hotmap(s));
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    CHECK(e.code() == "nan-reflectance");
  }

  ReflectanceStack mismatched = constant_stack(4, 4, 0.1, 0.1, 0.1);
  mismatched.r12.resize(4, 5);
  mismatched.r12.setConstant(0.1);
  CHECK_THROWS_AS(static_cast<void>(compute_hotmap(mismatched)),
                  std::invalid_argument);
}

TEST_CASE("gamma only fires next to an alpha/beta pixel") {
  // Center pixel passes alpha; its neighbor holds gamma-level reflectance
  // that needs the dilated seed to turn hot.
  ReflectanceStack s = constant_stack(5, 5, 0.2, 0.2, 0.01);
  s.r12(2, 2) = 0.30;                      // alpha seed
  s.r8a(2, 3) = 0.6;                       // gamma candidate beside it
  s.r11(2, 3) = 1.0;
  s.r12(2, 3) = 1.0;
  s.r8a(0, 0) = 0.6;                       // same candidate far away
  s.r11(0, 0) = 1.0;
  s.r12(0, 0) = 1.0;
  // (0,0) must not fire via the other branches: r12/r11 = 1 < 1.4,
  // r11/r8A = 1.67 < 2, S needs r12 >= 1.2 or r11 >= 1.5.
  const MaskImage hot = compute_hotmap(s);
  CHECK(hot(2, 2) == 1);
  CHECK(hot(2, 3) == 1);
  CHECK(hot(0, 0) == 0);
}

TEST_CASE("surround dilates by one pixel with clamped edges") {
  MaskImage m = MaskImage::Zero(5, 6);
  CHECK((surround(m).array() == 0).all());

  m(2, 3) = 1;
  const MaskImage d = surround(m);
  for (Index r = 0; r < 5; ++r) {
    for (Index c = 0; c < 6; ++c) {
      const bool in_block = r >= 1 && r <= 3 && c >= 2 && c <= 4;
      CHECK(d(r, c) == (in_block ? 1 : 0));
    }
  }

  // A corner seed dilates to the clamped 2x2 block.
  MaskImage corner = MaskImage::Zero(4, 4);
  corner(0, 0) = 1;
  const MaskImage dc = surround(corner);
  Index count = 0;
  for (Index r = 0; r < 4; ++r) {
    for (Index c = 0; c < 4; ++c) {
      if (dc(r, c)) ++count;
    }
  }
  CHECK(count == 4);
  CHECK(dc(0, 0) == 1);
  CHECK(dc(0, 1) == 1);
  CHECK(dc(1, 0) == 1);
  CHECK(dc(1, 1) == 1);
}

TEST_CASE("dilation is extensive and monotone") {
  std::mt19937 rng(5150);
  std::bernoulli_distribution coin(0.3);
  MaskImage a = MaskImage::Zero(16, 18);
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) {
      a(r, c) = coin(rng) ? 1 : 0;
    }
  }
  MaskImage b = a;
  b(7, 7) = 1;
  b(12, 3) = 1;
  const MaskImage da = surround(a);
  const MaskImage db = surround(b);
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) {
      if (a(r, c)) CHECK(da(r, c) == 1);   // extensive
      if (da(r, c)) CHECK(db(r, c) == 1);  // monotone under inclusion
    }
  }
}

TEST_CASE("hotmap equals the scalar re-evaluation on random stacks") {
  for (std::uint32_t seed : {11u, 12u, 13u, 14u}) {
    const ReflectanceStack s = random_stack(24, 31, seed, 2.5);
    const MaskImage hot = compute_hotmap(s);
    for (Index r = 0; r < hot.rows(); ++r) {
      for (Index c = 0; c < hot.cols(); ++c) {
        const bool expect = oracle::hotmap_pixel(s, r, c);
        if ((hot(r, c) != 0) != expect) {
          FAIL("mismatch at (", r, ",", c, ") for seed ", seed);
        }
      }
    }
  }
}

TEST_CASE("boxes keep nine-pixel clusters and drop eight-pixel ones") {
  MaskImage nine = MaskImage::Zero(8, 8);
  nine.block(2, 3, 3, 3).setConstant(1);
  const auto kept = extract_event_boxes(nine, 9);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0] == PixelBox{2, 3, 3, 3, 9});

  MaskImage eight = MaskImage::Zero(2, 4);
  eight.setConstant(1);
  CHECK(extract_event_boxes(eight, 9).empty());
  CHECK(extract_event_boxes(MaskImage::Zero(6, 6), 9).empty());
}

TEST_CASE("diagonal pixels join under 8- but not 4-connectivity") {
  const MaskImage m = mask_from({{1, 0, 0, 0},
                                 {0, 1, 0, 0},
                                 {0, 0, 1, 0},
                                 {0, 0, 0, 1}});
  const auto eight = extract_event_boxes(m, 4, 8);
  REQUIRE(eight.size() == 1);
  CHECK(eight[0] == PixelBox{0, 0, 4, 4, 4});
  CHECK(extract_event_boxes(m, 4, 4).empty());

  const auto singles = extract_event_boxes(m, 1, 4);
  REQUIRE(singles.size() == 4);
  for (Index i = 0; i < 4; ++i) {
    CHECK(singles[static_cast<std::size_t>(i)] == PixelBox{i, i, 1, 1, 1});
  }
}

TEST_CASE("boxes are tight hulls ordered by origin") {
  const MaskImage m = mask_from({{1, 1, 0, 0, 0, 1},
                                 {1, 1, 0, 0, 0, 1},
                                 {0, 0, 0, 0, 0, 1},
                                 {0, 1, 1, 1, 0, 0},
                                 {0, 0, 1, 0, 0, 0}});
  const auto boxes = extract_event_boxes(m, 3);
  REQUIRE(boxes.size() == 3);
  CHECK(boxes[0] == PixelBox{0, 0, 2, 2, 4});
  CHECK(boxes[1] == PixelBox{0, 5, 3, 1, 3});
  CHECK(boxes[2] == PixelBox{3, 1, 2, 3, 4});
}

TEST_CASE("box extraction matches the reference flood fill on random masks") {
  std::mt19937 rng(616);
  std::bernoulli_distribution coin(0.42);
  for (int trial = 0; trial < 200; ++trial) {
    MaskImage m(7, 9);
    for (Index r = 0; r < m.rows(); ++r) {
      for (Index c = 0; c < m.cols(); ++c) {
        m(r, c) = coin(rng) ? 1 : 0;
      }
    }
    for (int connectivity : {4, 8}) {
      for (int min_cluster : {1, 3, 9}) {
        const auto got = extract_event_boxes(m, min_cluster, connectivity);
        const auto want = oracle::components(m, min_cluster, connectivity);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
          CHECK(got[i] == want[i]);
        }
      }
    }
  }
}

TEST_CASE("box extraction validates its knobs") {
  const MaskImage m = MaskImage::Zero(3, 3);
  CHECK_THROWS_AS(static_cast<void>(extract_event_boxes(m, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(extract_event_boxes(m, 9, 6)),
                  std::invalid_argument);
}

TEST_CASE("box files round-trip and reject malformed lines") {
  const fs::path dir = temp_dir("boxes");
  const std::vector<PixelBox> boxes = {{0, 0, 3, 3, 9},
                                       {17, 254, 12, 4, 30},
                                       {1040, 2, 2, 5, 10}};
  const fs::path file = dir / "boxes.txt";
  write_boxes(file, boxes);
  const auto back = read_boxes(file);
  REQUIRE(back.size() == boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    CHECK(back[i] == boxes[i]);
  }

  std::ofstream(dir / "short.txt") << "1 2 3 4\n";
  try {
    static_cast<void>(read_boxes(dir / "short.txt"));
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    CHECK(e.code() == "bad-line");
  }
  CHECK_THROWS_AS(static_cast<void>(read_boxes(dir / "absent.txt")),
                  DataError);

  std::ofstream(dir / "comment.txt") << "# boxes\n\n4 5 6 7 42\n";
  const auto one = read_boxes(dir / "comment.txt");
  REQUIRE(one.size() == 1);
  CHECK(one[0] == PixelBox{4, 5, 6, 7, 42});
  fs::remove_all(dir);
}
