// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#include "rawband/hotspot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "text_format.hpp"

namespace rawband {

namespace {

inline bool ratio_at_least(double num, double den, double threshold) {
  return den != 0.0 && num / den >= threshold;
}

}  // namespace

MaskImage compute_hotmap(const ReflectanceStack& stack) {
  const Index rows = stack.r8a.rows();
  const Index cols = stack.r8a.cols();
  if (stack.r11.rows() != rows || stack.r12.rows() != rows ||
      stack.r11.cols() != cols || stack.r12.cols() != cols) {
    throw std::invalid_argument("reflectance planes must share dimensions");
  }
  if (stack.r8a.hasNaN() || stack.r11.hasNaN() || stack.r12.hasNaN()) {
    throw DataError("nan-reflectance",
                    "reflectance stack contains NaN samples");
  }

  MaskImage ab(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const double r8a = stack.r8a(r, c);
      const double r11 = stack.r11(r, c);
      const double r12 = stack.r12(r, c);
      const bool alpha = ratio_at_least(r12, r11, 1.4) &&
                         ratio_at_least(r12, r8a, 1.2) && r12 >= 0.15;
      const bool beta =
          ratio_at_least(r11, r8a, 2.0) && r11 >= 0.5 && r12 >= 0.5;
      ab(r, c) = (alpha || beta) ? 1 : 0;
    }
  }
  const MaskImage sr = surround(ab);

  MaskImage hot(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const double r8a = stack.r8a(r, c);
      const double r11 = stack.r11(r, c);
      const double r12 = stack.r12(r, c);
      const bool saturated =
          (r12 >= 1.2 && r8a <= 1.0) || (r11 >= 1.5 && r8a >= 1.0);
      const bool gamma =
          r12 >= 1.0 && r11 >= 1.0 && r8a >= 0.5 && sr(r, c) != 0;
      hot(r, c) = (ab(r, c) != 0 || saturated || gamma) ? 1 : 0;
    }
  }
  return hot;
}

MaskImage surround(const MaskImage& mask) {
  const Index rows = mask.rows();
  const Index cols = mask.cols();
  MaskImage out = MaskImage::Zero(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      if (!mask(r, c)) continue;
      const Index r0 = std::max<Index>(0, r - 1);
      const Index r1 = std::min<Index>(rows - 1, r + 1);
      const Index c0 = std::max<Index>(0, c - 1);
      const Index c1 = std::min<Index>(cols - 1, c + 1);
      for (Index rr = r0; rr <= r1; ++rr) {
        for (Index cc = c0; cc <= c1; ++cc) out(rr, cc) = 1;
      }
    }
  }
  return out;
}

std::vector<PixelBox> extract_event_boxes(const MaskImage& hotmap,
                                          int min_cluster, int connectivity) {
  if (connectivity != 4 && connectivity != 8) {
    throw std::invalid_argument("connectivity must be 4 or 8");
  }
  if (min_cluster < 1) {
    throw std::invalid_argument("min_cluster must be positive");
  }
  const Index rows = hotmap.rows();
  const Index cols = hotmap.cols();
  Image<std::int32_t> label = Image<std::int32_t>::Zero(rows, cols);
  std::vector<PixelBox> boxes;
  std::vector<std::pair<Index, Index>> stack;

  const int n_off = connectivity == 8 ? 8 : 4;
  const Index dr[8] = {-1, 0, 0, 1, -1, -1, 1, 1};
  const Index dc[8] = {0, -1, 1, 0, -1, 1, -1, 1};

  std::int32_t next = 0;
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      if (!hotmap(r, c) || label(r, c)) continue;
      ++next;
      stack.clear();
      stack.emplace_back(r, c);
      label(r, c) = next;
      Index min_r = r, max_r = r, min_c = c, max_c = c;
      Index count = 0;
      while (!stack.empty()) {
        const auto [cr, cc] = stack.back();
        stack.pop_back();
        ++count;
        min_r = std::min(min_r, cr);
        max_r = std::max(max_r, cr);
        min_c = std::min(min_c, cc);
        max_c = std::max(max_c, cc);
        for (int i = 0; i < n_off; ++i) {
          const Index nr = cr + dr[i];
          const Index nc = cc + dc[i];
          if (nr < 0 || nc < 0 || nr >= rows || nc >= cols) continue;
          if (!hotmap(nr, nc) || label(nr, nc)) continue;
          label(nr, nc) = next;
          stack.emplace_back(nr, nc);
        }
      }
      if (count >= min_cluster) {
        boxes.push_back(PixelBox{min_r, min_c, max_r - min_r + 1,
                                 max_c - min_c + 1, count});
      }
    }
  }
  std::stable_sort(boxes.begin(), boxes.end(),
                   [](const PixelBox& a, const PixelBox& b) {
                     if (a.row0 != b.row0) return a.row0 < b.row0;
                     if (a.col0 != b.col0) return a.col0 < b.col0;
                     if (a.rows != b.rows) return a.rows < b.rows;
                     return a.cols < b.cols;
                   });
  return boxes;
}

void write_boxes(const std::filesystem::path& file,
                 const std::vector<PixelBox>& boxes) {
  auto out = detail::open_out(file);
  for (const PixelBox& b : boxes) {
    out << b.row0 << " " << b.col0 << " " << b.rows << " " << b.cols << " "
        << b.active_pixels << "\n";
  }
  out.close();
  if (!out) {
    throw DataError("write-failed", "short write to " + file.string());
  }
}

std::vector<PixelBox> read_boxes(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw DataError("missing-file", "cannot open " + file.string());
  }
  std::vector<PixelBox> boxes;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const std::string where = file.string() + ":" + std::to_string(lineno);
    auto tok = detail::split_ws(s);
    if (tok.size() != 5) {
      throw DataError("bad-line", where + ": expected 5 integer fields");
    }
    PixelBox b;
    b.row0 = detail::parse_int(tok[0], where);
    b.col0 = detail::parse_int(tok[1], where);
    b.rows = detail::parse_int(tok[2], where);
    b.cols = detail::parse_int(tok[3], where);
    b.active_pixels = detail::parse_int(tok[4], where);
    if (b.rows < 1 || b.cols < 1) {
      throw DataError("bad-box", where + ": box extent must be positive");
    }
    boxes.push_back(b);
  }
  return boxes;
}

}  // namespace rawband
