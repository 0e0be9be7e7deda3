// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#include "rawband/bundle_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "text_format.hpp"

namespace rawband {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'R', 'A', 'W', 'B'};

std::uint32_t read_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u32_le(std::uint32_t v, unsigned char* p) {
  p[0] = static_cast<unsigned char>(v & 0xff);
  p[1] = static_cast<unsigned char>((v >> 8) & 0xff);
  p[2] = static_cast<unsigned char>((v >> 16) & 0xff);
  p[3] = static_cast<unsigned char>((v >> 24) & 0xff);
}

GeoPoint parse_corner(const std::string& val, const std::string& where) {
  auto parts = detail::split_char(val, ',');
  if (parts.size() != 2) {
    throw DataError("bad-corner", where + ": expected '<lat>,<lon>', got '" +
                                      val + "'");
  }
  GeoPoint p;
  p.lat = detail::parse_double(parts[0], where);
  p.lon = detail::parse_double(parts[1], where);
  return p;
}

double cross_z(const GeoPoint& o, const GeoPoint& a, const GeoPoint& b) {
  return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
}

bool segments_cross(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c,
                    const GeoPoint& d) {
  const double d1 = cross_z(a, b, c);
  const double d2 = cross_z(a, b, d);
  const double d3 = cross_z(c, d, a);
  const double d4 = cross_z(c, d, b);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool plausible_iso8601_utc(const std::string& s) {
  // YYYY-MM-DDTHH:MM:SS[.frac]Z -- shape check only, the value is opaque.
  if (s.size() < 20 || s.back() != 'Z') return false;
  const char* pat = "dddd-dd-ddTdd:dd:dd";
  for (int i = 0; i < 19; ++i) {
    if (pat[i] == 'd') {
      if (!std::isdigit(static_cast<unsigned char>(s[static_cast<std::size_t>(i)]))) return false;
    } else if (s[static_cast<std::size_t>(i)] != pat[i]) {
      return false;
    }
  }
  for (std::size_t i = 19; i + 1 < s.size(); ++i) {
    char c = s[i];
    if (i == 19 && c == '.') continue;
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

void validate_metadata(const GranuleMetadata& meta) {
  if (meta.detector < 1 || meta.detector > 12) {
    throw DataError("bad-detector", "detector index " +
                                        std::to_string(meta.detector) +
                                        " outside 1..12");
  }
  if (!plausible_iso8601_utc(meta.sensing_time)) {
    throw DataError("bad-sensing-time",
                    "sensing_time '" + meta.sensing_time +
                        "' is not an ISO-8601 UTC timestamp");
  }
  for (const GeoPoint& p : meta.corners) {
    if (!(p.lat >= -90.0 && p.lat <= 90.0) ||
        !(p.lon >= -180.0 && p.lon <= 180.0) || std::isnan(p.lat) ||
        std::isnan(p.lon)) {
      throw DataError("bad-corner", "corner coordinate (" +
                                        detail::fmt_g17(p.lat) + "," +
                                        detail::fmt_g17(p.lon) +
                                        ") outside valid ranges");
    }
  }
  // Ring order is 0, 1, 3, 2; opposite edges of a simple quadrilateral must
  // not cross.
  const auto& c = meta.corners;
  if (segments_cross(c[0], c[1], c[3], c[2]) ||
      segments_cross(c[1], c[3], c[2], c[0])) {
    throw DataError("corners-not-simple",
                    "corner ring 0,1,3,2 self-intersects");
  }
}

void validate_granule(const Granule& g) {
  validate_metadata(g.meta);
  if (g.bands.empty()) {
    throw DataError("no-bands", "granule holds no band rasters");
  }
  // Finest band anchors the expected dimensions of everything else.
  double finest = 1e9;
  for (const auto& [band, img] : g.bands) {
    (void)img;
    finest = std::min(finest, band_resolution_m(band));
  }
  Index ref_rows = 0;
  Index ref_cols = 0;
  for (const auto& [band, img] : g.bands) {
    if (band_resolution_m(band) == finest) {
      ref_rows = img.rows();
      ref_cols = img.cols();
      break;
    }
  }
  for (const auto& [band, img] : g.bands) {
    if (img.rows() < 1 || img.cols() < 1) {
      throw DataError("empty-band", "band " + std::string(band_name(band)) +
                                        " raster is empty");
    }
    const double ratio = band_resolution_m(band) / finest;
    const Index want_rows = static_cast<Index>(std::llround(
        static_cast<double>(ref_rows) / ratio));
    const Index want_cols = static_cast<Index>(std::llround(
        static_cast<double>(ref_cols) / ratio));
    const bool same_res = band_resolution_m(band) == finest;
    const Index tol = same_res ? 0 : 1;
    if (std::abs(img.rows() - want_rows) > tol ||
        std::abs(img.cols() - want_cols) > tol) {
      throw DataError(
          "dim-mismatch",
          "band " + std::string(band_name(band)) + " is " +
              std::to_string(img.rows()) + "x" + std::to_string(img.cols()) +
              ", expected about " + std::to_string(want_rows) + "x" +
              std::to_string(want_cols) + " from the finest band present");
    }
  }
}

GridShape reference_grid_shape(const Granule& g) {
  if (g.bands.empty()) {
    throw DataError("no-bands", "granule holds no band rasters");
  }
  double finest = 1e9;
  const RawImage* img = nullptr;
  for (const auto& [band, raster] : g.bands) {
    if (band_resolution_m(band) < finest) {
      finest = band_resolution_m(band);
      img = &raster;
    }
  }
  const double scale = finest / 10.0;
  GridShape shape;
  shape.rows = static_cast<Index>(std::llround(static_cast<double>(img->rows()) * scale));
  shape.cols = static_cast<Index>(std::llround(static_cast<double>(img->cols()) * scale));
  return shape;
}

RawImage read_rawb(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw DataError("missing-file", "cannot open " + file.string());
  }
  unsigned char header[16];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (in.gcount() != sizeof(header) ||
      std::memcmp(header, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("bad-magic", file.string() + ": missing RAWB header");
  }
  const std::uint32_t width = read_u32_le(header + 4);
  const std::uint32_t height = read_u32_le(header + 8);
  const std::uint32_t bits = read_u32_le(header + 12);
  if (bits != 16) {
    throw DataError("bad-depth", file.string() + ": bits-per-sample " +
                                     std::to_string(bits) + ", expected 16");
  }
  if (width == 0 || height == 0) {
    throw DataError("bad-dims", file.string() + ": zero raster dimension");
  }
  const std::size_t count = std::size_t(width) * std::size_t(height);
  std::vector<unsigned char> payload(count * 2);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(payload.size()));
  if (static_cast<std::size_t>(in.gcount()) != payload.size()) {
    throw DataError("truncated", file.string() + ": expected " +
                                     std::to_string(payload.size()) +
                                     " sample bytes");
  }
  char extra;
  if (in.read(&extra, 1) && in.gcount() == 1) {
    throw DataError("trailing-bytes",
                    file.string() + ": data past the declared raster");
  }
  RawImage img(static_cast<Index>(height), static_cast<Index>(width));
  const unsigned char* p = payload.data();
  for (Index r = 0; r < img.rows(); ++r) {
    for (Index c = 0; c < img.cols(); ++c, p += 2) {
      img(r, c) = static_cast<std::uint16_t>(p[0] | (p[1] << 8));
    }
  }
  return img;
}

void write_rawb(const fs::path& file, const RawImage& img) {
  if (img.rows() < 1 || img.cols() < 1) {
    throw DataError("bad-dims", file.string() + ": refusing to write an empty raster");
  }
  std::ofstream out(file, std::ios::binary);
  if (!out) {
    throw DataError("write-failed", "cannot open " + file.string());
  }
  unsigned char header[16];
  std::memcpy(header, kMagic, sizeof(kMagic));
  put_u32_le(static_cast<std::uint32_t>(img.cols()), header + 4);
  put_u32_le(static_cast<std::uint32_t>(img.rows()), header + 8);
  put_u32_le(16, header + 12);
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  std::vector<unsigned char> payload;
  payload.reserve(static_cast<std::size_t>(img.size()) * 2);
  for (Index r = 0; r < img.rows(); ++r) {
    for (Index c = 0; c < img.cols(); ++c) {
      const std::uint16_t v = img(r, c);
      payload.push_back(static_cast<unsigned char>(v & 0xff));
      payload.push_back(static_cast<unsigned char>(v >> 8));
    }
  }
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  if (!out) {
    throw DataError("write-failed", "short write to " + file.string());
  }
}

Granule load_granule_bundle(const fs::path& dir) {
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

  Granule g;
  g.meta.satellite = satellite_from_name(take("satellite"));
  g.meta.detector = static_cast<int>(
      detail::parse_int(take("detector"), meta_file.string() + ": detector"));
  g.meta.sensing_time = take("sensing_time");
  for (int i = 0; i < 4; ++i) {
    const std::string key = "corner" + std::to_string(i);
    g.meta.corners[static_cast<std::size_t>(i)] =
        parse_corner(take(key.c_str()), meta_file.string() + ": " + key);
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
    g.bands[b] = read_rawb(f);
  }
  validate_granule(g);
  return g;
}

void save_granule_bundle(const Granule& g, const fs::path& dir) {
  validate_granule(g);
  fs::create_directories(dir);
  auto out = detail::open_out(dir / "metadata.txt");
  out << "satellite=" << satellite_name(g.meta.satellite) << "\n";
  out << "detector=" << g.meta.detector << "\n";
  out << "sensing_time=" << g.meta.sensing_time << "\n";
  for (int i = 0; i < 4; ++i) {
    const GeoPoint& p = g.meta.corners[static_cast<std::size_t>(i)];
    out << "corner" << i << "=" << detail::fmt_g17(p.lat) << ","
        << detail::fmt_g17(p.lon) << "\n";
  }
  out.close();
  for (const auto& [band, img] : g.bands) {
    write_rawb(dir / (std::string(band_name(band)) + ".rawb"), img);
  }
}

}  // namespace rawband
