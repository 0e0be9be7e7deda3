// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#include "rawband/georef.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "text_format.hpp"

namespace rawband {

namespace {

constexpr double kKmPerDegreeLat = 111.32;

GeoPoint lerp_plus(const GeoPoint& from, const GeoPoint& to, double f,
                   const GeoPoint& disp) {
  // Convex combination, not from + f*(to-from): at f == 1 the result is `to`
  // bit for bit, which downstream identity checks rely on.
  return GeoPoint{(1.0 - f) * from.lat + f * to.lat + disp.lat,
                  (1.0 - f) * from.lon + f * to.lon + disp.lon};
}

}  // namespace

std::array<GeoPoint, 2> compute_band_prior_coords(
    const GranuleMetadata& meta, const ShiftCoefficientSet& coeffs, Band band,
    const GridShape& ref) {
  if (ref.rows < 1 || ref.cols < 1) {
    throw std::invalid_argument("reference grid must be non-empty");
  }
  const ShiftVector s = compose_shift(coeffs, band, Band::B02);
  const double to_ref = band_resolution_m(band) / band_resolution_m(Band::B02);
  const double along_ref = s.along * to_ref;
  const double across_ref = s.across * to_ref;
  const auto& c = meta.corners;
  if (along_ref == 0.0 && across_ref == 0.0) {
    return {c[0], c[1]};
  }
  const double g_l = static_cast<double>(ref.rows);
  const double g_w = static_cast<double>(ref.cols);
  const GeoPoint track_step{(c[2].lat - c[0].lat) / g_l,
                            (c[2].lon - c[0].lon) / g_l};
  const GeoPoint scan_step{(c[1].lat - c[0].lat) / g_w,
                           (c[1].lon - c[0].lon) / g_w};
  const GeoPoint disp{along_ref * track_step.lat + across_ref * scan_step.lat,
                      along_ref * track_step.lon + across_ref * scan_step.lon};
  return {GeoPoint{c[0].lat + disp.lat, c[0].lon + disp.lon},
          GeoPoint{c[1].lat + disp.lat, c[1].lon + disp.lon}};
}

BandExtent compute_band_extent(const GranuleMetadata& meta, Index band_rows,
                               Index ref_rows, const GeoPoint& pc0,
                               const GeoPoint& pc1) {
  if (ref_rows < 1) {
    throw DataError("bad-grid", "reference length must be positive");
  }
  if (band_rows < 1) {
    throw DataError("bad-grid", "band length must be positive");
  }
  const auto& c = meta.corners;
  const double f =
      static_cast<double>(band_rows) / static_cast<double>(ref_rows);
  const GeoPoint disp_w{pc0.lat - c[0].lat, pc0.lon - c[0].lon};
  const GeoPoint disp_e{pc1.lat - c[1].lat, pc1.lon - c[1].lon};
  BandExtent ext;
  ext.ac0 = lerp_plus(c[0], c[2], f, disp_w);
  ext.ac1 = lerp_plus(c[1], c[3], f, disp_e);
  ext.delta_west = GeoPoint{f * (c[2].lat - c[0].lat), f * (c[2].lon - c[0].lon)};
  ext.delta_east = GeoPoint{f * (c[3].lat - c[1].lat), f * (c[3].lon - c[1].lon)};
  return ext;
}

BandFootprint compute_band_footprint(const GranuleMetadata& meta,
                                     const ShiftCoefficientSet& coeffs,
                                     Band band, const GridShape& band_shape,
                                     const GridShape& ref) {
  const auto pc = compute_band_prior_coords(meta, coeffs, band, ref);
  const BandExtent ext =
      compute_band_extent(meta, band_shape.rows, ref.rows, pc[0], pc[1]);
  BandFootprint fp;
  fp.band = band;
  fp.pc0 = pc[0];
  fp.pc1 = pc[1];
  fp.ac0 = ext.ac0;
  fp.ac1 = ext.ac1;
  return fp;
}

GeoPoint georeference_pixel(const GeoRefModel& model, double row, double col) {
  if (model.rows < 1 || model.cols < 1) {
    throw std::invalid_argument("georeference model has empty dimensions");
  }
  if (!(row >= 0.0) || !(col >= 0.0) ||
      row > static_cast<double>(model.rows - 1) ||
      col > static_cast<double>(model.cols - 1)) {
    throw DataError("pixel-out-of-range",
                    "pixel (" + detail::fmt_g17(row) + "," +
                        detail::fmt_g17(col) + ") outside raster " +
                        std::to_string(model.rows) + "x" +
                        std::to_string(model.cols));
  }
  const double v =
      model.rows == 1 ? 0.0 : row / static_cast<double>(model.rows - 1);
  const double u =
      model.cols == 1 ? 0.0 : col / static_cast<double>(model.cols - 1);
  const BandFootprint& fp = model.footprint;
  const double lat = (1.0 - v) * ((1.0 - u) * fp.pc0.lat + u * fp.pc1.lat) +
                     v * ((1.0 - u) * fp.ac0.lat + u * fp.ac1.lat);
  const double lon = (1.0 - v) * ((1.0 - u) * fp.pc0.lon + u * fp.pc1.lon) +
                     v * ((1.0 - u) * fp.ac0.lon + u * fp.ac1.lon);
  return GeoPoint{lat, lon};
}

std::array<GeoPoint, 4> compute_download_polygon(const GeoPoint& center,
                                                 double east_west_km) {
  if (!(east_west_km > 0.0)) {
    throw std::invalid_argument("east-west extent must be positive");
  }
  if (std::abs(center.lat) > 85.0) {
    throw DataError("polar-center",
                    "polygon center latitude " + detail::fmt_g17(center.lat) +
                        " is poleward of +/-85 degrees");
  }
  const double dlat = 14.0 / kKmPerDegreeLat;
  const double dlon = (east_west_km / 2.0) /
                      (kKmPerDegreeLat *
                       std::cos(center.lat * 3.14159265358979323846 / 180.0));
  const double north = center.lat + dlat;
  const double south = center.lat - dlat;
  const double west = center.lon - dlon;
  const double east = center.lon + dlon;
  return {GeoPoint{north, west}, GeoPoint{north, east}, GeoPoint{south, west},
          GeoPoint{south, east}};
}

void write_footprints(const std::filesystem::path& file,
                      const std::vector<BandFootprint>& footprints) {
  auto out = detail::open_out(file);
  for (const BandFootprint& fp : footprints) {
    out << band_name(fp.band);
    for (const GeoPoint& p : fp.corners()) {
      out << " " << detail::fmt_g17(p.lat) << "," << detail::fmt_g17(p.lon);
    }
    out << "\n";
  }
  out.close();
  if (!out) {
    throw DataError("write-failed", "short write to " + file.string());
  }
}

std::vector<BandFootprint> read_footprints(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw DataError("missing-file", "cannot open " + file.string());
  }
  std::vector<BandFootprint> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const std::string where = file.string() + ":" + std::to_string(lineno);
    auto tok = detail::split_ws(s);
    if (tok.size() != 5) {
      throw DataError("bad-line", where + ": expected band + 4 corners");
    }
    BandFootprint fp;
    fp.band = band_from_name(tok[0]);
    GeoPoint pts[4];
    for (int i = 0; i < 4; ++i) {
      auto parts = detail::split_char(tok[static_cast<std::size_t>(i) + 1], ',');
      if (parts.size() != 2) {
        throw DataError("bad-corner", where + ": corner " + std::to_string(i) +
                                          " is not '<lat>,<lon>'");
      }
      pts[i].lat = detail::parse_double(parts[0], where);
      pts[i].lon = detail::parse_double(parts[1], where);
    }
    fp.pc0 = pts[0];
    fp.pc1 = pts[1];
    fp.ac0 = pts[2];
    fp.ac1 = pts[3];
    out.push_back(fp);
  }
  return out;
}

}  // namespace rawband
