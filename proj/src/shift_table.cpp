// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#include "rawband/shift_table.hpp"

#include <fstream>
#include <stdexcept>
#include <tuple>

#include "text_format.hpp"

namespace rawband {

int ShiftCoefficientSet::pair_index(Band from, Band to) {
  const int i = acquisition_index(from);
  const int j = acquisition_index(to);
  if (j != i + 1) {
    throw DataError("not-adjacent",
                    "bands " + std::string(band_name(from)) + " and " +
                        std::string(band_name(to)) +
                        " are not adjacent in acquisition order");
  }
  return i;
}

void ShiftCoefficientSet::set(Band from, Band to, const Eigen::Vector2d& coeff,
                              const Eigen::Vector2i& samples) {
  const int k = pair_index(from, to);
  coeff_[static_cast<std::size_t>(k)] = coeff;
  samples_[static_cast<std::size_t>(k)] = samples;
}

const std::optional<Eigen::Vector2d>& ShiftCoefficientSet::coefficient(
    int pair_index) const {
  if (pair_index < 0 || pair_index >= kPairs) {
    throw std::invalid_argument("pair index outside 0..11");
  }
  return coeff_[static_cast<std::size_t>(pair_index)];
}

const Eigen::Vector2i& ShiftCoefficientSet::sample_count(int pair_index) const {
  if (pair_index < 0 || pair_index >= kPairs) {
    throw std::invalid_argument("pair index outside 0..11");
  }
  return samples_[static_cast<std::size_t>(pair_index)];
}

ShiftVector compose_shift(const ShiftCoefficientSet& set, Band n, Band m) {
  const int i = acquisition_index(n);
  const int j = acquisition_index(m);
  const double res_n = band_resolution_m(n);
  if (i == j) return ShiftVector{0.0, 0.0, res_n};
  if (i < j) {
    const ShiftVector fwd = compose_shift(set, m, n);
    const double scale = band_resolution_m(m) / res_n;
    return ShiftVector{-fwd.along * scale, -fwd.across * scale, res_n};
  }
  double along = 0.0;
  double across = 0.0;
  for (int k = j; k < i; ++k) {
    const auto& c = set.coefficient(k);
    if (!c) {
      const Band from = kAcquisitionOrder[static_cast<std::size_t>(k)];
      const Band to = kAcquisitionOrder[static_cast<std::size_t>(k) + 1];
      throw DataError("missing-coefficient",
                      "no coefficient for adjacent pair " +
                          std::string(band_name(from)) + "->" +
                          std::string(band_name(to)));
    }
    const double res_k =
        band_resolution_m(kAcquisitionOrder[static_cast<std::size_t>(k)]);
    along += (c->x() * res_k) / res_n;
    across += (c->y() * res_k) / res_n;
  }
  return ShiftVector{along, across, res_n};
}

ShiftVector lookup_shift(const ShiftTable& table, Satellite sat, int detector,
                         Band n, Band m) {
  return compose_shift(table.lookup(sat, detector), n, m);
}

const ShiftCoefficientSet& ShiftTable::lookup(Satellite sat,
                                              int detector) const {
  auto it = sets_.find({sat, detector});
  if (it == sets_.end()) {
    throw DataError("missing-detector",
                    "no calibration for " +
                        std::string(satellite_name(sat)) + " detector " +
                        std::to_string(detector));
  }
  return it->second;
}

ShiftCoefficientSet& ShiftTable::emplace(Satellite sat, int detector) {
  if (detector < 1 || detector > 12) {
    throw DataError("bad-detector",
                    "detector index " + std::to_string(detector) +
                        " outside 1..12");
  }
  return sets_[{sat, detector}];
}

bool ShiftTable::contains(Satellite sat, int detector) const {
  return sets_.count({sat, detector}) != 0;
}

ShiftTable ShiftTable::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw DataError("missing-file", "cannot open " + file.string());
  }
  ShiftTable table;
  std::map<std::tuple<Satellite, int, int>, bool> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const std::string where = file.string() + ":" + std::to_string(lineno);
    auto tok = detail::split_ws(s);
    if (tok.size() != 7) {
      throw DataError("bad-line", where + ": expected 7 fields, got " +
                                      std::to_string(tok.size()));
    }
    const Satellite sat = satellite_from_name(tok[0]);
    const int det = static_cast<int>(detail::parse_int(tok[1], where));
    if (det < 1 || det > 12) {
      throw DataError("bad-detector", where + ": detector outside 1..12");
    }
    const Band from = band_from_name(tok[2]);
    const Band to = band_from_name(tok[3]);
    const int k = ShiftCoefficientSet::pair_index(from, to);  // adjacency check
    const double along = detail::parse_double(tok[4], where);
    const double across = detail::parse_double(tok[5], where);
    const double res = detail::parse_double(tok[6], where);
    if (res != band_resolution_m(from)) {
      throw DataError("resolution-mismatch",
                      where + ": coefficient resolution " +
                          detail::fmt_g17(res) + " != native resolution of " +
                          std::string(band_name(from)));
    }
    if (!seen.emplace(std::make_tuple(sat, det, k), true).second) {
      throw DataError("duplicate-coefficient",
                      where + ": pair listed twice for this detector");
    }
    table.emplace(sat, det).set(from, to, {along, across});
  }
  return table;
}

void ShiftTable::save(const std::filesystem::path& file) const {
  auto out = detail::open_out(file);
  out << "# satellite detector band_from band_to along across resolution\n";
  for (const auto& [key, set] : sets_) {
    for (int k = 0; k < ShiftCoefficientSet::kPairs; ++k) {
      const auto& c = set.coefficient(k);
      if (!c) continue;
      const Band from = kAcquisitionOrder[static_cast<std::size_t>(k)];
      const Band to = kAcquisitionOrder[static_cast<std::size_t>(k) + 1];
      out << satellite_name(key.first) << " " << key.second << " "
          << band_name(from) << " " << band_name(to) << " "
          << detail::fmt_g17(c->x()) << " " << detail::fmt_g17(c->y()) << " "
          << detail::fmt_g17(band_resolution_m(from)) << "\n";
    }
  }
  out.close();
  if (!out) {
    throw DataError("write-failed", "short write to " + file.string());
  }
}

}  // namespace rawband
