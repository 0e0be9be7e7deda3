// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).

#include "rawband/correlate.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "rawband/clahe.hpp"

namespace rawband {

namespace {

// Inclusive-exclusive prefix sums; entry (r, c) covers [0, r) x [0, c).
Plane integral_image(const Plane& img) {
  Plane s = Plane::Zero(img.rows() + 1, img.cols() + 1);
  for (Index r = 0; r < img.rows(); ++r) {
    double row_acc = 0.0;
    for (Index c = 0; c < img.cols(); ++c) {
      row_acc += img(r, c);
      s(r + 1, c + 1) = s(r, c + 1) + row_acc;
    }
  }
  return s;
}

inline double rect_sum(const Plane& s, Index r0, Index c0, Index r1, Index c1) {
  return s(r1, c1) - s(r0, c1) - s(r1, c0) + s(r0, c0);
}

// Smallest 5-smooth number >= n (FFT-friendly sizes).
Index next_fft_size(Index n) {
  while (true) {
    Index m = n;
    for (int p : {2, 3, 5}) {
      while (m % p == 0) m /= p;
    }
    if (m == 1) return n;
    ++n;
  }
}

using ComplexGrid =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;

void fft2_inplace(ComplexGrid& g, bool inverse) {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd buf_in(g.cols()), buf_out(g.cols());
  for (Index r = 0; r < g.rows(); ++r) {
    buf_in = g.row(r).transpose();
    if (inverse) {
      fft.inv(buf_out, buf_in);
    } else {
      fft.fwd(buf_out, buf_in);
    }
    g.row(r) = buf_out.transpose();
  }
  Eigen::VectorXcd col_in(g.rows()), col_out(g.rows());
  for (Index c = 0; c < g.cols(); ++c) {
    col_in = g.col(c);
    if (inverse) {
      fft.inv(col_out, col_in);
    } else {
      fft.fwd(col_out, col_in);
    }
    g.col(c) = col_out;
  }
}

// Full cross-correlation grid: cross(u, v) = sum_(r,c) a(r,c) * b(r+u, c+v),
// valid for |u|, |v| <= max_shift, addressed modulo the padded size.
ComplexGrid fft_cross_correlation(const Plane& a, const Plane& b,
                                  int max_shift) {
  const Index pr = next_fft_size(a.rows() + max_shift);
  const Index pc = next_fft_size(a.cols() + max_shift);
  ComplexGrid fa = ComplexGrid::Zero(pr, pc);
  ComplexGrid fb = ComplexGrid::Zero(pr, pc);
  fa.topLeftCorner(a.rows(), a.cols()) = a.matrix().cast<std::complex<double>>();
  fb.topLeftCorner(b.rows(), b.cols()) = b.matrix().cast<std::complex<double>>();
  fft2_inplace(fa, false);
  fft2_inplace(fb, false);
  fa = fa.conjugate().cwiseProduct(fb);
  fft2_inplace(fa, true);
  return fa;
}

struct Candidate {
  double score = -2.0;
  int u = 0;
  int v = 0;
  bool valid = false;

  void offer(double score_in, int u_in, int v_in) {
    if (valid) {
      if (score_in < score) return;
      if (score_in == score) {
        const long mag_new = long(u_in) * u_in + long(v_in) * v_in;
        const long mag_old = long(u) * u + long(v) * v;
        if (mag_new > mag_old) return;
        if (mag_new == mag_old &&
            (u_in > u || (u_in == u && v_in >= v))) {
          return;
        }
      }
    }
    score = score_in;
    u = u_in;
    v = v_in;
    valid = true;
  }
};

}  // namespace

Eigen::Vector2i estimate_translation(const RawImage& a, const RawImage& b,
                                     int max_shift,
                                     CorrelationBackend backend) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("correlation rasters must share dimensions");
  }
  const Index rows = a.rows();
  const Index cols = a.cols();
  if (max_shift < 1 || 2 * static_cast<Index>(max_shift) >= std::min(rows, cols)) {
    throw std::invalid_argument(
        "max_shift must satisfy 1 <= max_shift < min(dimension)/2");
  }

  const Plane ad = a.cast<double>();
  const Plane bd = b.cast<double>();

  const double n_all = static_cast<double>(rows * cols);
  const Plane sa = integral_image(ad);
  const Plane sb = integral_image(bd);
  const Plane saa = integral_image(ad.square());
  const Plane sbb = integral_image(bd.square());
  const double var_a =
      rect_sum(saa, 0, 0, rows, cols) -
      rect_sum(sa, 0, 0, rows, cols) * rect_sum(sa, 0, 0, rows, cols) / n_all;
  const double var_b =
      rect_sum(sbb, 0, 0, rows, cols) -
      rect_sum(sb, 0, 0, rows, cols) * rect_sum(sb, 0, 0, rows, cols) / n_all;
  if (var_a <= 0.0 || var_b <= 0.0) {
    throw DataError("no-texture",
                    "flat raster has no texture for translation search");
  }

  if (backend == CorrelationBackend::automatic) {
    const double span = 2.0 * max_shift + 1.0;
    const double work = span * span * static_cast<double>(rows * cols);
    backend = work <= 2.0e8 ? CorrelationBackend::direct
                            : CorrelationBackend::fft;
  }

  ComplexGrid cross_grid;
  if (backend == CorrelationBackend::fft) {
    cross_grid = fft_cross_correlation(ad, bd, max_shift);
  }

  Candidate best;
  for (int u = -max_shift; u <= max_shift; ++u) {
    const Index ar0 = u < 0 ? -u : 0;
    const Index ar1 = rows - (u > 0 ? u : 0);
    const Index br0 = ar0 + u;
    const Index br1 = ar1 + u;
    for (int v = -max_shift; v <= max_shift; ++v) {
      const Index ac0 = v < 0 ? -v : 0;
      const Index ac1 = cols - (v > 0 ? v : 0);
      const Index bc0 = ac0 + v;
      const Index bc1 = ac1 + v;
      const double n = static_cast<double>((ar1 - ar0) * (ac1 - ac0));

      double cross;
      if (backend == CorrelationBackend::fft) {
        const Index pu = u >= 0 ? u : u + cross_grid.rows();
        const Index pv = v >= 0 ? v : v + cross_grid.cols();
        cross = cross_grid(pu, pv).real();
      } else {
        cross = (ad.block(ar0, ac0, ar1 - ar0, ac1 - ac0) *
                 bd.block(br0, bc0, br1 - br0, bc1 - bc0))
                    .sum();
      }

      const double suma = rect_sum(sa, ar0, ac0, ar1, ac1);
      const double sumb = rect_sum(sb, br0, bc0, br1, bc1);
      const double sumaa = rect_sum(saa, ar0, ac0, ar1, ac1);
      const double sumbb = rect_sum(sbb, br0, bc0, br1, bc1);
      const double va = sumaa - suma * suma / n;
      const double vb = sumbb - sumb * sumb / n;
      if (va <= 0.0 || vb <= 0.0) continue;  // flat overlap cannot vote
      const double score = (cross - suma * sumb / n) / std::sqrt(va * vb);
      best.offer(score, u, v);
    }
  }
  if (!best.valid) {
    throw DataError("no-texture",
                    "every candidate overlap was flat during the search");
  }
  return {best.u, best.v};
}

ShiftCoefficientSet estimate_shift_coefficients(
    const std::vector<BandPairSample>& samples, const EstimationOptions& opts) {
  if (samples.empty()) {
    throw std::invalid_argument("estimation needs at least one band pair sample");
  }
  std::map<int, std::vector<Eigen::Vector2d>> estimates;
  for (const BandPairSample& s : samples) {
    const int k = ShiftCoefficientSet::pair_index(s.first, s.second);
    if (s.a.rows() != s.b.rows() || s.a.cols() != s.b.cols()) {
      throw DataError("dim-mismatch",
                      "pair sample rasters for " +
                          std::string(band_name(s.first)) + "->" +
                          std::string(band_name(s.second)) +
                          " differ in dimensions");
    }
    const Index mindim = std::min(s.a.rows(), s.a.cols());
    int tile = opts.clahe_tile;
    if (tile <= 0) tile = std::max<int>(2, static_cast<int>(mindim / 8));
    int max_shift = opts.max_shift;
    if (max_shift <= 0) {
      max_shift = std::min<int>(192, static_cast<int>(mindim / 2) - 1);
    }
    if (max_shift < 1) {
      throw DataError("raster-too-small",
                      "pair sample too small for a translation search");
    }
    const RawImage ea = equalize_contrast(s.a, tile, opts.clahe_clip);
    const RawImage eb = equalize_contrast(s.b, tile, opts.clahe_clip);
    // The coefficient is the correction that registers the later band onto
    // the earlier one, i.e. the translation taking `b` onto `a`.
    const Eigen::Vector2i t =
        estimate_translation(eb, ea, max_shift, opts.backend);
    estimates[k].push_back(t.cast<double>());
  }

  ShiftCoefficientSet set;
  for (auto& [k, values] : estimates) {
    std::sort(values.begin(), values.end(),
              [](const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
                return p.x() != q.x() ? p.x() < q.x() : p.y() < q.y();
              });
    Eigen::Vector2d coeff;
    Eigen::Vector2i kept_counts;
    for (int comp = 0; comp < 2; ++comp) {
      const double n = static_cast<double>(values.size());
      double mean = 0.0;
      for (const auto& v : values) mean += v[comp];
      mean /= n;
      double var = 0.0;
      for (const auto& v : values) {
        var += (v[comp] - mean) * (v[comp] - mean);
      }
      const double sigma = std::sqrt(var / n);
      double kept_sum = 0.0;
      int kept = 0;
      for (const auto& v : values) {
        if (std::abs(v[comp] - mean) > 2.0 * sigma) continue;
        kept_sum += v[comp];
        ++kept;
      }
      if (kept == 0) {
        const Band from = kAcquisitionOrder[static_cast<std::size_t>(k)];
        throw DataError("all-outliers",
                        "every estimate rejected for pair starting at " +
                            std::string(band_name(from)));
      }
      coeff[comp] = kept_sum / static_cast<double>(kept);
      kept_counts[comp] = kept;
    }
    const Band from = kAcquisitionOrder[static_cast<std::size_t>(k)];
    const Band to = kAcquisitionOrder[static_cast<std::size_t>(k) + 1];
    set.set(from, to, coeff, kept_counts);
  }
  return set;
}

}  // namespace rawband
