#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "share/compression.hpp"
#include "share/estimates.hpp"
#include "share/geometry.hpp"
#include "share/omp.hpp"
#include "share/signal.hpp"

namespace share {

/// Power spectrum over a 1D angle grid (degrees).
template <typename Scalar = double>
struct Spectrum1D {
  std::vector<Scalar> angles;
  RVector<Scalar> values;

  Eigen::Index size() const { return values.size(); }
};

// Non-coherent Stage-1 spectrum: P_total(theta) = sum_p ||a_sub^H Phi_p^H Y_p||^2.
// Each subarray contributes only a power, so inter-subarray phase is discarded.
template <typename Scalar>
Spectrum1D<Scalar> stage1_spectrum(const CombinerBank<Scalar>& bank, const ArrayConfig<Scalar>& cfg,
                                   const CMatrix<Scalar>& Ytil, const GridSpec<Scalar>& coarse_grid) {
  check_bank_matches(bank, cfg);
  if (Ytil.rows() != bank.rows())
    throw std::invalid_argument("stage1_spectrum: expected " + std::to_string(bank.rows()) + " rows, got " +
                                std::to_string(Ytil.rows()));
  if (!(coarse_grid.theta_min < coarse_grid.theta_max) || coarse_grid.G_theta < 2)
    throw std::invalid_argument("stage1_spectrum: invalid coarse grid");
  Spectrum1D<Scalar> spec;
  spec.angles = coarse_grid.angles();
  const auto G = static_cast<Eigen::Index>(spec.angles.size());
  CMatrix<Scalar> Asub(cfg.M0(), G);
  for (Eigen::Index g = 0; g < G; ++g) Asub.col(g) = farfield_sub_steering(cfg, spec.angles[static_cast<std::size_t>(g)]);

  spec.values = RVector<Scalar>::Zero(G);
  for (int p = 1; p <= bank.P; ++p) {
    const CMatrix<Scalar> beams = subarray_phi(bank, p) * Asub;  // K x G, columns Phi_p a_sub
    const CMatrix<Scalar> proj = beams.adjoint() * subarray_block(bank, Ytil, p);
    spec.values += proj.rowwise().squaredNorm();
  }
  return spec;
}

// Greedy peak picking: local maxima (>= both neighbours) by descending value,
// lowest index on ties, with +-guard_bins excluded around each accepted peak.
// Short of L maxima, the largest remaining non-excluded bins fill in.
template <typename Scalar>
std::vector<Scalar> pick_peaks(const Spectrum1D<Scalar>& spec, int L, int guard_bins) {
  if (spec.size() == 0) throw std::invalid_argument("pick_peaks: empty spectrum");
  if (L < 1) throw std::invalid_argument("pick_peaks: L must be >= 1");
  if (guard_bins < 0) throw std::invalid_argument("pick_peaks: guard_bins must be >= 0");
  const Eigen::Index G = spec.size();
  const auto& v = spec.values;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(G));
  for (Eigen::Index i = 0; i < G; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return v(a) > v(b); });

  auto is_local_max = [&](Eigen::Index i) {
    return (i == 0 || v(i) >= v(i - 1)) && (i == G - 1 || v(i) >= v(i + 1));
  };
  std::vector<bool> blocked(static_cast<std::size_t>(G), false);
  std::vector<Scalar> picks;
  auto accept = [&](Eigen::Index i) {
    picks.push_back(spec.angles[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = std::max<Eigen::Index>(0, i - guard_bins); j <= std::min(G - 1, i + guard_bins); ++j)
      blocked[static_cast<std::size_t>(j)] = true;
  };

  for (Eigen::Index i : order) {
    if (static_cast<int>(picks.size()) == L) break;
    if (!blocked[static_cast<std::size_t>(i)] && is_local_max(i)) accept(i);
  }
  for (Eigen::Index i : order) {
    if (static_cast<int>(picks.size()) == L) break;
    if (!blocked[static_cast<std::size_t>(i)]) accept(i);
  }
  return picks;
}

/// Union of +-delta_theta windows (G_delta points each) around the coarse
/// angles, dropping points outside [clip_min, clip_max]; sorted, unique.
template <typename Scalar>
std::vector<Scalar> refined_angles(const std::vector<Scalar>& coarse_angles, Scalar delta_theta, int G_delta,
                                   Scalar clip_min, Scalar clip_max) {
  if (coarse_angles.empty()) throw std::invalid_argument("refined_angles: no coarse angles");
  if (G_delta < 2) throw std::invalid_argument("refined_angles: G_delta must be >= 2");
  if (!(delta_theta > 0)) throw std::invalid_argument("refined_angles: delta_theta must be > 0");
  std::vector<Scalar> out;
  for (Scalar c : coarse_angles)
    for (Scalar a : linspace(c - delta_theta, c + delta_theta, G_delta))
      if (a >= clip_min && a <= clip_max) out.push_back(a);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw std::invalid_argument("refined_angles: every window lies outside the angle interval");
  return out;
}

template <typename Scalar>
Dictionary<Scalar> build_refined_dictionary(const CombinerBank<Scalar>& bank, const ArrayConfig<Scalar>& cfg,
                                            const std::vector<Scalar>& coarse_angles, Scalar delta_theta,
                                            int G_delta, const GridSpec<Scalar>& range_grid,
                                            Scalar clip_min = Scalar(-90), Scalar clip_max = Scalar(90)) {
  return build_dictionary(bank, cfg, refined_angles(coarse_angles, delta_theta, G_delta, clip_min, clip_max),
                          range_grid.ranges());
}

template <typename Scalar = double>
struct ShareParams {
  GridSpec<Scalar> coarse_grid{Scalar(-60), Scalar(60), 41, Scalar(1), Scalar(9), 64};
  int guard_bins = 1;
  Scalar delta_theta = Scalar(3);
  int G_delta = 14;
  GridSpec<Scalar> range_grid{Scalar(-60), Scalar(60), 121, Scalar(1), Scalar(9), 64};
  int L = 1;
};

template <typename Scalar = double>
struct ShareResult {
  EstimateSet<Scalar> estimates;
  Spectrum1D<Scalar> spectrum;
  std::vector<Scalar> coarse_angles;
  Eigen::Index dictionary_size = 0;
  OmpResult<Scalar> omp;
};

template <typename Scalar>
ShareResult<Scalar> share_estimate_detailed(const CombinerBank<Scalar>& bank, const ArrayConfig<Scalar>& cfg,
                                            const CMatrix<Scalar>& Ytil, const ShareParams<Scalar>& params) {
  ShareResult<Scalar> out;
  out.spectrum = stage1_spectrum(bank, cfg, Ytil, params.coarse_grid);
  out.coarse_angles = pick_peaks(out.spectrum, params.L, params.guard_bins);
  const Dictionary<Scalar> dict =
      build_refined_dictionary(bank, cfg, out.coarse_angles, params.delta_theta, params.G_delta, params.range_grid,
                               params.coarse_grid.theta_min, params.coarse_grid.theta_max);
  out.dictionary_size = dict.size();
  out.omp = mmv_omp(Ytil, dict, params.L);
  for (Eigen::Index g : out.omp.support) out.estimates.entries.push_back(dict.labels[static_cast<std::size_t>(g)]);
  out.estimates.waveforms = out.omp.S_rows;
  out.estimates.residual_norm = out.omp.residual_norm;
  return out;
}

template <typename Scalar>
EstimateSet<Scalar> share_estimate(const CombinerBank<Scalar>& bank, const ArrayConfig<Scalar>& cfg,
                                   const CMatrix<Scalar>& Ytil, const ShareParams<Scalar>& params) {
  return share_estimate_detailed(bank, cfg, Ytil, params).estimates;
}

}  // namespace share
