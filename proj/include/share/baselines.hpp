#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "share/compression.hpp"
#include "share/estimates.hpp"
#include "share/geometry.hpp"
#include "share/omp.hpp"
#include "share/signal.hpp"

namespace share {

/// All (theta, r) cells of a grid, angle-major.
template <typename Scalar>
std::vector<SourceTruth<Scalar>> grid_points(const GridSpec<Scalar>& grid) {
  std::vector<SourceTruth<Scalar>> pts;
  const auto angles = grid.angles();
  const auto ranges = grid.ranges();
  pts.reserve(angles.size() * ranges.size());
  for (Scalar a : angles)
    for (Scalar r : ranges) pts.push_back({a, r});
  return pts;
}

// ---------------------------------------------------------------------------
// 2D-OMP: the shared OMP core run once over the whole angle-range grid.

template <typename Scalar>
Dictionary<Scalar> global_dictionary(const CombinerBank<Scalar>& bank, const ArrayConfig<Scalar>& cfg,
                                     const GridSpec<Scalar>& grid) {
  grid.validate();
  return build_dictionary(bank, cfg, grid.angles(), grid.ranges());
}

template <typename Scalar>
EstimateSet<Scalar> omp_estimate_on(const Dictionary<Scalar>& dict, const CMatrix<Scalar>& Ytil, int L) {
  const OmpResult<Scalar> res = mmv_omp(Ytil, dict, L);
  EstimateSet<Scalar> est;
  for (Eigen::Index g : res.support) est.entries.push_back(dict.labels[static_cast<std::size_t>(g)]);
  est.waveforms = res.S_rows;
  est.residual_norm = res.residual_norm;
  return est;
}

template <typename Scalar>
EstimateSet<Scalar> omp2d_estimate(const CombinerBank<Scalar>& bank, const ArrayConfig<Scalar>& cfg,
                                   const CMatrix<Scalar>& Ytil, const GridSpec<Scalar>& global_grid, int L) {
  return omp_estimate_on(global_dictionary(bank, cfg, global_grid), Ytil, L);
}

// ---------------------------------------------------------------------------
// 2D-MUSIC on fully digital data.

template <typename Scalar = double>
struct MusicSpectrum2D {
  std::vector<Scalar> angles;
  std::vector<Scalar> ranges;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> values;  // G_theta x G_r
};

template <typename Scalar = double>
struct MusicSubspaces {
  RVector<Scalar> eigenvalues;  // ascending
  CMatrix<Scalar> noise;        // M x (M - L)
  CMatrix<Scalar> signal;       // M x L
};

template <typename Scalar>
CMatrix<Scalar> sample_covariance(const CMatrix<Scalar>& Y) {
  if (Y.cols() < 1) throw std::invalid_argument("sample_covariance: need at least one snapshot");
  CMatrix<Scalar> R = (Y * Y.adjoint()) / Scalar(Y.cols());
  // Symmetrize away rounding so the self-adjoint solver sees an exactly Hermitian input.
  R = (R + R.adjoint()).eval() * Scalar(0.5);
  return R;
}

template <typename Scalar>
MusicSubspaces<Scalar> music_subspaces(const CMatrix<Scalar>& Y, int L) {
  const auto M = Y.rows();
  if (L < 1 || L >= M) throw std::invalid_argument("music: L must satisfy 1 <= L < M");
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> eig(sample_covariance(Y));
  if (eig.info() != Eigen::Success) throw std::runtime_error("music: eigendecomposition failed");
  MusicSubspaces<Scalar> out;
  out.eigenvalues = eig.eigenvalues();
  out.noise = eig.eigenvectors().leftCols(M - L);
  out.signal = eig.eigenvectors().rightCols(L);
  return out;
}

/// Columns of A scaled to unit norm.
template <typename Scalar>
CMatrix<Scalar> unit_columns(const CMatrix<Scalar>& A) {
  CMatrix<Scalar> out = A;
  for (Eigen::Index j = 0; j < out.cols(); ++j) out.col(j) /= out.col(j).norm();
  return out;
}

// 1 / ||E_n^H a||^2 per column of the unit-norm manifold; +inf where the
// projection vanishes exactly.
template <typename Scalar>
RVector<Scalar> music_pseudospectrum(const CMatrix<Scalar>& noise_basis, const CMatrix<Scalar>& unit_manifold) {
  const RVector<Scalar> den = (noise_basis.adjoint() * unit_manifold).colwise().squaredNorm().transpose();
  RVector<Scalar> out(den.size());
  for (Eigen::Index i = 0; i < den.size(); ++i)
    out(i) = den(i) > 0 ? Scalar(1) / den(i) : std::numeric_limits<Scalar>::infinity();
  return out;
}

// Greedy 2D peak picking on a row-major (angle, range) grid: 8-neighbour local
// maxima by descending value, lowest flat index on ties, one-cell exclusion;
// remaining slots filled with the largest non-excluded cells.
template <typename Scalar>
std::vector<Eigen::Index> pick_peaks_2d(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& v, int L) {
  const Eigen::Index GA = v.rows(), GR = v.cols();
  const Eigen::Index total = GA * GR;
  auto val = [&](Eigen::Index flat) { return v(flat / GR, flat % GR); };
  std::vector<Eigen::Index> order(static_cast<std::size_t>(total));
  for (Eigen::Index i = 0; i < total; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return val(a) > val(b); });

  auto is_local_max = [&](Eigen::Index flat) {
    const Eigen::Index i = flat / GR, j = flat % GR;
    for (Eigen::Index di = -1; di <= 1; ++di)
      for (Eigen::Index dj = -1; dj <= 1; ++dj) {
        const Eigen::Index a = i + di, b = j + dj;
        if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= GA || b >= GR) continue;
        if (v(a, b) > v(i, j)) return false;
      }
    return true;
  };
  std::vector<bool> blocked(static_cast<std::size_t>(total), false);
  std::vector<Eigen::Index> picks;
  auto accept = [&](Eigen::Index flat) {
    picks.push_back(flat);
    const Eigen::Index i = flat / GR, j = flat % GR;
    for (Eigen::Index a = std::max<Eigen::Index>(0, i - 1); a <= std::min(GA - 1, i + 1); ++a)
      for (Eigen::Index b = std::max<Eigen::Index>(0, j - 1); b <= std::min(GR - 1, j + 1); ++b)
        blocked[static_cast<std::size_t>(a * GR + b)] = true;
  };
  for (Eigen::Index f : order) {
    if (static_cast<int>(picks.size()) == L) break;
    if (!blocked[static_cast<std::size_t>(f)] && is_local_max(f)) accept(f);
  }
  for (Eigen::Index f : order) {
    if (static_cast<int>(picks.size()) == L) break;
    if (!blocked[static_cast<std::size_t>(f)]) accept(f);
  }
  return picks;
}

template <typename Scalar = double>
struct MusicResult {
  EstimateSet<Scalar> estimates;
  MusicSpectrum2D<Scalar> spectrum;
  MusicSubspaces<Scalar> subspaces;
};

/// Precomputed global-grid manifold, reusable across trials.
template <typename Scalar = double>
struct MusicGrid {
  GridSpec<Scalar> grid;
  std::vector<SourceTruth<Scalar>> points;
  CMatrix<Scalar> manifold;       // M x (G_theta G_r), raw steering vectors
  CMatrix<Scalar> unit_manifold;  // same, unit-norm columns
};

template <typename Scalar>
MusicGrid<Scalar> make_music_grid(const ArrayConfig<Scalar>& cfg, const GridSpec<Scalar>& grid) {
  grid.validate();
  MusicGrid<Scalar> mg;
  mg.grid = grid;
  mg.points = grid_points(grid);
  mg.manifold = steering_matrix(cfg, mg.points);
  mg.unit_manifold = unit_columns(mg.manifold);
  return mg;
}

template <typename Scalar>
MusicResult<Scalar> music2d_detailed(const MusicGrid<Scalar>& mg, const CMatrix<Scalar>& Y, int L) {
  if (Y.rows() != mg.manifold.rows()) throw std::invalid_argument("music2d: Y must have M rows");
  MusicResult<Scalar> out;
  out.subspaces = music_subspaces(Y, L);
  const RVector<Scalar> flat = music_pseudospectrum(out.subspaces.noise, mg.unit_manifold);
  if (flat.array().isNaN().any()) throw std::runtime_error("music: pseudo-spectrum contains NaN");
  out.spectrum.angles = mg.grid.angles();
  out.spectrum.ranges = mg.grid.ranges();
  const Eigen::Index GA = mg.grid.G_theta, GR = mg.grid.G_r;
  out.spectrum.values.resize(GA, GR);
  for (Eigen::Index i = 0; i < GA; ++i)
    for (Eigen::Index j = 0; j < GR; ++j) out.spectrum.values(i, j) = flat(i * GR + j);

  const std::vector<Eigen::Index> picks = pick_peaks_2d(out.spectrum.values, L);
  CMatrix<Scalar> As(Y.rows(), static_cast<Eigen::Index>(picks.size()));
  for (std::size_t l = 0; l < picks.size(); ++l) {
    out.estimates.entries.push_back(mg.points[static_cast<std::size_t>(picks[l])]);
    As.col(static_cast<Eigen::Index>(l)) = mg.manifold.col(picks[l]);
  }
  out.estimates.waveforms = As.colPivHouseholderQr().solve(Y);
  out.estimates.residual_norm = (Y - As * out.estimates.waveforms).norm();
  return out;
}

template <typename Scalar>
EstimateSet<Scalar> music2d_estimate(const ArrayConfig<Scalar>& cfg, const CMatrix<Scalar>& Y,
                                     const GridSpec<Scalar>& global_grid, int L) {
  if (L >= cfg.M()) throw std::invalid_argument("music2d: L must be < M");
  return music2d_detailed(make_music_grid(cfg, global_grid), Y, L).estimates;
}

}  // namespace share
