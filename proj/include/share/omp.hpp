#pragma once

#include <algorithm>
#include <iostream>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "share/compression.hpp"
#include "share/geometry.hpp"
#include "share/signal.hpp"

namespace share {

/// Labeled matrix of compressed steering atoms Phi a(theta, r).
template <typename Scalar = double>
struct Dictionary {
  CMatrix<Scalar> atoms;
  std::vector<SourceTruth<Scalar>> labels;
  RVector<Scalar> norms;

  Eigen::Index size() const { return atoms.cols(); }
};

/// Angle-major (theta outer, range inner) dictionary over the given points.
/// Duplicate angles (exact binary equality) are dropped keeping the first.
template <typename Scalar>
Dictionary<Scalar> build_dictionary(const CombinerBank<Scalar>& bank, const ArrayConfig<Scalar>& cfg,
                                    const std::vector<Scalar>& angles, const std::vector<Scalar>& ranges) {
  check_bank_matches(bank, cfg);
  if (angles.empty() || ranges.empty()) throw std::invalid_argument("build_dictionary: empty grid");
  std::vector<Scalar> unique_angles;
  std::set<Scalar> seen;
  for (Scalar a : angles)
    if (seen.insert(a).second) unique_angles.push_back(a);

  Dictionary<Scalar> dict;
  dict.labels.reserve(unique_angles.size() * ranges.size());
  for (Scalar a : unique_angles)
    for (Scalar r : ranges) dict.labels.push_back({a, r});
  const CMatrix<Scalar> A = steering_matrix(cfg, dict.labels);
  dict.atoms = compress_matrix(bank, A);
  dict.norms = dict.atoms.colwise().norm().transpose();
  for (Eigen::Index g = 0; g < dict.norms.size(); ++g)
    if (!(dict.norms(g) > 0)) throw std::invalid_argument("build_dictionary: zero-norm atom");
  return dict;
}

template <typename Scalar = double>
struct OmpResult {
  std::vector<Eigen::Index> support;
  CMatrix<Scalar> S_rows;                 // |support| x N least-squares rows
  Scalar residual_norm = Scalar(0);
  std::vector<Scalar> residual_history;   // ||R||_F after each iteration, starting with ||Y||_F
  int skipped_atoms = 0;
};

// Normalized correlation ||psi_g^H R||_2 / ||psi_g||_2 for every atom.
template <typename Scalar>
RVector<Scalar> omp_scores(const Dictionary<Scalar>& dict, const CMatrix<Scalar>& R) {
  const CMatrix<Scalar> corr = dict.atoms.adjoint() * R;
  return corr.rowwise().norm().cwiseQuotient(dict.norms);
}

// Simultaneous OMP for the multiple-measurement model: exactly L iterations,
// joint least-squares refit after every selection. Atoms numerically in the
// span of the current selection are skipped in favour of the next best.
template <typename Scalar>
OmpResult<Scalar> mmv_omp(const CMatrix<Scalar>& Ytil, const Dictionary<Scalar>& dict, int L) {
  if (L < 1) throw std::invalid_argument("mmv_omp: L must be >= 1");
  if (L > dict.size())
    throw std::invalid_argument("mmv_omp: L=" + std::to_string(L) + " exceeds dictionary size " +
                                std::to_string(dict.size()));
  if (Ytil.rows() != dict.atoms.rows()) throw std::invalid_argument("mmv_omp: row count mismatch");

  const Scalar rank_tol = Scalar(1e-10);
  const Eigen::Index rows = Ytil.rows();
  OmpResult<Scalar> out;
  CMatrix<Scalar> Q(rows, 0);  // orthonormal basis of the selected atoms
  CMatrix<Scalar> R = Ytil;
  out.residual_history.push_back(R.norm());
  std::vector<bool> excluded(static_cast<std::size_t>(dict.size()), false);

  while (static_cast<int>(out.support.size()) < L) {
    const RVector<Scalar> scores = omp_scores(dict, R);
    Eigen::Index best = -1;
    for (Eigen::Index g = 0; g < scores.size(); ++g) {
      if (excluded[static_cast<std::size_t>(g)]) continue;
      if (best < 0 || scores(g) > scores(best)) best = g;
    }
    if (best < 0) throw std::runtime_error("mmv_omp: no admissible atom left");
    excluded[static_cast<std::size_t>(best)] = true;

    // Two passes of Gram-Schmidt against the current basis.
    CVector<Scalar> q = dict.atoms.col(best);
    for (int pass = 0; pass < 2; ++pass)
      if (Q.cols() > 0) q -= Q * (Q.adjoint() * q);
    const Scalar qn = q.norm();
    if (!(qn > rank_tol * dict.norms(best))) {
      ++out.skipped_atoms;
      std::clog << "mmv_omp: skipping atom " << best << " (linearly dependent on selection)\n";
      continue;
    }
    Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
    Q.col(Q.cols() - 1) = q / qn;
    out.support.push_back(best);
    R = Ytil - Q * (Q.adjoint() * Ytil);
    out.residual_history.push_back(R.norm());
  }

  CMatrix<Scalar> Psi(rows, static_cast<Eigen::Index>(out.support.size()));
  for (std::size_t i = 0; i < out.support.size(); ++i) Psi.col(static_cast<Eigen::Index>(i)) = dict.atoms.col(out.support[i]);
  out.S_rows = Psi.colPivHouseholderQr().solve(Ytil);
  out.residual_norm = (Ytil - Psi * out.S_rows).norm();
  return out;
}

}  // namespace share
