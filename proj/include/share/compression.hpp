#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "share/geometry.hpp"
#include "share/signal.hpp"

namespace share {

enum class CombinerPolicy { FirstK, Random };

inline std::string to_string(CombinerPolicy policy) {
  return policy == CombinerPolicy::FirstK ? "first-k" : "random";
}

// Constant-modulus analog weights w_{k,p}, k = 1..K, p = 1..P, each of
// length M0. Both policies draw distinct rows of the unnormalized M0-point
// DFT matrix and reuse them across subarrays.
template <typename Scalar = double>
struct CombinerBank {
  int K = 0;
  int P = 0;
  int M0 = 0;
  CombinerPolicy policy = CombinerPolicy::FirstK;
  std::uint64_t seed = 0;
  std::vector<int> dft_rows;                  // zero-based DFT row used at instant k
  std::vector<CVector<Scalar>> weights;       // index (k-1)*P + (p-1)

  const CVector<Scalar>& w(int k, int p) const {
    return weights[static_cast<std::size_t>((k - 1) * P + (p - 1))];
  }
  // Row of the compressed data holding instant k of subarray p.
  int row(int k, int p) const { return (k - 1) * P + (p - 1); }
  int rows() const { return P * K; }
};

/// Entry exp(-j 2 pi q / n) with the quarter turns snapped to exact values.
template <typename Scalar>
std::complex<Scalar> unit_root(long long q, int n) {
  q %= n;
  if (q < 0) q += n;
  if ((4 * q) % n == 0) {
    switch ((4 * q) / n) {
      case 0: return {1, 0};
      case 1: return {0, -1};
      case 2: return {-1, 0};
      default: return {0, 1};
    }
  }
  return std::polar(Scalar(1), -Scalar(2) * static_cast<Scalar>(kPi) * Scalar(q) / Scalar(n));
}

template <typename Scalar>
CVector<Scalar> dft_row(int M0, int row) {
  CVector<Scalar> w(M0);
  for (int m = 0; m < M0; ++m) w(m) = unit_root<Scalar>(static_cast<long long>(row) * m, M0);
  return w;
}

template <typename Scalar = double>
CombinerBank<Scalar> dft_combiner_bank(int M0, int K, int P, CombinerPolicy policy = CombinerPolicy::FirstK,
                                       std::uint64_t seed = 0) {
  if (M0 < 1 || P < 1) throw std::invalid_argument("dft_combiner_bank: M0 and P must be >= 1");
  if (K < 1) throw std::invalid_argument("dft_combiner_bank: K must be >= 1");
  if (K > M0) throw std::invalid_argument("dft_combiner_bank: K <= M0 required (K=" + std::to_string(K) +
                                          ", M0=" + std::to_string(M0) + ")");
  CombinerBank<Scalar> bank;
  bank.K = K;
  bank.P = P;
  bank.M0 = M0;
  bank.policy = policy;
  bank.seed = seed;
  std::vector<int> rows(static_cast<std::size_t>(M0));
  std::iota(rows.begin(), rows.end(), 0);
  if (policy == CombinerPolicy::Random) {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < K; ++i) {
      std::uniform_int_distribution<int> pick(i, M0 - 1);
      std::swap(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(pick(rng))]);
    }
  }
  bank.dft_rows.assign(rows.begin(), rows.begin() + K);
  bank.weights.reserve(static_cast<std::size_t>(K * P));
  for (int k = 1; k <= K; ++k) {
    const CVector<Scalar> w = dft_row<Scalar>(M0, bank.dft_rows[static_cast<std::size_t>(k - 1)]);
    for (int p = 1; p <= P; ++p) bank.weights.push_back(w);
  }
  return bank;
}

template <typename Scalar>
void check_bank_matches(const CombinerBank<Scalar>& bank, const ArrayConfig<Scalar>& cfg) {
  if (bank.P != cfg.P() || bank.M0 != cfg.M0())
    throw std::invalid_argument("combiner bank shape (P=" + std::to_string(bank.P) + ", M0=" +
                                std::to_string(bank.M0) + ") does not match array (P=" + std::to_string(cfg.P()) +
                                ", M0=" + std::to_string(cfg.M0()) + ")");
}

/// Dense PK x M measurement matrix: rows (k-1)P + 1 .. kP form the
/// block-diagonal Phi_k with w_{k,p}^T on block p.
template <typename Scalar>
CMatrix<Scalar> phi_matrix(const CombinerBank<Scalar>& bank, const ArrayConfig<Scalar>& cfg) {
  check_bank_matches(bank, cfg);
  CMatrix<Scalar> phi = CMatrix<Scalar>::Zero(bank.rows(), cfg.M());
  for (int k = 1; k <= bank.K; ++k)
    for (int p = 1; p <= bank.P; ++p)
      phi.row(bank.row(k, p)).segment((p - 1) * bank.M0, bank.M0) = bank.w(k, p).transpose();
  return phi;
}

/// K x M0 matrix Phi_p stacking w_{k,p}^T for subarray p.
template <typename Scalar>
CMatrix<Scalar> subarray_phi(const CombinerBank<Scalar>& bank, int p) {
  CMatrix<Scalar> phi(bank.K, bank.M0);
  for (int k = 1; k <= bank.K; ++k) phi.row(k - 1) = bank.w(k, p).transpose();
  return phi;
}

// Block-structured Phi * Y: P*K inner products of length M0 per column.
template <typename Scalar, typename Derived>
CMatrix<Scalar> compress_matrix(const CombinerBank<Scalar>& bank, const Eigen::MatrixBase<Derived>& Y) {
  if (Y.rows() != static_cast<Eigen::Index>(bank.P) * bank.M0)
    throw std::invalid_argument("compress: expected " + std::to_string(bank.P * bank.M0) + " rows, got " +
                                std::to_string(Y.rows()));
  CMatrix<Scalar> out(bank.rows(), Y.cols());
  for (int k = 1; k <= bank.K; ++k)
    for (int p = 1; p <= bank.P; ++p)
      out.row(bank.row(k, p)).noalias() = bank.w(k, p).transpose() * Y.middleRows((p - 1) * bank.M0, bank.M0);
  return out;
}

template <typename Scalar>
SnapshotMatrix<Scalar> compress(const CombinerBank<Scalar>& bank, const SnapshotMatrix<Scalar>& Y) {
  if (Y.layout != RowLayout::FullDigital) throw std::invalid_argument("compress: input is already compressed");
  return {compress_matrix(bank, Y.data), RowLayout::Compressed};
}

/// K x N block of compressed rows belonging to subarray p.
template <typename Scalar>
CMatrix<Scalar> subarray_block(const CombinerBank<Scalar>& bank, const CMatrix<Scalar>& Ytil, int p) {
  if (Ytil.rows() != bank.rows())
    throw std::invalid_argument("subarray_block: expected " + std::to_string(bank.rows()) + " rows, got " +
                                std::to_string(Ytil.rows()));
  CMatrix<Scalar> block(bank.K, Ytil.cols());
  for (int k = 1; k <= bank.K; ++k) block.row(k - 1) = Ytil.row(bank.row(k, p));
  return block;
}

/// True when Phi Phi^H = M0 I, the condition under which compressed noise
/// stays white and no estimator needs whitening.
template <typename Scalar>
bool has_white_noise_shaping(const CombinerBank<Scalar>& bank, const ArrayConfig<Scalar>& cfg, Scalar tol = Scalar(1e-10)) {
  const CMatrix<Scalar> phi = phi_matrix(bank, cfg);
  const CMatrix<Scalar> gram = phi * phi.adjoint();
  const CMatrix<Scalar> target = Scalar(bank.M0) * CMatrix<Scalar>::Identity(bank.rows(), bank.rows());
  return (gram - target).cwiseAbs().maxCoeff() <= tol * Scalar(bank.M0);
}

}  // namespace share
