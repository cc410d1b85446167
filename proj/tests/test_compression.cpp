#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "share/compression.hpp"

using cd = std::complex<double>;
using share::CombinerPolicy;

namespace {
Eigen::MatrixXcd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::MatrixXcd m(rows, cols);
  share::fill_complex_gaussian(m, rng);
  return m;
}
}  // namespace

TEST_CASE("DFT combiner rows") {
  const auto b1 = share::dft_combiner_bank<double>(4, 1, 3);
  for (int p = 1; p <= 3; ++p) CHECK(b1.w(1, p) == Eigen::VectorXcd::Ones(4));

  const auto b2 = share::dft_combiner_bank<double>(4, 2, 2);
  Eigen::VectorXcd expected(4);
  expected << cd(1, 0), cd(0, -1), cd(-1, 0), cd(0, 1);
  CHECK(b2.w(2, 1) == expected);
  CHECK(b2.w(2, 2) == expected);
  CHECK(b2.dft_rows == std::vector<int>{0, 1});
}

TEST_CASE("full 16-point DFT bank is orthogonal with constant modulus") {
  const auto bank = share::dft_combiner_bank<double>(16, 16, 4);
  for (int p = 1; p <= 4; ++p)
    for (int k = 1; k <= 16; ++k) {
      CHECK((bank.w(k, p).array().abs() - 1.0).abs().maxCoeff() < 1e-12);
      for (int kk = 1; kk <= 16; ++kk) {
        const cd ip = bank.w(k, p).dot(bank.w(kk, p));
        CHECK(std::abs(ip - cd(k == kk ? 16.0 : 0.0, 0)) < 1e-11);
      }
    }
}

TEST_CASE("bank preconditions") {
  CHECK_THROWS_AS(share::dft_combiner_bank<double>(16, 17, 4), std::invalid_argument);
  CHECK_THROWS_AS(share::dft_combiner_bank<double>(16, 0, 4), std::invalid_argument);
  const auto cfg = oracle::reference_array();
  const auto wrong = share::dft_combiner_bank<double>(8, 4, 4);
  CHECK_THROWS_AS(share::phi_matrix(wrong, cfg), std::invalid_argument);
  CHECK_THROWS_AS(share::compress_matrix(wrong, Eigen::MatrixXcd::Zero(64, 3)), std::invalid_argument);
}

TEST_CASE("random policy draws distinct, reproducible DFT rows") {
  const auto a = share::dft_combiner_bank<double>(16, 6, 4, CombinerPolicy::Random, 42);
  const auto b = share::dft_combiner_bank<double>(16, 6, 4, CombinerPolicy::Random, 42);
  CHECK(a.dft_rows == b.dft_rows);
  CHECK(std::set<int>(a.dft_rows.begin(), a.dft_rows.end()).size() == 6);
  for (int r : a.dft_rows) CHECK((r >= 0 && r < 16));
  for (int k = 1; k <= 6; ++k)
    for (int p = 2; p <= 4; ++p) CHECK(a.w(k, p) == a.w(k, 1));
  const auto cfg = oracle::reference_array();
  CHECK(share::has_white_noise_shaping(a, cfg));
}

TEST_CASE("phi matrix layout") {
  SUBCASE("two subarrays of two elements, one instant") {
    const share::ArrayConfig<double> cfg(2, 2, 1.0, 2.0, 1e9);
    const auto bank = share::dft_combiner_bank<double>(2, 1, 2);
    Eigen::MatrixXcd expected(2, 4);
    expected << 1, 1, 0, 0, 0, 0, 1, 1;
    CHECK(share::phi_matrix(bank, cfg) == expected);
  }
  SUBCASE("block structure at full scale") {
    const auto cfg = oracle::reference_array();
    const auto bank = share::dft_combiner_bank<double>(16, 5, 4);
    const auto phi = share::phi_matrix(bank, cfg);
    REQUIRE(phi.rows() == 20);
    REQUIRE(phi.cols() == 64);
    for (int k = 1; k <= 5; ++k)
      for (int p = 1; p <= 4; ++p) {
        const int row = (k - 1) * 4 + (p - 1);
        int nonzeros = 0;
        for (int i = 0; i < 64; ++i) {
          const bool inside = i >= (p - 1) * 16 && i < p * 16;
          if (!inside) CHECK(phi(row, i) == cd(0, 0));
          if (phi(row, i) != cd(0, 0)) ++nonzeros;
        }
        CHECK(nonzeros == 16);
      }
  }
}

TEST_CASE("first-k DFT measurement matrix has Phi Phi^H = M0 I") {
  for (auto [P, M0, K] : {std::tuple{4, 16, 16}, std::tuple{2, 8, 4}, std::tuple{3, 4, 1}}) {
    const share::ArrayConfig<double> cfg(P, M0, 1.0, M0 * 1.5, 1e9);
    const auto bank = share::dft_combiner_bank<double>(M0, K, P);
    const auto phi = share::phi_matrix(bank, cfg);
    const Eigen::MatrixXcd gram = phi * phi.adjoint();
    CHECK((gram - M0 * Eigen::MatrixXcd::Identity(P * K, P * K)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("compress equals dense Phi Y") {
  const auto cfg = oracle::reference_array();
  const auto bank = share::dft_combiner_bank<double>(16, 7, 4);
  const auto phi = share::phi_matrix(bank, cfg);

  share::SnapshotMatrix<double> zero{Eigen::MatrixXcd::Zero(64, 5), share::RowLayout::FullDigital};
  CHECK(share::compress(bank, zero).data.isZero(0.0));

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Eigen::MatrixXcd Y = random_matrix(64, 9, seed);
    share::SnapshotMatrix<double> snap{Y, share::RowLayout::FullDigital};
    const auto fast = share::compress(bank, snap);
    CHECK(fast.layout == share::RowLayout::Compressed);
    const Eigen::MatrixXcd dense = phi * Y;
    CHECK((fast.data - dense).norm() / dense.norm() < 1e-12);
    CHECK_THROWS_AS(share::compress(bank, fast), std::invalid_argument);
  }
}

TEST_CASE("noiseless single-source compression is rank one") {
  const auto cfg = oracle::reference_array();
  const auto bank = share::dft_combiner_bank<double>(16, 16, 4);
  share::Scenario<double> sc{{{-25.0, 3.3}}, 32, std::numeric_limits<double>::infinity(), 4};
  const auto data = share::synthesize(cfg, sc);
  const auto Ytil = share::compress(bank, data.Y);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Ytil.data);
  const auto s = svd.singularValues();
  CHECK(s(0) > 0);
  CHECK(s(1) / s(0) < 1e-12);
}

TEST_CASE("subarray blocks partition the compressed rows losslessly") {
  const auto cfg = oracle::reference_array();
  const auto bank = share::dft_combiner_bank<double>(16, 6, 4);
  const Eigen::MatrixXcd Y = random_matrix(64, 4, 8);
  const Eigen::MatrixXcd Ytil = share::compress_matrix(bank, Y);
  Eigen::MatrixXcd rebuilt(Ytil.rows(), Ytil.cols());
  for (int p = 1; p <= 4; ++p) {
    const auto block = share::subarray_block(bank, Ytil, p);
    // Each block is Phi_p applied to subarray p's element rows.
    const Eigen::MatrixXcd direct = share::subarray_phi(bank, p) * Y.middleRows((p - 1) * 16, 16);
    CHECK((block - direct).norm() < 1e-12 * direct.norm());
    for (int k = 1; k <= 6; ++k) rebuilt.row(bank.row(k, p)) = block.row(k - 1);
  }
  CHECK(rebuilt == Ytil);
}
