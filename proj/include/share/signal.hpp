#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "share/geometry.hpp"

namespace share {

// Angles are azimuth in degrees measured from array broadside (the +y axis),
// positive toward +x. Ranges are meters from the reference element s_{1,0}.
template <typename Scalar = double>
struct SourceTruth {
  Scalar theta;
  Scalar r;
};

/// Cartesian position of a source in the x-y plane.
template <typename Scalar>
Vector3<Scalar> source_position(Scalar theta_deg, Scalar r) {
  const Scalar t = deg2rad(theta_deg);
  return Vector3<Scalar>(r * std::sin(t), r * std::cos(t), Scalar(0));
}

template <typename Scalar = double>
struct Scenario {
  std::vector<SourceTruth<Scalar>> sources;
  int N = 32;
  // +infinity disables the noise term.
  Scalar snr_db = Scalar(20);
  std::uint64_t seed = 0;

  int L() const { return static_cast<int>(sources.size()); }
  bool noiseless() const { return std::isinf(snr_db) && snr_db > 0; }

  void validate(const ArrayConfig<Scalar>& cfg) const {
    if (sources.empty()) throw std::invalid_argument("Scenario: at least one source required");
    if (N < 1) throw std::invalid_argument("Scenario: N must be >= 1");
    if (L() > cfg.M()) throw std::invalid_argument("Scenario: L must be <= M");
    for (const auto& s : sources) {
      if (!(s.r > 0)) throw std::invalid_argument("Scenario: source range must be > 0");
      if (!(s.theta > Scalar(-90) && s.theta < Scalar(90)))
        throw std::invalid_argument("Scenario: source angle must lie in (-90, 90) degrees");
    }
  }
};

enum class RowLayout { FullDigital, Compressed };

/// Snapshot data: M x N element samples or PK x N combiner outputs, row
/// (k, p) at index (k-1)*P + (p-1).
template <typename Scalar = double>
struct SnapshotMatrix {
  CMatrix<Scalar> data;
  RowLayout layout = RowLayout::FullDigital;

  Eigen::Index rows() const { return data.rows(); }
  Eigen::Index cols() const { return data.cols(); }
};

// Distance from each element to the source minus r, computed as
// (x^2 - 2 x r sin(theta)) / (|s_i - s| + r) to stay accurate for r >> D.
template <typename Scalar>
RVector<Scalar> path_difference(const RVector<Scalar>& x, Scalar theta_deg, Scalar r, RVector<Scalar>* dist = nullptr) {
  const Scalar u = std::sin(deg2rad(theta_deg));
  RVector<Scalar> diff(x.size());
  if (dist) dist->resize(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar num = x(i) * x(i) - Scalar(2) * x(i) * r * u;
    const Scalar ri = std::sqrt(r * r + num);
    diff(i) = num / (ri + r);
    if (dist) (*dist)(i) = ri;
  }
  return diff;
}

template <typename Scalar>
CVector<Scalar> nearfield_steering(const ArrayConfig<Scalar>& cfg, Scalar theta_deg, Scalar r) {
  if (!(r > 0)) throw std::domain_error("nearfield_steering: range must be > 0");
  const RVector<Scalar> x = element_x(cfg);
  RVector<Scalar> dist;
  const RVector<Scalar> diff = path_difference(x, theta_deg, r, &dist);
  const Scalar k = Scalar(2) * static_cast<Scalar>(kPi) / cfg.lambda();
  CVector<Scalar> a(cfg.M());
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = std::polar(r / dist(i), -k * diff(i));
  return a;
}

/// Manifold matrix with one steering column per (theta, r) label.
template <typename Scalar>
CMatrix<Scalar> steering_matrix(const ArrayConfig<Scalar>& cfg, const std::vector<SourceTruth<Scalar>>& points) {
  CMatrix<Scalar> A(cfg.M(), static_cast<Eigen::Index>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j)
    A.col(static_cast<Eigen::Index>(j)) = nearfield_steering(cfg, points[j].theta, points[j].r);
  return A;
}

// Range-independent plane-wave response of one subarray.
template <typename Scalar>
CVector<Scalar> farfield_sub_steering(const ArrayConfig<Scalar>& cfg, Scalar theta_deg) {
  const Scalar step = Scalar(2) * static_cast<Scalar>(kPi) / cfg.lambda() * cfg.d() * std::sin(deg2rad(theta_deg));
  CVector<Scalar> a(cfg.M0());
  for (int m = 0; m < cfg.M0(); ++m) a(m) = std::polar(Scalar(1), step * Scalar(m));
  return a;
}

template <typename Scalar>
Scalar noise_variance(Scalar snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return Scalar(0);
  return std::pow(Scalar(10), -snr_db / Scalar(10));
}

/// Fills `out` with i.i.d. circular complex Gaussian entries of unit power,
/// column by column.
template <typename Scalar, typename Rng>
void fill_complex_gaussian(CMatrix<Scalar>& out, Rng& rng) {
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(2));
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      const Scalar re = normal(rng);
      const Scalar im = normal(rng);
      out(i, j) = std::complex<Scalar>(re * scale, im * scale);
    }
}

template <typename Scalar = double>
struct SynthesizedData {
  SnapshotMatrix<Scalar> Y;
  CMatrix<Scalar> X;
  CMatrix<Scalar> A;
};

// Y = A X + V with unit-power Gaussian waveforms and white noise of variance
// 10^(-snr/10). Draw order is X then V from one mt19937_64 stream; the noise
// is always drawn so that X and V do not depend on the SNR.
template <typename Scalar>
SynthesizedData<Scalar> synthesize(const ArrayConfig<Scalar>& cfg, const Scenario<Scalar>& sc) {
  sc.validate(cfg);
  std::mt19937_64 rng(sc.seed);
  SynthesizedData<Scalar> out;
  out.A = steering_matrix(cfg, sc.sources);
  out.X.resize(sc.L(), sc.N);
  fill_complex_gaussian(out.X, rng);
  CMatrix<Scalar> V(cfg.M(), sc.N);
  fill_complex_gaussian(V, rng);
  out.Y.layout = RowLayout::FullDigital;
  out.Y.data = out.A * out.X;
  const Scalar sigma2 = noise_variance(sc.snr_db);
  if (sigma2 > 0) out.Y.data += std::sqrt(sigma2) * V;
  return out;
}

struct FresnelCheck {
  bool subarray_farfield;
  bool full_array_nearfield;
};

template <typename Scalar>
FresnelCheck fresnel_check(const ArrayConfig<Scalar>& cfg, Scalar r) {
  if (!(r > 0)) throw std::domain_error("fresnel_check: range must be > 0");
  const Scalar sub = Scalar(cfg.M0() - 1) * cfg.d();
  const Scalar sub_boundary = Scalar(2) * sub * sub / cfg.lambda();
  return {r >= sub_boundary, r <= cfg.rayleigh_distance()};
}

}  // namespace share
