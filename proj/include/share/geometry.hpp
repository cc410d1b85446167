#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace share {

template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

template <typename Scalar>
constexpr Scalar deg2rad(Scalar deg) {
  return deg * static_cast<Scalar>(kPi) / Scalar(180);
}

template <typename Scalar>
constexpr Scalar rad2deg(Scalar rad) {
  return rad * Scalar(180) / static_cast<Scalar>(kPi);
}

// Modular linear array along x: P subarrays of M0 elements, intra-subarray
// spacing d, first-element-to-first-element spacing dp. Lengths in meters.
template <typename Scalar = double>
class ArrayConfig {
 public:
  ArrayConfig(int P, int M0, Scalar d, Scalar dp, Scalar fc)
      : P_(P), M0_(M0), d_(d), dp_(dp), fc_(fc) {
    if (P < 1) throw std::invalid_argument("ArrayConfig: P must be >= 1");
    if (M0 < 1) throw std::invalid_argument("ArrayConfig: M0 must be >= 1");
    if (!(d > 0)) throw std::invalid_argument("ArrayConfig: d must be > 0");
    if (!(fc > 0)) throw std::invalid_argument("ArrayConfig: fc must be > 0");
    // Relative slack so that dp = M0*d computed in wavelengths still counts
    // as contiguous after rounding.
    if (dp < M0 * d * (Scalar(1) - Scalar(64) * std::numeric_limits<Scalar>::epsilon()))
      throw std::invalid_argument("ArrayConfig: dp must be >= M0*d");
    lambda_ = static_cast<Scalar>(kSpeedOfLight) / fc_;
    aperture_ = Scalar(P_ - 1) * dp_ + Scalar(M0_ - 1) * d_;
    rayleigh_ = Scalar(2) * aperture_ * aperture_ / lambda_;
  }

  int P() const { return P_; }
  int M0() const { return M0_; }
  int M() const { return P_ * M0_; }
  Scalar d() const { return d_; }
  Scalar dp() const { return dp_; }
  Scalar fc() const { return fc_; }
  Scalar lambda() const { return lambda_; }
  Scalar aperture() const { return aperture_; }
  Scalar rayleigh_distance() const { return rayleigh_; }
  bool contiguous() const { return dp_ <= M0_ * d_ * (Scalar(1) + Scalar(64) * std::numeric_limits<Scalar>::epsilon()); }

  // Flattened element index for subarray p in 1..P and element m in 0..M0-1.
  int global_index(int p, int m) const {
    check_index(p, m);
    return (p - 1) * M0_ + m;
  }

  void check_index(int p, int m) const {
    if (p < 1 || p > P_ || m < 0 || m >= M0_)
      throw std::out_of_range("element index (p=" + std::to_string(p) + ", m=" + std::to_string(m) +
                              ") out of range");
  }

 private:
  int P_;
  int M0_;
  Scalar d_;
  Scalar dp_;
  Scalar fc_;
  Scalar lambda_;
  Scalar aperture_;
  Scalar rayleigh_;
};

template <typename Scalar>
Vector3<Scalar> element_position(const ArrayConfig<Scalar>& cfg, int p, int m) {
  cfg.check_index(p, m);
  return Vector3<Scalar>(Scalar(p - 1) * cfg.dp() + Scalar(m) * cfg.d(), Scalar(0), Scalar(0));
}

// x-coordinates of all M elements in flattened order.
template <typename Scalar>
RVector<Scalar> element_x(const ArrayConfig<Scalar>& cfg) {
  RVector<Scalar> x(cfg.M());
  for (int p = 1; p <= cfg.P(); ++p)
    for (int m = 0; m < cfg.M0(); ++m)
      x(cfg.global_index(p, m)) = Scalar(p - 1) * cfg.dp() + Scalar(m) * cfg.d();
  return x;
}

template <typename Scalar>
struct ApertureInfo {
  Scalar aperture;
  Scalar rayleigh_distance;
};

template <typename Scalar>
ApertureInfo<Scalar> aperture_and_rayleigh(const ArrayConfig<Scalar>& cfg) {
  return {cfg.aperture(), cfg.rayleigh_distance()};
}

/// Inclusive linear spacing; a single point yields `lo`.
template <typename Scalar>
std::vector<Scalar> linspace(Scalar lo, Scalar hi, int count) {
  if (count < 1) throw std::invalid_argument("linspace: count must be >= 1");
  std::vector<Scalar> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const Scalar step = (hi - lo) / Scalar(count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + Scalar(i) * step;
  out.back() = hi;
  return out;
}

/// Angle (degrees) by range (meters) search grid. Either axis may be used alone.
template <typename Scalar = double>
struct GridSpec {
  Scalar theta_min = Scalar(-60);
  Scalar theta_max = Scalar(60);
  int G_theta = 121;
  Scalar r_min = Scalar(1);
  Scalar r_max = Scalar(9);
  int G_r = 64;

  void validate() const {
    if (!(theta_min < theta_max)) throw std::invalid_argument("GridSpec: theta_min must be < theta_max");
    if (G_theta < 2) throw std::invalid_argument("GridSpec: G_theta must be >= 2");
    if (!(r_min < r_max)) throw std::invalid_argument("GridSpec: r_min must be < r_max");
    if (!(r_min > 0)) throw std::invalid_argument("GridSpec: r_min must be > 0");
    if (G_r < 1) throw std::invalid_argument("GridSpec: G_r must be >= 1");
  }

  std::vector<Scalar> angles() const { return linspace(theta_min, theta_max, G_theta); }
  std::vector<Scalar> ranges() const { return linspace(r_min, r_max, G_r); }
  Scalar angle_step() const { return (theta_max - theta_min) / Scalar(G_theta - 1); }
  Scalar range_step() const { return G_r >= 2 ? (r_max - r_min) / Scalar(G_r - 1) : Scalar(0); }
};

}  // namespace share
