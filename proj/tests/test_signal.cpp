#include <doctest.h>

#include <limits>
#include <random>

#include "oracles.hpp"
#include "share/signal.hpp"

using share::nearfield_steering;
using cd = std::complex<double>;

TEST_CASE("reference element has zero delay and unit amplitude") {
  const auto cfg = oracle::reference_array();
  for (double th : {-59.0, -10.0, 0.0, 43.3, 60.0})
    for (double r : {0.3, 1.0, 4.8, 100.0}) {
      const auto a = nearfield_steering(cfg, th, r);
      CHECK(a(0) == cd(1.0, 0.0));
      CHECK((a.array().abs() > 0).all());
    }
}

TEST_CASE("broadside source on a single subarray") {
  const share::ArrayConfig<double> cfg(1, 16, 2.5e-3, 40e-3, 60e9);
  const double r = 0.7;
  const auto a = nearfield_steering(cfg, 0.0, r);
  const double k = 2 * M_PI / cfg.lambda();
  for (int m = 0; m < 16; ++m) {
    const double x = m * cfg.d();
    const double dist = std::hypot(r, x);
    CHECK(std::abs(a(m)) <= 1.0);
    CHECK(std::abs(a(m) - std::polar(r / dist, -k * (dist - r))) < 1e-12);
  }
}

TEST_CASE("near-field steering matches the direct-distance oracle") {
  const auto cfg = oracle::reference_array();
  const double k = 2 * M_PI / cfg.lambda();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> th(-80, 80), rr(0.2, 20);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const double t = th(rng), r = rr(rng);
    const auto a = nearfield_steering(cfg, t, r);
    const auto b = oracle::steering(cfg, t, r);
    const auto x = share::element_x(cfg);
    for (int i = 0; i < cfg.M(); ++i) {
      const double phase = k * std::abs(std::hypot(x(i) - r * std::sin(t * M_PI / 180), r * std::cos(t * M_PI / 180)) - r);
      const double err = std::abs(std::arg(a(i) * std::conj(b(i))));
      worst = std::max(worst, err / (1.0 + phase));
      CHECK(std::abs(std::abs(a(i)) - std::abs(b(i))) < 1e-12);
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("steering entry at (43.3 deg, 4.8 m), element (4, 15)") {
  const auto cfg = oracle::reference_array();
  const auto a = nearfield_steering(cfg, 43.3, 4.8);
  const cd expected(0.404171093731272, 0.958181379438135);  // numpy direct-distance evaluation
  CHECK(std::abs(a(cfg.global_index(4, 15)) - expected) < 1e-9);
  CHECK(std::abs(a(cfg.global_index(4, 15)) - oracle::steering_entry(cfg, 4, 15, 43.3, 4.8)) < 1e-11);
}

TEST_CASE("steering rejects non-positive range") {
  const auto cfg = oracle::reference_array();
  CHECK_THROWS_AS(nearfield_steering(cfg, 10.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(nearfield_steering(cfg, 10.0, -1.0), std::domain_error);
}

TEST_CASE("far-field subarray steering") {
  const auto cfg = oracle::reference_array();
  SUBCASE("broadside is all ones") {
    const auto a = share::farfield_sub_steering(cfg, 0.0);
    for (int m = 0; m < cfg.M0(); ++m) CHECK(std::abs(a(m) - cd(1, 0)) < 1e-15);
  }
  SUBCASE("endfire with half-wavelength spacing alternates") {
    const auto a = share::farfield_sub_steering(cfg, 90.0);
    for (int m = 0; m < cfg.M0(); ++m) CHECK(std::abs(a(m) - cd(m % 2 ? -1.0 : 1.0, 0)) < 1e-12);
  }
  SUBCASE("30 degrees off broadside gives a quarter turn per element") {
    const auto a = share::farfield_sub_steering(cfg, 30.0);
    CHECK(a(0) == cd(1, 0));
    CHECK(std::abs(a(1) - cd(0, 1)) < 1e-12);
    CHECK((a.array().abs() - 1.0).abs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("near-field phase profile converges to the far-field model at long range") {
  const auto cfg = oracle::reference_array();
  for (double th : {-50.0, -12.5, 0.0, 33.0, 58.0}) {
    const auto near = nearfield_steering(cfg, th, 1e6 * cfg.aperture());
    const auto far = share::farfield_sub_steering(cfg, th);
    double worst = 0;
    for (int m = 0; m < cfg.M0(); ++m) worst = std::max(worst, std::abs(std::arg(near(m) * std::conj(far(m)))));
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("synthesize: noiseless data is exactly A X") {
  const auto cfg = oracle::reference_array();
  share::Scenario<double> sc{{{43.3, 4.8}, {43.8, 4.6}}, 32, std::numeric_limits<double>::infinity(), 11};
  CHECK(sc.noiseless());
  const auto out = share::synthesize(cfg, sc);
  CHECK(out.Y.layout == share::RowLayout::FullDigital);
  CHECK(out.Y.rows() == 64);
  CHECK(out.Y.cols() == 32);
  CHECK(out.X.rows() == 2);
  const Eigen::MatrixXcd A = share::steering_matrix(cfg, sc.sources);
  CHECK((out.Y.data - A * out.X).norm() == 0.0);
}

TEST_CASE("synthesize: noise variance follows the SNR") {
  const auto cfg = oracle::reference_array();
  for (double snr : {-3.0, 0.0, 10.0}) {
    share::Scenario<double> sc{{{10.0, 3.0}}, 2000, snr, 5};
    const auto out = share::synthesize(cfg, sc);
    const double samples = static_cast<double>(out.Y.rows() * out.Y.cols());
    REQUIRE(samples >= 1e5);
    const double power = (out.Y.data - out.A * out.X).squaredNorm() / samples;
    const double sigma2 = std::pow(10.0, -snr / 10.0);
    CHECK(std::abs(power / sigma2 - 1.0) < 0.05);
    const double wave_power = out.X.squaredNorm() / static_cast<double>(out.X.size());
    CHECK(std::abs(wave_power - 1.0) < 0.05);
  }
}

TEST_CASE("synthesize is a pure function of the seed") {
  const auto cfg = oracle::reference_array();
  share::Scenario<double> sc{{{-20.0, 2.0}}, 16, 5.0, 99};
  const auto a = share::synthesize(cfg, sc);
  const auto b = share::synthesize(cfg, sc);
  CHECK(a.Y.data == b.Y.data);
  sc.seed = 100;
  const auto c = share::synthesize(cfg, sc);
  CHECK(a.Y.data != c.Y.data);
}

TEST_CASE("scenario validation") {
  const auto cfg = oracle::reference_array();
  CHECK_THROWS_AS(share::synthesize(cfg, share::Scenario<double>{{}, 4, 0.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(share::synthesize(cfg, share::Scenario<double>{{{0.0, 1.0}}, 0, 0.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(share::synthesize(cfg, share::Scenario<double>{{{0.0, -1.0}}, 4, 0.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(share::synthesize(cfg, share::Scenario<double>{{{95.0, 1.0}}, 4, 0.0, 1}), std::invalid_argument);
}

TEST_CASE("Fresnel diagnostics") {
  const auto cfg = oracle::reference_array();
  auto f = share::fresnel_check(cfg, 1.0);
  CHECK(f.subarray_farfield);
  CHECK(f.full_array_nearfield);
  f = share::fresnel_check(cfg, 0.1);
  CHECK_FALSE(f.subarray_farfield);
  CHECK(f.full_array_nearfield);
  f = share::fresnel_check(cfg, 100.0);
  CHECK(f.subarray_farfield);
  CHECK_FALSE(f.full_array_nearfield);
  // boundary 112.5 lambda
  CHECK(share::fresnel_check(cfg, 0.557649661458333 * (1 + 1e-9)).subarray_farfield);
  CHECK_FALSE(share::fresnel_check(cfg, 0.557649661458333 * (1 - 1e-9)).subarray_farfield);
  CHECK_THROWS_AS(share::fresnel_check(cfg, 0.0), std::domain_error);
}
