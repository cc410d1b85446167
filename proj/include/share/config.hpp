#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "share/eval.hpp"

namespace share::config {

/// Parse or validation failure; the message names the line and/or field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A spacing given either in meters or in carrier wavelengths.
struct Spacing {
  double value = 0;
  bool in_lambdas = true;

  double meters(double lambda) const { return in_lambdas ? value * lambda : value; }
};

// Every knob of a run in one flat document. Defaults describe the 60.48 GHz,
// 4 x 16 sparse array with one source; configs/ holds the other scenarios.
struct RunConfig {
  // array
  int P = 4;
  int M0 = 16;
  double fc_hz = 60.48e9;
  Spacing d{0.5, true};
  Spacing dp{16.0, true};
  // combiner
  CombinerPolicy policy = CombinerPolicy::FirstK;
  std::vector<int> K{16};
  // scenario
  int N = 32;
  bool random_sources = false;
  std::vector<SourceTruth<double>> sources{{43.3, 4.8}};
  int L = 1;  // random mode only
  double random_theta_min = -60, random_theta_max = 60;
  double random_r_min = 1, random_r_max = 10;
  std::vector<double> snr_db{20};
  bool noiseless = false;
  // global grid for the baselines
  double theta_min = -60, theta_max = 60;
  int G_theta = 121;
  double r_min = 1, r_max = 9;
  int G_r = 64;
  // SHARE
  int G_theta_c = 41;
  int guard_bins = 1;
  double delta_theta = 3;
  int G_delta = 14;
  // runs
  std::vector<eval::Algorithm> algorithms{eval::Algorithm::Share, eval::Algorithm::Omp2d, eval::Algorithm::Music2d};
  int trials = 100;
  std::uint64_t seed = 1;
  int beam_points = 1201;
  std::string out_dir = ".";

  /// Assigns one key from its textual value; throws ConfigError on unknown
  /// keys or malformed values.
  void set(const std::string& key, const std::string& value);
  /// Checks every cross-field constraint; throws ConfigError naming the field.
  void validate() const;

  double lambda() const;
  ArrayConfig<double> array() const;
  GridSpec<double> global_grid() const;
  ShareParams<double> share_params(int L) const;
  CombinerBank<double> bank(int K) const;
  std::vector<double> effective_snr() const;
  eval::RunDescriptor run_descriptor() const;
  int source_count() const { return random_sources ? L : static_cast<int>(sources.size()); }
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Canonical `key = value` rendering; parse_config_text(echo_config(c)) == c.
std::string echo_config(const RunConfig& cfg);

}  // namespace share::config
