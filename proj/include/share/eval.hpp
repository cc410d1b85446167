#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "share/compression.hpp"
#include "share/estimates.hpp"
#include "share/geometry.hpp"
#include "share/share.hpp"
#include "share/signal.hpp"

namespace share::eval {

// ---------------------------------------------------------------------------
// Matching and error metrics

inline constexpr int kMaxMatchedSources = 6;

/// perm[l] is the estimate index paired with truth l; the permutation
/// minimizes the summed squared position error (exhaustive, L <= 6).
/// Estimates missing from a short set are stood in for by a far-away sentinel.
std::vector<int> match_estimates(const EstimateSet<double>& est, const std::vector<SourceTruth<double>>& truth);

struct TrialErrors {
  double theta_rmse_deg = 0;
  double range_rmse_m = 0;
  double pos_rmse_m = 0;
  bool failed = false;
};

/// Per-trial RMSE over the L matched pairs. Position uses s = [r sin, r cos, 0].
TrialErrors rmse(const EstimateSet<double>& est, const std::vector<SourceTruth<double>>& truth,
                 const std::vector<int>& matching);

/// match_estimates followed by rmse; a short estimate set marks the trial failed.
TrialErrors score_trial(const EstimateSet<double>& est, const std::vector<SourceTruth<double>>& truth);

struct MetricsRecord {
  std::string algorithm;
  std::string scenario;
  double snr_db = 0;
  int K = 0;
  double rmse_theta = 0;  // degrees
  double rmse_range = 0;  // meters
  double rmse_pos = 0;    // meters
  double median_pos = 0;
  double q1_pos = 0;
  double q3_pos = 0;
  int trials = 0;
  int failures = 0;
};

// ---------------------------------------------------------------------------
// Monte Carlo

enum class Algorithm { Share, Omp2d, Music2d };
std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

struct SourceDraw {
  bool random = false;
  std::vector<SourceTruth<double>> fixed;
  int L = 1;
  double theta_min = -60, theta_max = 60;
  double r_min = 1, r_max = 10;
};

struct RunDescriptor {
  ArrayConfig<double> cfg{4, 16, 0.5, 8.0, 1.0};
  CombinerPolicy policy = CombinerPolicy::FirstK;
  std::vector<int> K_values{16};
  std::vector<double> snr_db{20};
  int N = 32;
  SourceDraw sources;
  std::vector<Algorithm> algorithms{Algorithm::Share, Algorithm::Omp2d, Algorithm::Music2d};
  GridSpec<double> global_grid;
  ShareParams<double> share;  // L is taken from the source draw
  int trials = 1;
  std::uint64_t base_seed = 1;
};

struct TrialRecord {
  int trial = 0;
  Algorithm algorithm = Algorithm::Share;
  double snr_db = 0;
  int L = 0;
  int K = 0;  // 0 for fully digital estimators
  TrialErrors errors;
};

/// Sources for trial t: the fixed set, or uniform draws seeded from base_seed + t.
std::vector<SourceTruth<double>> draw_sources(const SourceDraw& draw, std::uint64_t trial_seed);

/// Every trial/SNR/K/algorithm combination, sorted by (trial, snr, K, algorithm).
std::vector<TrialRecord> monte_carlo(const RunDescriptor& run);

/// Aggregates over non-failed trials: sqrt of mean squared per-trial RMSE,
/// plus median and quartiles of the per-trial position RMSE.
std::vector<MetricsRecord> aggregate(const std::vector<TrialRecord>& records, const std::string& scenario = "");

const MetricsRecord* find_record(const std::vector<MetricsRecord>& recs, Algorithm a, double snr_db, int K);

// ---------------------------------------------------------------------------
// Cost model and beampattern

struct FlopParams {
  double M = 64, P = 4, M0 = 16, K = 16, N = 32, L = 1;
  double G_theta = 121, G_r = 64, G_theta_c = 41, G_delta = 14;
};

struct FlopEstimate {
  std::string algorithm;
  double flops = 0;
};

/// Leading-order costs: MUSIC M^3 + G_theta G_r M^2, 2D-OMP L PKN G_theta G_r,
/// SHARE PNK G_theta_c + L PKN G_delta G_r.
std::vector<FlopEstimate> flop_model(const FlopParams& p);

/// Normalized |a(target)^H a(theta, at_range)|^2 over the angle grid.
Spectrum1D<double> beampattern(const ArrayConfig<double>& cfg, const SourceTruth<double>& target,
                               const std::vector<double>& angle_grid, double at_range);

/// Local maxima (>= both neighbours) whose value is at least `floor`.
int count_peaks_above(const Spectrum1D<double>& spec, double floor);

}  // namespace share::eval
