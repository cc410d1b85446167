#include "share/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>

#include "share/baselines.hpp"

namespace share::eval {

namespace {

constexpr double kSentinelRange = 1e9;

double position_sq_error(const SourceTruth<double>& a, const SourceTruth<double>& b) {
  return (source_position(a.theta, a.r) - source_position(b.theta, b.r)).squaredNorm();
}

const SourceTruth<double>& entry_or_sentinel(const EstimateSet<double>& est, int idx) {
  static const SourceTruth<double> sentinel{0.0, kSentinelRange};
  return idx < est.L() ? est.entries[static_cast<std::size_t>(idx)] : sentinel;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

std::vector<int> match_estimates(const EstimateSet<double>& est, const std::vector<SourceTruth<double>>& truth) {
  const int L = static_cast<int>(truth.size());
  if (L < 1) throw std::invalid_argument("match_estimates: no truth sources");
  const int slots = std::max(L, est.L());
  if (slots > kMaxMatchedSources)
    throw std::invalid_argument("match_estimates: at most " + std::to_string(kMaxMatchedSources) +
                                " sources supported");
  std::vector<int> idx(static_cast<std::size_t>(slots));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> best;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0;
    for (int l = 0; l < L; ++l)
      cost += position_sq_error(entry_or_sentinel(est, idx[static_cast<std::size_t>(l)]), truth[static_cast<std::size_t>(l)]);
    if (cost < best_cost) {
      best_cost = cost;
      best.assign(idx.begin(), idx.begin() + L);
    }
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

TrialErrors rmse(const EstimateSet<double>& est, const std::vector<SourceTruth<double>>& truth,
                 const std::vector<int>& matching) {
  if (matching.size() != truth.size()) throw std::invalid_argument("rmse: matching size differs from truth");
  TrialErrors e;
  double st = 0, sr = 0, sp = 0;
  for (std::size_t l = 0; l < truth.size(); ++l) {
    if (matching[l] >= est.L()) e.failed = true;
    const auto& hat = entry_or_sentinel(est, matching[l]);
    const double dt = hat.theta - truth[l].theta;
    const double dr = hat.r - truth[l].r;
    st += dt * dt;
    sr += dr * dr;
    sp += position_sq_error(hat, truth[l]);
  }
  const double L = static_cast<double>(truth.size());
  e.theta_rmse_deg = std::sqrt(st / L);
  e.range_rmse_m = std::sqrt(sr / L);
  e.pos_rmse_m = std::sqrt(sp / L);
  return e;
}

TrialErrors score_trial(const EstimateSet<double>& est, const std::vector<SourceTruth<double>>& truth) {
  return rmse(est, truth, match_estimates(est, truth));
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Share: return "share";
    case Algorithm::Omp2d: return "omp2d";
    case Algorithm::Music2d: return "music2d";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "share") return Algorithm::Share;
  if (name == "omp2d") return Algorithm::Omp2d;
  if (name == "music2d") return Algorithm::Music2d;
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected share, omp2d or music2d)");
}

std::vector<SourceTruth<double>> draw_sources(const SourceDraw& draw, std::uint64_t trial_seed) {
  if (!draw.random) return draw.fixed;
  std::seed_seq seq{static_cast<std::uint32_t>(trial_seed), static_cast<std::uint32_t>(trial_seed >> 32), 0x50u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> theta(draw.theta_min, draw.theta_max);
  std::uniform_real_distribution<double> range(draw.r_min, draw.r_max);
  std::vector<SourceTruth<double>> out;
  for (int l = 0; l < draw.L; ++l) {
    const double t = theta(rng);
    const double r = range(rng);
    out.push_back({t, r});
  }
  return out;
}

std::vector<TrialRecord> monte_carlo(const RunDescriptor& run) {
  if (run.trials < 1) throw std::invalid_argument("monte_carlo: trials must be >= 1");
  if (run.K_values.empty() || run.snr_db.empty()) throw std::invalid_argument("monte_carlo: empty K or SNR sweep");
  const auto has = [&](Algorithm a) {
    return std::find(run.algorithms.begin(), run.algorithms.end(), a) != run.algorithms.end();
  };
  const ArrayConfig<double>& cfg = run.cfg;

  struct PerK {
    int K;
    CombinerBank<double> bank;
    Dictionary<double> global;
  };
  std::vector<PerK> per_k;
  for (int K : run.K_values) {
    PerK pk{K, dft_combiner_bank<double>(cfg.M0(), K, cfg.P(), run.policy, run.base_seed), {}};
    if (has(Algorithm::Omp2d)) pk.global = global_dictionary(pk.bank, cfg, run.global_grid);
    per_k.push_back(std::move(pk));
  }
  MusicGrid<double> music_grid;
  if (has(Algorithm::Music2d)) music_grid = make_music_grid(cfg, run.global_grid);

  std::vector<TrialRecord> out;
  for (int t = 0; t < run.trials; ++t) {
    const std::uint64_t seed = run.base_seed + static_cast<std::uint64_t>(t);
    const auto truth = draw_sources(run.sources, seed);
    const int L = static_cast<int>(truth.size());
    for (double snr : run.snr_db) {
      Scenario<double> sc{truth, run.N, snr, seed};
      const SynthesizedData<double> data = synthesize(cfg, sc);
      auto record = [&](Algorithm a, int K, auto&& estimator) {
        TrialRecord rec{t, a, snr, L, K, {}};
        try {
          const EstimateSet<double> est = estimator();
          rec.errors = score_trial(est, truth);
        } catch (const std::exception&) {
          rec.errors.failed = true;
          const double nan = std::numeric_limits<double>::quiet_NaN();
          rec.errors.theta_rmse_deg = rec.errors.range_rmse_m = rec.errors.pos_rmse_m = nan;
        }
        out.push_back(rec);
      };
      if (has(Algorithm::Music2d))
        record(Algorithm::Music2d, 0, [&] { return music2d_detailed(music_grid, data.Y.data, L).estimates; });
      for (const PerK& pk : per_k) {
        const CMatrix<double> Ytil = compress_matrix(pk.bank, data.Y.data);
        if (has(Algorithm::Share))
          record(Algorithm::Share, pk.K, [&] {
            ShareParams<double> params = run.share;
            params.L = L;
            return share_estimate(pk.bank, cfg, Ytil, params);
          });
        if (has(Algorithm::Omp2d)) record(Algorithm::Omp2d, pk.K, [&] { return omp_estimate_on(pk.global, Ytil, L); });
      }
    }
  }
  return out;
}

std::vector<MetricsRecord> aggregate(const std::vector<TrialRecord>& records, const std::string& scenario) {
  struct Acc {
    double st = 0, sr = 0, sp = 0;
    int trials = 0, failures = 0;
    std::vector<double> pos;
  };
  std::map<std::tuple<int, double, int>, Acc> groups;
  for (const auto& r : records) {
    Acc& acc = groups[{static_cast<int>(r.algorithm), r.snr_db, r.K}];
    ++acc.trials;
    if (r.errors.failed) {
      ++acc.failures;
      continue;
    }
    acc.st += r.errors.theta_rmse_deg * r.errors.theta_rmse_deg;
    acc.sr += r.errors.range_rmse_m * r.errors.range_rmse_m;
    acc.sp += r.errors.pos_rmse_m * r.errors.pos_rmse_m;
    acc.pos.push_back(r.errors.pos_rmse_m);
  }
  std::vector<MetricsRecord> out;
  for (const auto& [key, acc] : groups) {
    MetricsRecord m;
    m.algorithm = to_string(static_cast<Algorithm>(std::get<0>(key)));
    m.scenario = scenario;
    m.snr_db = std::get<1>(key);
    m.K = std::get<2>(key);
    m.trials = acc.trials;
    m.failures = acc.failures;
    const double n = static_cast<double>(acc.pos.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    m.rmse_theta = n > 0 ? std::sqrt(acc.st / n) : nan;
    m.rmse_range = n > 0 ? std::sqrt(acc.sr / n) : nan;
    m.rmse_pos = n > 0 ? std::sqrt(acc.sp / n) : nan;
    m.median_pos = quantile(acc.pos, 0.5);
    m.q1_pos = quantile(acc.pos, 0.25);
    m.q3_pos = quantile(acc.pos, 0.75);
    out.push_back(std::move(m));
  }
  return out;
}

const MetricsRecord* find_record(const std::vector<MetricsRecord>& recs, Algorithm a, double snr_db, int K) {
  for (const auto& r : recs)
    if (r.algorithm == to_string(a) && r.snr_db == snr_db && r.K == K) return &r;
  return nullptr;
}

std::vector<FlopEstimate> flop_model(const FlopParams& p) {
  for (double v : {p.M, p.P, p.M0, p.K, p.N, p.L, p.G_theta, p.G_r, p.G_theta_c, p.G_delta})
    if (!(v >= 1)) throw std::invalid_argument("flop_model: all counts must be >= 1");
  const double pkn = p.P * p.K * p.N;
  return {
      {"music2d", p.M * p.M * p.M + p.G_theta * p.G_r * p.M * p.M},
      {"omp2d", p.L * pkn * p.G_theta * p.G_r},
      {"share", p.P * p.N * p.K * p.G_theta_c + p.L * pkn * p.G_delta * p.G_r},
  };
}

Spectrum1D<double> beampattern(const ArrayConfig<double>& cfg, const SourceTruth<double>& target,
                               const std::vector<double>& angle_grid, double at_range) {
  const CVector<double> at = nearfield_steering(cfg, target.theta, target.r);
  const double at_norm2 = at.squaredNorm();
  Spectrum1D<double> out;
  out.angles = angle_grid;
  out.values.resize(static_cast<Eigen::Index>(angle_grid.size()));
  for (std::size_t i = 0; i < angle_grid.size(); ++i) {
    const CVector<double> a = nearfield_steering(cfg, angle_grid[i], at_range);
    out.values(static_cast<Eigen::Index>(i)) = std::norm(at.dot(a)) / (at_norm2 * a.squaredNorm());
  }
  return out;
}

int count_peaks_above(const Spectrum1D<double>& spec, double floor) {
  const Eigen::Index G = spec.size();
  int count = 0;
  for (Eigen::Index i = 0; i < G; ++i) {
    const double v = spec.values(i);
    const bool left = i == 0 || v >= spec.values(i - 1);
    const bool right = i == G - 1 || v >= spec.values(i + 1);
    if (left && right && v >= floor) ++count;
  }
  return count;
}

}  // namespace share::eval
