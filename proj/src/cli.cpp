#include "share/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>

#include "share/baselines.hpp"
#include "share/csv.hpp"
#include "share/eval.hpp"
#include "share/share.hpp"

namespace share::cli {

namespace {

std::string bank_summary(const config::RunConfig& cfg) {
  std::ostringstream os;
  os << "bank = policy " << to_string(cfg.policy);
  for (int K : cfg.K) {
    const auto bank = cfg.bank(K);
    os << "; K=" << K << " dft rows";
    for (int r : bank.dft_rows) os << ' ' << r;
  }
  if (cfg.policy == CombinerPolicy::Random) os << "; seed " << cfg.seed;
  return os.str();
}

std::string out_path(const config::RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

struct TrialData {
  std::vector<SourceTruth<double>> truth;
  SynthesizedData<double> data;
  CombinerBank<double> bank;
  CMatrix<double> Ytil;
};

// The single realization used by `spectrum` and `estimate`: trial 0 of the run.
TrialData single_trial(const config::RunConfig& cfg) {
  const auto array = cfg.array();
  const auto run = cfg.run_descriptor();
  TrialData t{eval::draw_sources(run.sources, cfg.seed), {}, cfg.bank(cfg.K.front()), {}};
  t.data = synthesize(array, Scenario<double>{t.truth, cfg.N, cfg.effective_snr().front(), cfg.seed});
  t.Ytil = compress_matrix(t.bank, t.data.Y.data);
  return t;
}

int cmd_beampattern(const config::RunConfig& cfg, std::ostream& out) {
  const auto array = cfg.array();
  const auto target = eval::draw_sources(cfg.run_descriptor().sources, cfg.seed).front();
  const auto angles = linspace(cfg.theta_min, cfg.theta_max, cfg.beam_points);
  const auto spec = eval::beampattern(array, target, angles, target.r);
  std::ostringstream body;
  csv::write_spectrum(body, spec);
  const std::string path = out_path(cfg, "spectrum.csv");
  csv::write_file(path,
                  csv::comment_block(cfg, {"beampattern target = " + csv::number(target.theta) + " deg, " +
                                           csv::number(target.r) + " m"}),
                  body.str());
  out << "beampattern: " << eval::count_peaks_above(spec, 0.5) << " peak(s) above -3 dB -> " << path << '\n';
  return 0;
}

int cmd_spectrum(const config::RunConfig& cfg, std::ostream& out) {
  const auto t = single_trial(cfg);
  const auto params = cfg.share_params(static_cast<int>(t.truth.size()));
  const auto spec = stage1_spectrum(t.bank, cfg.array(), t.Ytil, params.coarse_grid);
  const auto peaks = pick_peaks(spec, params.L, params.guard_bins);
  std::ostringstream body;
  csv::write_spectrum(body, spec);
  const std::string path = out_path(cfg, "spectrum.csv");
  csv::write_file(path, csv::comment_block(cfg, {bank_summary(cfg)}), body.str());
  out << "stage-1 peaks (deg):";
  for (double p : peaks) out << ' ' << csv::number(p);
  out << " -> " << path << '\n';
  return 0;
}

int cmd_estimate(const config::RunConfig& cfg, std::ostream& out) {
  const auto array = cfg.array();
  const auto t = single_trial(cfg);
  const int L = static_cast<int>(t.truth.size());
  std::ostringstream body;
  bool header = true;
  out << "truth:";
  for (const auto& s : t.truth) out << " (" << csv::number(s.theta) << " deg, " << csv::number(s.r) << " m)";
  out << '\n';
  for (eval::Algorithm a : cfg.algorithms) {
    EstimateSet<double> est;
    switch (a) {
      case eval::Algorithm::Share:
        est = share_estimate(t.bank, array, t.Ytil, cfg.share_params(L));
        break;
      case eval::Algorithm::Omp2d:
        est = omp2d_estimate(t.bank, array, t.Ytil, cfg.global_grid(), L);
        break;
      case eval::Algorithm::Music2d: {
        const auto res = music2d_detailed(make_music_grid(array, cfg.global_grid()), t.data.Y.data, L);
        est = res.estimates;
        std::ostringstream music;
        csv::write_music_spectrum(music, res.spectrum);
        csv::write_file(out_path(cfg, "music_spectrum.csv"), csv::comment_block(cfg), music.str());
        break;
      }
    }
    csv::write_estimates(body, eval::to_string(a), est, header);
    header = false;
    const auto err = eval::score_trial(est, t.truth);
    out << eval::to_string(a) << ':';
    for (const auto& e : est.entries) out << " (" << csv::number(e.theta) << " deg, " << csv::number(e.r) << " m)";
    out << "  pos_rmse_m=" << csv::number(err.pos_rmse_m) << '\n';
  }
  csv::write_file(out_path(cfg, "estimates.csv"), csv::comment_block(cfg, {bank_summary(cfg)}), body.str());
  return 0;
}

int cmd_monte_carlo(const config::RunConfig& cfg, std::ostream& out) {
  const auto records = eval::monte_carlo(cfg.run_descriptor());
  std::ostringstream body;
  csv::write_metrics(body, records);
  const std::string path = out_path(cfg, "metrics.csv");
  csv::write_file(path,
                  csv::comment_block(cfg, {bank_summary(cfg),
                                           "rows are per-trial RMSEs over the L matched sources; aggregate as "
                                           "sqrt(mean of squared rows) over non-failed trials",
                                           "K = 0 marks fully digital estimators"}),
                  body.str());
  out << "algorithm,snr_db,K,rmse_theta_deg,rmse_range_m,rmse_pos_m,median_pos_m,trials,failures\n";
  for (const auto& m : eval::aggregate(records))
    out << m.algorithm << ',' << csv::number(m.snr_db) << ',' << m.K << ',' << csv::number(m.rmse_theta) << ','
        << csv::number(m.rmse_range) << ',' << csv::number(m.rmse_pos) << ',' << csv::number(m.median_pos) << ','
        << m.trials << ',' << m.failures << '\n';
  out << "-> " << path << '\n';
  return 0;
}

int cmd_flops(const config::RunConfig& cfg, std::ostream& out) {
  eval::FlopParams p;
  p.M = cfg.P * cfg.M0;
  p.P = cfg.P;
  p.M0 = cfg.M0;
  p.K = cfg.K.front();
  p.N = cfg.N;
  p.L = cfg.source_count();
  p.G_theta = cfg.G_theta;
  p.G_r = cfg.G_r;
  p.G_theta_c = cfg.G_theta_c;
  p.G_delta = cfg.G_delta;
  const auto flops = eval::flop_model(p);
  std::ostringstream body;
  csv::write_flops(body, flops);
  const std::string path = out_path(cfg, "flops.csv");
  csv::write_file(path, csv::comment_block(cfg), body.str());
  out << body.str() << "-> " << path << '\n';
  return 0;
}

}  // namespace

std::string usage() {
  return "usage: share_cli <beampattern|spectrum|estimate|monte-carlo|flops> [--config FILE] [--out-dir DIR]\n"
         "                 [--trials N] [--snr-db X[,Y...]] [--noiseless] [--set key=value]...\n";
}

int dispatch(const std::string& subcommand, const config::RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (subcommand == "beampattern") return cmd_beampattern(cfg, out);
    if (subcommand == "spectrum") return cmd_spectrum(cfg, out);
    if (subcommand == "estimate") return cmd_estimate(cfg, out);
    if (subcommand == "monte-carlo") return cmd_monte_carlo(cfg, out);
    if (subcommand == "flops") return cmd_flops(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << "unknown subcommand '" << subcommand << "'\n" << usage();
  return 2;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty() || std::find(kSubcommands.begin(), kSubcommands.end(), args.front()) == kSubcommands.end()) {
    if (!args.empty()) err << "unknown subcommand '" << args.front() << "'\n";
    err << usage();
    return 2;
  }
  const std::string sub = args.front();

  CLI::App app{"Near-field localization benchmark", "share_cli " + sub};
  std::string config_path, out_dir, snr;
  int trials = 0;
  bool noiseless = false;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--trials", trials, "Monte Carlo trial count");
  app.add_option("--snr-db", snr, "SNR value(s) in dB, comma separated");
  app.add_flag("--noiseless", noiseless, "disable the noise term");
  app.add_option("--set", sets, "override one config key (key=value)");
  std::vector<std::string> rest(args.begin() + 1, args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help() << usage();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << usage();
    return 2;
  }

  config::RunConfig cfg;
  try {
    cfg = config_path.empty() ? config::parse_config_text("") : config::parse_config_file(config_path);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw config::ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (trials != 0) cfg.set("trials", std::to_string(trials));
    if (!snr.empty()) cfg.set("snr_db", snr);
    if (noiseless) cfg.noiseless = true;
    cfg.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return dispatch(sub, cfg, out, err);
}

}  // namespace share::cli
