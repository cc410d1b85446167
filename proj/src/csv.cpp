#include "share/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef SHARE_BUILD_ID
#define SHARE_BUILD_ID "unknown"
#endif

namespace share::csv {

namespace {
constexpr const char* kEchoBegin = "# --- config ---";
constexpr const char* kEchoEnd = "# --- end config ---";
}  // namespace

std::string build_id() { return SHARE_BUILD_ID; }

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string comment_block(const config::RunConfig& cfg, const std::vector<std::string>& extra) {
  std::ostringstream os;
  os << "# share-localization output\n";
  os << "# build = " << build_id() << '\n';
  os << "# seed = " << cfg.seed << '\n';
  for (const auto& line : extra) os << "# " << line << '\n';
  os << kEchoBegin << '\n';
  std::istringstream echo(config::echo_config(cfg));
  std::string line;
  while (std::getline(echo, line)) os << "# " << line << '\n';
  os << kEchoEnd << '\n';
  return os.str();
}

void write_metrics(std::ostream& os, const std::vector<eval::TrialRecord>& records) {
  os << "trial,algorithm,snr_db,L,K,theta_rmse_deg,range_rmse_m,pos_rmse_m,failed\n";
  for (const auto& r : records)
    os << r.trial << ',' << eval::to_string(r.algorithm) << ',' << number(r.snr_db) << ',' << r.L << ',' << r.K << ','
       << number(r.errors.theta_rmse_deg) << ',' << number(r.errors.range_rmse_m) << ','
       << number(r.errors.pos_rmse_m) << ',' << (r.errors.failed ? 1 : 0) << '\n';
}

void write_spectrum(std::ostream& os, const Spectrum1D<double>& spec) {
  os << "theta_deg,value\n";
  for (Eigen::Index i = 0; i < spec.size(); ++i)
    os << number(spec.angles[static_cast<std::size_t>(i)]) << ',' << number(spec.values(i)) << '\n';
}

void write_music_spectrum(std::ostream& os, const MusicSpectrum2D<double>& spec) {
  os << "theta_deg,range_m,value\n";
  for (std::size_t i = 0; i < spec.angles.size(); ++i)
    for (std::size_t j = 0; j < spec.ranges.size(); ++j)
      os << number(spec.angles[i]) << ',' << number(spec.ranges[j]) << ','
         << number(spec.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
}

void write_flops(std::ostream& os, const std::vector<eval::FlopEstimate>& flops) {
  os << "algorithm,flops\n";
  for (const auto& f : flops) os << f.algorithm << ',' << number(f.flops) << '\n';
}

void write_estimates(std::ostream& os, const std::string& algorithm, const EstimateSet<double>& est, bool header) {
  if (header) os << "algorithm,index,theta_deg,range_m,residual_norm\n";
  for (int l = 0; l < est.L(); ++l)
    os << algorithm << ',' << l << ',' << number(est.entries[static_cast<std::size_t>(l)].theta) << ','
       << number(est.entries[static_cast<std::size_t>(l)].r) << ',' << number(est.residual_norm) << '\n';
}

void write_file(const std::string& path, const std::string& comments, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << comments << body;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string extract_echoed_config(const std::string& csv_text) {
  std::istringstream is(csv_text);
  std::string line, out;
  bool inside = false;
  while (std::getline(is, line)) {
    if (line == kEchoBegin) {
      inside = true;
    } else if (line == kEchoEnd) {
      break;
    } else if (inside && line.rfind("# ", 0) == 0) {
      out += line.substr(2) + '\n';
    }
  }
  return out;
}

}  // namespace share::csv
