#include "share/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace share::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || std::isnan(x))
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  errno = 0;
  const long long x = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ConfigError(key + ": value out of range");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::string fmt_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + f(v[i]);
  return out;
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + ": " + what);
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "P") P = to_int(key, value);
  else if (key == "M0") M0 = to_int(key, value);
  else if (key == "fc_hz") fc_hz = to_double(key, value);
  else if (key == "d_m") d = {to_double(key, value), false};
  else if (key == "d_lambdas") d = {to_double(key, value), true};
  else if (key == "dp_m") dp = {to_double(key, value), false};
  else if (key == "dp_lambdas") dp = {to_double(key, value), true};
  else if (key == "policy") {
    const std::string t = trim(value);
    if (t == "first-k") policy = CombinerPolicy::FirstK;
    else if (t == "random") policy = CombinerPolicy::Random;
    else throw ConfigError("policy: expected first-k or random, got '" + value + "'");
  } else if (key == "K") {
    K.clear();
    for (const auto& item : split(value, ',')) K.push_back(to_int(key, item));
  } else if (key == "N") N = to_int(key, value);
  else if (key == "source_mode") {
    const std::string t = trim(value);
    if (t == "fixed") random_sources = false;
    else if (t == "random") random_sources = true;
    else throw ConfigError("source_mode: expected fixed or random, got '" + value + "'");
  } else if (key == "sources") {
    sources.clear();
    for (const auto& item : split(value, ',')) {
      const auto parts = split(item, ':');
      if (parts.size() != 2) throw ConfigError("sources: expected theta_deg:range_m pairs, got '" + item + "'");
      sources.push_back({to_double(key, parts[0]), to_double(key, parts[1])});
    }
  } else if (key == "L") L = to_int(key, value);
  else if (key == "random_theta_min") random_theta_min = to_double(key, value);
  else if (key == "random_theta_max") random_theta_max = to_double(key, value);
  else if (key == "random_r_min") random_r_min = to_double(key, value);
  else if (key == "random_r_max") random_r_max = to_double(key, value);
  else if (key == "snr_db") {
    snr_db.clear();
    for (const auto& item : split(value, ',')) snr_db.push_back(to_double(key, item));
  } else if (key == "noiseless") noiseless = to_bool(key, value);
  else if (key == "theta_min") theta_min = to_double(key, value);
  else if (key == "theta_max") theta_max = to_double(key, value);
  else if (key == "G_theta") G_theta = to_int(key, value);
  else if (key == "r_min") r_min = to_double(key, value);
  else if (key == "r_max") r_max = to_double(key, value);
  else if (key == "G_r") G_r = to_int(key, value);
  else if (key == "G_theta_c") G_theta_c = to_int(key, value);
  else if (key == "guard_bins") guard_bins = to_int(key, value);
  else if (key == "delta_theta") delta_theta = to_double(key, value);
  else if (key == "G_delta") G_delta = to_int(key, value);
  else if (key == "algorithms") {
    algorithms.clear();
    for (const auto& item : split(value, ',')) {
      try {
        algorithms.push_back(eval::algorithm_from_string(item));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("algorithms: ") + e.what());
      }
    }
  } else if (key == "trials") trials = to_int(key, value);
  else if (key == "seed") {
    const long long s = to_integer(key, value);
    if (s < 0) throw ConfigError("seed: must be >= 0");
    seed = static_cast<std::uint64_t>(s);
  } else if (key == "beam_points") beam_points = to_int(key, value);
  else if (key == "out_dir") out_dir = trim(value);
  else throw ConfigError("unknown key '" + key + "'");
}

void RunConfig::validate() const {
  require(P >= 1, "P", "must be >= 1");
  require(M0 >= 1, "M0", "must be >= 1");
  require(fc_hz > 0 && std::isfinite(fc_hz), "fc_hz", "must be a positive finite frequency");
  require(d.value > 0, d.in_lambdas ? "d_lambdas" : "d_m", "must be > 0");
  const double lam = lambda();
  require(dp.meters(lam) >= M0 * d.meters(lam) * (1 - 1e-12), dp.in_lambdas ? "dp_lambdas" : "dp_m",
          "dp >= M0*d required");
  require(!K.empty(), "K", "at least one value required");
  for (int k : K) {
    require(k >= 1, "K", "must be >= 1");
    require(k <= M0, "K", "K <= M0 required (K=" + std::to_string(k) + ", M0=" + std::to_string(M0) + ")");
  }
  require(N >= 1, "N", "must be >= 1");
  if (random_sources) {
    require(L >= 1 && L <= eval::kMaxMatchedSources, "L", "must lie in 1..6");
    require(random_theta_min < random_theta_max, "random_theta_min", "must be < random_theta_max");
    require(random_theta_min > -90 && random_theta_max < 90, "random_theta_max", "angles must lie in (-90, 90)");
    require(random_r_min > 0 && random_r_min < random_r_max, "random_r_min", "need 0 < random_r_min < random_r_max");
  } else {
    require(!sources.empty(), "sources", "at least one source required");
    require(static_cast<int>(sources.size()) <= eval::kMaxMatchedSources, "sources", "at most 6 sources");
    for (const auto& s : sources) {
      require(s.r > 0, "sources", "ranges must be > 0");
      require(s.theta > -90 && s.theta < 90, "sources", "angles must lie in (-90, 90)");
    }
  }
  require(source_count() < P * M0, "sources", "L < M required");
  require(!snr_db.empty(), "snr_db", "at least one value required");
  require(theta_min < theta_max, "theta_min", "must be < theta_max");
  require(theta_min > -90 && theta_max < 90, "theta_max", "grid angles must lie in (-90, 90)");
  require(G_theta >= 2, "G_theta", "must be >= 2");
  require(r_min > 0 && r_min < r_max, "r_min", "need 0 < r_min < r_max");
  require(G_r >= 1, "G_r", "must be >= 1");
  require(G_theta_c >= 2, "G_theta_c", "must be >= 2");
  require(guard_bins >= 0, "guard_bins", "must be >= 0");
  require(delta_theta > 0, "delta_theta", "must be > 0");
  require(G_delta >= 2, "G_delta", "must be >= 2");
  require(!algorithms.empty(), "algorithms", "at least one algorithm required");
  require(trials >= 1, "trials", "must be >= 1");
  require(beam_points >= 2, "beam_points", "must be >= 2");
  require(!out_dir.empty(), "out_dir", "must not be empty");
}

double RunConfig::lambda() const { return kSpeedOfLight / fc_hz; }

ArrayConfig<double> RunConfig::array() const {
  const double lam = lambda();
  const double dm = d.meters(lam);
  // Snap dp onto M0*d when it agrees to rounding, keeping contiguous arrays exact.
  double dpm = dp.meters(lam);
  if (std::abs(dpm - M0 * dm) <= 1e-12 * dpm) dpm = M0 * dm;
  return ArrayConfig<double>(P, M0, dm, dpm, fc_hz);
}

GridSpec<double> RunConfig::global_grid() const { return {theta_min, theta_max, G_theta, r_min, r_max, G_r}; }

ShareParams<double> RunConfig::share_params(int sources_L) const {
  ShareParams<double> p;
  p.coarse_grid = {theta_min, theta_max, G_theta_c, r_min, r_max, G_r};
  p.guard_bins = guard_bins;
  p.delta_theta = delta_theta;
  p.G_delta = G_delta;
  p.range_grid = global_grid();
  p.L = sources_L;
  return p;
}

CombinerBank<double> RunConfig::bank(int k) const { return dft_combiner_bank<double>(M0, k, P, policy, seed); }

std::vector<double> RunConfig::effective_snr() const {
  if (noiseless) return {std::numeric_limits<double>::infinity()};
  return snr_db;
}

eval::RunDescriptor RunConfig::run_descriptor() const {
  eval::RunDescriptor run;
  run.cfg = array();
  run.policy = policy;
  run.K_values = K;
  run.snr_db = effective_snr();
  run.N = N;
  run.sources.random = random_sources;
  run.sources.fixed = sources;
  run.sources.L = L;
  run.sources.theta_min = random_theta_min;
  run.sources.theta_max = random_theta_max;
  run.sources.r_min = random_r_min;
  run.sources.r_max = random_r_max;
  run.algorithms = algorithms;
  run.global_grid = global_grid();
  run.share = share_params(source_count());
  run.trials = trials;
  run.base_seed = seed;
  return run;
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream is(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    if ((key == "d_m" && seen.count("d_lambdas")) || (key == "d_lambdas" && seen.count("d_m")))
      throw ConfigError(where + "give only one of d_m and d_lambdas");
    if ((key == "dp_m" && seen.count("dp_lambdas")) || (key == "dp_lambdas" && seen.count("dp_m")))
      throw ConfigError(where + "give only one of dp_m and dp_lambdas");
    try {
      cfg.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string echo_config(const RunConfig& c) {
  std::ostringstream os;
  auto kv = [&](const std::string& k, const std::string& v) { os << k << " = " << v << '\n'; };
  auto num = [](double x) { return fmt_double(x); };
  auto integer = [](int x) { return std::to_string(x); };
  kv("P", integer(c.P));
  kv("M0", integer(c.M0));
  kv("fc_hz", num(c.fc_hz));
  kv(c.d.in_lambdas ? "d_lambdas" : "d_m", num(c.d.value));
  kv(c.dp.in_lambdas ? "dp_lambdas" : "dp_m", num(c.dp.value));
  kv("policy", to_string(c.policy));
  kv("K", join(c.K, integer));
  kv("N", integer(c.N));
  kv("source_mode", c.random_sources ? "random" : "fixed");
  kv("sources", join(c.sources, [&](const SourceTruth<double>& s) { return num(s.theta) + ":" + num(s.r); }));
  kv("L", integer(c.L));
  kv("random_theta_min", num(c.random_theta_min));
  kv("random_theta_max", num(c.random_theta_max));
  kv("random_r_min", num(c.random_r_min));
  kv("random_r_max", num(c.random_r_max));
  kv("snr_db", join(c.snr_db, num));
  kv("noiseless", c.noiseless ? "true" : "false");
  kv("theta_min", num(c.theta_min));
  kv("theta_max", num(c.theta_max));
  kv("G_theta", integer(c.G_theta));
  kv("r_min", num(c.r_min));
  kv("r_max", num(c.r_max));
  kv("G_r", integer(c.G_r));
  kv("G_theta_c", integer(c.G_theta_c));
  kv("guard_bins", integer(c.guard_bins));
  kv("delta_theta", num(c.delta_theta));
  kv("G_delta", integer(c.G_delta));
  kv("algorithms", join(c.algorithms, [](eval::Algorithm a) { return eval::to_string(a); }));
  kv("trials", integer(c.trials));
  kv("seed", std::to_string(c.seed));
  kv("beam_points", integer(c.beam_points));
  kv("out_dir", c.out_dir);
  return os.str();
}

}  // namespace share::config
