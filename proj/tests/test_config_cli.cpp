#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "share/cli.hpp"
#include "share/config.hpp"
#include "share/csv.hpp"

namespace fs = std::filesystem;
using share::config::ConfigError;
using share::config::parse_config_text;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string body_of(const std::string& csv) {
  std::istringstream is(csv);
  std::string line, out;
  while (std::getline(is, line))
    if (line.rfind('#', 0) != 0) out += line + '\n';
  return out;
}

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = share::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("share_cli_tests_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string message_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("empty config gives the reference defaults") {
  const auto c = parse_config_text("# nothing here\n\n");
  CHECK(c.P == 4);
  CHECK(c.M0 == 16);
  CHECK(c.fc_hz == 60.48e9);
  CHECK(c.K == std::vector<int>{16});
  CHECK(c.N == 32);
  CHECK(c.trials == 100);
  const auto a = c.array();
  CHECK(a.d() == doctest::Approx(0.5 * c.lambda()).epsilon(1e-15));
  CHECK(a.dp() == doctest::Approx(16 * c.lambda()).epsilon(1e-15));
  CHECK(c.global_grid().G_theta == 121);
  CHECK(c.share_params(1).coarse_grid.G_theta == 41);
}

TEST_CASE("config values and errors") {
  const auto c = parse_config_text("dp_lambdas = 16\nsnr_db = 0, 10, inf  # sweep\nsources = -10:2.5, 20:7\n");
  CHECK(c.array().dp() == doctest::Approx(16 * c.lambda()));
  REQUIRE(c.snr_db.size() == 3);
  CHECK(std::isinf(c.snr_db[2]));
  CHECK(c.source_count() == 2);
  CHECK(c.sources[1].r == 7.0);

  const auto contiguous = parse_config_text("dp_m = 0.0396550870370370\n");
  CHECK(contiguous.array().contiguous());

  CHECK(message_of("K = 17\n").find("K <= M0") != std::string::npos);
  CHECK(message_of("P = 4\nbogus_key = 1\n").find("line 2") != std::string::npos);
  CHECK(message_of("P = 4\nbogus_key = 1\n").find("bogus_key") != std::string::npos);
  CHECK(message_of("N = 3x\n").find("line 1") != std::string::npos);
  CHECK(message_of("just words\n").find("line 1") != std::string::npos);
  CHECK(message_of("d_m = 0.002\nd_lambdas = 0.5\n").find("d_m") != std::string::npos);
  CHECK(message_of("N = 1\nN = 2\n").find("duplicate") != std::string::npos);
  CHECK(message_of("dp_lambdas = 4\n") != "");
  CHECK(message_of("algorithms = share, esprit\n").find("esprit") != std::string::npos);
}

TEST_CASE("config echo round-trips") {
  const auto c = parse_config_text(
      "source_mode = random\nL = 2\nK = 4, 8\nsnr_db = -5, inf\nd_m = 0.0025\npolicy = random\nseed = 12345678901\n"
      "fc_hz = 60.1e9\nalgorithms = omp2d\n");
  const std::string echo = share::config::echo_config(c);
  CHECK(share::config::echo_config(parse_config_text(echo)) == echo);
  CHECK(echo.find("seed = 12345678901") != std::string::npos);
}

TEST_CASE("cli: usage errors") {
  auto r = cli({});
  CHECK(r.code == 2);
  CHECK(r.err.find("usage") != std::string::npos);
  r = cli({"plot"});
  CHECK(r.code == 2);
  CHECK(r.err.find("plot") != std::string::npos);
  r = cli({"flops", "--no-such-flag"});
  CHECK(r.code == 2);
  r = cli({"flops", "--set", "K=17"});
  CHECK(r.code == 1);
  CHECK(r.err.find("K <= M0") != std::string::npos);
  CHECK(r.err.find('\n') == r.err.size() - 1);
  std::ostringstream out, err;
  CHECK(share::cli::dispatch("plot", parse_config_text(""), out, err) == 2);
}

TEST_CASE("cli: flops reproduces the cost table") {
  const auto dir = scratch("flops");
  const auto r = cli({"flops", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(body_of(slurp(dir / "flops.csv")) == "algorithm,flops\nmusic2d,31981568\nomp2d,15859712\nshare,1918976\n");
}

TEST_CASE("cli: beampattern peak counts") {
  const auto dir = scratch("beam");
  auto r = cli({"beampattern", "--out-dir", dir.string(), "--set", "sources=43:4.8", "--set", "dp_lambdas=8"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("1 peak(s)") != std::string::npos);
  const std::string csv = slurp(dir / "spectrum.csv");
  CHECK(body_of(csv).rfind("theta_deg,value\n", 0) == 0);
  CHECK(csv.find("# beampattern target = 43 deg, 4.8 m") != std::string::npos);
}

TEST_CASE("cli: noiseless single trial on the grid has zero error") {
  const auto dir = scratch("mc");
  std::ostringstream src;
  src.precision(17);
  src << "sources=0:" << share::GridSpec<double>{}.ranges()[24];
  const auto r = cli({"monte-carlo", "--trials", "1", "--noiseless", "--out-dir", dir.string(), "--set", src.str()});
  REQUIRE(r.code == 0);
  std::istringstream rows(body_of(slurp(dir / "metrics.csv")));
  std::string line;
  std::getline(rows, line);
  CHECK(line == "trial,algorithm,snr_db,L,K,theta_rmse_deg,range_rmse_m,pos_rmse_m,failed");
  int n = 0;
  while (std::getline(rows, line)) {
    ++n;
    CHECK(line.find(",0,0,0,0") != std::string::npos);
  }
  CHECK(n == 3);
}

TEST_CASE("cli: identical configs give byte-identical CSVs, and the echo reproduces the run") {
  const auto dir = scratch("repro");
  const auto conf = dir / "run.conf";
  std::ofstream(conf) << "sources = 43.3:4.8, 43.8:4.6\nsnr_db = 0, 10\ntrials = 2\nK = 8\nout_dir = " << dir.string() << "\n";
  for (const std::string sub : {"monte-carlo", "estimate", "spectrum"}) {
    REQUIRE(cli({sub, "--config", conf.string()}).code == 0);
    const std::string name = sub == "monte-carlo" ? "metrics.csv" : sub == "estimate" ? "estimates.csv" : "spectrum.csv";
    const std::string first = slurp(dir / name);
    REQUIRE(cli({sub, "--config", conf.string()}).code == 0);
    CHECK(slurp(dir / name) == first);

    // Re-running from the echoed config alone reproduces the same bytes.
    const auto echoed = dir / "echoed.conf";
    std::ofstream(echoed) << share::csv::extract_echoed_config(first);
    REQUIRE(cli({sub, "--config", echoed.string()}).code == 0);
    CHECK(slurp(dir / name) == first);
  }
}
