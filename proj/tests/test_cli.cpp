#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "beaconcap/cli.hpp"
#include "beaconcap/frame_codec.hpp"

namespace fs = std::filesystem;
using beaconcap::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("beaconcap_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(cli({}).code == 1);
  CHECK(cli({"bogus"}).code == 1);
  CHECK(cli({"simulate"}).code == 1);
  CHECK(cli({"simulate", "--preset", "nope"}).code == 1);
  CHECK(cli({"analyze", "--input", "x", "--windows", "1,zero"}).code == 1);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("missing input exits 2") {
  const auto dir = fresh_dir("missing");
  CHECK(cli({"analyze", "--input", (dir / "none.pcap").string(), "--out", dir.string()}).code == 2);
  const auto r = cli({"analyze", "--input", dir.string(), "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("no input files") != std::string::npos);
}

TEST_CASE("simulate then analyze reproduces the report") {
  const auto dir = fresh_dir("sim");
  auto r = cli({"simulate", "--preset", "zero-loss", "--mode", "monitor", "--runs", "2", "--duration-s", "20",
                "--out", dir.string(), "--no-header-timestamp"});
  REQUIRE(r.code == 0);
  const auto run_dir = dir / "zero-loss" / "monitor";
  CHECK(fs::exists(run_dir / "run_00.pcap"));
  CHECK(fs::exists(run_dir / "run_01.pcap"));
  CHECK(fs::exists(run_dir / "histogram.csv"));
  const auto sim_csv = slurp(run_dir / "report.csv");
  CHECK(sim_csv.find(",9.8000,") != std::string::npos);

  r = cli({"analyze", "--input", run_dir.string(), "--duration-s", "20", "--out", (dir / "an").string(),
           "--no-header-timestamp"});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "an" / "report.csv") == sim_csv);

  r = cli({"report", "--input", (dir / "an" / "report.json").string(), "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out == sim_csv);
}

TEST_CASE("analyze infers normal mode from arrival spacing") {
  const auto dir = fresh_dir("infer");
  REQUIRE(cli({"simulate", "--preset", "zero-loss", "--mode", "normal", "--runs", "1", "--duration-s", "30",
               "--emit", "csv", "--out", dir.string()})
              .code == 0);
  const auto r = cli({"analyze", "--input", (dir / "zero-loss" / "normal").string(), "--out",
                      (dir / "an").string(), "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "an" / "report.json").find("\"mode\": \"normal\"") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "an" / "report.csv"));
}

TEST_CASE("output directory from the environment") {
  const auto dir = fresh_dir("env");
  ::setenv(beaconcap::cli::kOutputDirEnv, dir.string().c_str(), 1);
  const auto r = cli({"simulate", "--preset", "distance-strong", "--mode", "monitor", "--runs", "1",
                      "--duration-s", "5", "--emit", "none"});
  ::unsetenv(beaconcap::cli::kOutputDirEnv);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "distance-strong" / "monitor" / "report.json"));
}

TEST_CASE("bad scenario file exits 2") {
  const auto dir = fresh_dir("badscn");
  std::ofstream(dir / "s.json") << R"({"aps": [{"bssid": "zz"}]})";
  const auto r = cli({"simulate", "--scenario", (dir / "s.json").string(), "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("aps[0].bssid") != std::string::npos);
}

TEST_CASE("calibrate reports infeasible targets with exit 3") {
  const auto dir = fresh_dir("cal");
  std::ofstream(dir / "req.json") << R"({"targets": [{"preset": "zero-loss", "mode": "monitor", "rate": 10.5}]})";
  const auto r = cli({"calibrate", "--scenario", (dir / "req.json").string(), "--out", dir.string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("infeasible") != std::string::npos);
}

TEST_CASE("calibrate writes annotated scenarios") {
  const auto dir = fresh_dir("cal_ok");
  std::ofstream(dir / "req.json")
      << R"({"free": ["traffic_loss_prob"], "targets": [{"preset": "zero-loss", "mode": "monitor", "rate": 9.0}]})";
  const auto r = cli({"calibrate", "--scenario", (dir / "req.json").string(), "--out", dir.string(),
                      "--no-header-timestamp"});
  REQUIRE(r.code == 0);
  const auto text = slurp(dir / "zero-loss-monitor.json");
  CHECK(text.find("\"achieved_rate_pps\"") != std::string::npos);
}

TEST_CASE("radiomap from files with coordinates") {
  const auto dir = fresh_dir("rm");
  REQUIRE(cli({"simulate", "--preset", "distance-strong", "--mode", "monitor", "--runs", "1", "--duration-s",
               "10", "--out", dir.string()})
              .code == 0);
  const auto pcap = (dir / "distance-strong" / "monitor" / "run_00.pcap").string();
  const auto r = cli({"radiomap", "--input", "A@1.5,2=" + pcap, "--input", "B=" + pcap, "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto csv = slurp(dir / "radiomap.csv");
  CHECK(csv.find("A,1.500,2.000,") != std::string::npos);
  CHECK(csv.find("B,0.000,0.000,") != std::string::npos);
  CHECK(slurp(dir / "survey.csv").find("rp_id,bssid,rate_pps,samples_needed,survey_time_s") == 0);
  CHECK(cli({"radiomap", "--input", "nocolon", "--out", dir.string()}).code == 1);
}
