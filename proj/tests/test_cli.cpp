#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;

namespace {

std::string cli_path() { return CINF_CLI_PATH; }

int run(const std::string& args) {
  const std::string cmd =
      "cd /tmp && " + cli_path() + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int data_rows(const std::string& csv_text) {
  int n = -1;  // skip header
  std::istringstream ss(csv_text);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) ++n;
  return n;
}

}  // namespace

TEST_CASE("pt-curve writes the requested grid and a manifest") {
  const int rc = run(
      "pt-curve --scenario ac --eta 0.5:0.9:0.1 "
      "--out cli_curve.csv --manifest cli_curve_manifest.json");
  CHECK(rc == 0);
  const std::string csv = slurp("/tmp/cli_curve.csv");
  CHECK(data_rows(csv) == 5);  // stop is inclusive
  json m = json::parse(slurp("/tmp/cli_curve_manifest.json"));
  CHECK(m.at("command") == "pt-curve");
  CHECK(m.at("success").get<bool>());
  CHECK(m.at("artifacts").size() == 1);
  CHECK(m.at("wall_seconds").get<double>() >= 0.0);
}

TEST_CASE("pt-curve alpha scenario uses the alpha flag") {
  CHECK(run("pt-curve --scenario ac-alpha --alpha 0.3:0.9:0.3 "
            "--out cli_alpha.csv --manifest cli_alpha_manifest.json") == 0);
  const std::string csv = slurp("/tmp/cli_alpha.csv");
  CHECK(csv.rfind("alpha,beta_wc,beta_ac", 0) == 0);
  CHECK(data_rows(csv) == 3);
  // missing the abscissa is a failure, but the manifest still appears
  CHECK(run("pt-curve --scenario ac-alpha "
            "--out cli_bad.csv --manifest cli_bad_manifest.json") != 0);
  json m = json::parse(slurp("/tmp/cli_bad_manifest.json"));
  CHECK_FALSE(m.at("success").get<bool>());
}

TEST_CASE("certify produces a verdict file and a reloadable instance") {
  const int rc = run(
      "certify --n 30 --k 4 --eta 0.8 --seed 11 "
      "--save-instance cli_inst.json --out cli_cert.json "
      "--manifest cli_cert_manifest.json");
  CHECK(rc == 0);
  json cert = json::parse(slurp("/tmp/cli_cert.json"));
  CHECK(cert.at("n").get<int>() == 30);
  CHECK(cert.at("k").get<int>() == 4);
  CHECK(cert.at("lambda_max").get<double>() > 0.0);

  // certifying the saved instance reproduces the verdict exactly
  CHECK(run("certify --instance cli_inst.json --out cli_cert2.json "
            "--manifest cli_cert2_manifest.json") == 0);
  json cert2 = json::parse(slurp("/tmp/cli_cert2.json"));
  CHECK(cert2.at("lambda_max").get<double>() ==
        cert.at("lambda_max").get<double>());
  CHECK(cert2.at("equivalent") == cert.at("equivalent"));
}

TEST_CASE("certify handles the rank-zero edge case") {
  CHECK(run("certify --n 20 --k 0 --eta 0.8 --out cli_k0.json "
            "--manifest cli_k0_manifest.json") == 0);
  json cert = json::parse(slurp("/tmp/cli_k0.json"));
  CHECK(cert.at("lambda_max").get<double>() == 0.0);
  CHECK(cert.at("equivalent").get<bool>());
}

TEST_CASE("simulate reruns are byte identical") {
  const std::string args =
      "simulate --n 24 --eta 0.75 --k 2:8:3 --trials 3 --seed 7 "
      "--method certificate --manifest cli_sim_manifest.json";
  CHECK(run(args + " --out-prefix cli_sim_a") == 0);
  CHECK(run(args + " --out-prefix cli_sim_b") == 0);
  CHECK(slurp("/tmp/cli_sim_a_grid.csv") == slurp("/tmp/cli_sim_b_grid.csv"));
  const std::string sa = slurp("/tmp/cli_sim_a_summary.json");
  const std::string sb = slurp("/tmp/cli_sim_b_summary.json");
  CHECK(sa == sb);
  json m = json::parse(slurp("/tmp/cli_sim_manifest.json"));
  CHECK(m.at("master_seed").get<std::uint64_t>() == 7);
  CHECK(m.at("artifacts").size() == 2);
}

TEST_CASE("simulate failure exits nonzero and still leaves a manifest") {
  // k exceeds l = 12, so the grid is rejected after parsing
  CHECK(run("simulate --n 24 --eta 0.5 --k 15 --trials 2 "
            "--out-prefix cli_sim_fail "
            "--manifest cli_sim_fail_manifest.json") != 0);
  json m = json::parse(slurp("/tmp/cli_sim_fail_manifest.json"));
  CHECK(m.at("command") == "simulate");
  CHECK_FALSE(m.at("success").get<bool>());
  CHECK(m.at("artifacts").empty());
}

TEST_CASE("simulate rejects nonpositive trials at the flag level") {
  CHECK(run("simulate --n 20 --eta 0.8 --k 2 --trials 0 "
            "--out-prefix cli_sim_t0 --manifest cli_sim_t0_manifest.json") !=
        0);
}

TEST_CASE("spectrum theory-only emits density and edge data") {
  const int rc = run(
      "spectrum --beta 0.4 --eta 0.9 --theory-only --grid-points 60 "
      "--out cli_density.csv --manifest cli_density_manifest.json");
  CHECK(rc == 0);
  CHECK(data_rows(slurp("/tmp/cli_density.csv")) == 60);
  json edge = json::parse(slurp("/tmp/cli_density.csv.edge.json"));
  CHECK(edge.at("y_opt").get<double>() == doctest::Approx(0.25));
  CHECK(edge.at("upper_edge").get<double>() == doctest::Approx(1.0).epsilon(0.01));
  json m = json::parse(slurp("/tmp/cli_density_manifest.json"));
  CHECK(m.at("artifacts").size() == 2);
}

TEST_CASE("spectrum monte carlo path at small n") {
  const int rc = run(
      "spectrum --beta 0.4 --eta 0.9 --n 120 --trials 1 --grid-points 80 "
      "--seed 2 --out cli_spec.csv --manifest cli_spec_manifest.json");
  CHECK(rc == 0);
  CHECK(data_rows(slurp("/tmp/cli_spec.csv")) == 80);
  json edge = json::parse(slurp("/tmp/cli_spec.csv.edge.json"));
  CHECK(edge.contains("l1_distance"));
  CHECK(edge.at("l1_distance").get<double>() < 1.0);
}

TEST_CASE("unknown subcommand fails") {
  CHECK(run("frobnicate") != 0);
}
