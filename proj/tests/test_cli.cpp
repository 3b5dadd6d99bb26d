#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string(WGQED_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Data rows of a CSV, keyed by column name; '#' lines skipped.
std::vector<std::map<std::string, std::string>> parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::string> cols;
  std::vector<std::map<std::string, std::string>> rows;
  auto split = [](const std::string& l) {
    std::vector<std::string> v;
    std::stringstream ss(l);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(cell);
    return v;
  };
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (cols.empty()) {
      cols = split(line);
      continue;
    }
    const auto cells = split(line);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < cols.size() && i < cells.size(); ++i) row[cols[i]] = cells[i];
    rows.push_back(row);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "wgqed_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("poles at the first resonance") {
  const Run r = run("poles --omega0 1.25 --lambda 0.01 --mass 1 --distance auto:n=1");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "poles");
  CHECK(j["plus.gamma_p"].get<double>() <= 1e-8);
  CHECK(j["minus.gamma_p"].get<double>() == doctest::Approx(3.35e-3).epsilon(0.02));
  CHECK(j["config.distance"].get<double>() == doctest::Approx(M_PI / 0.7503332859).epsilon(1e-8));
  CHECK(j.contains("minus.gamma_eq31"));
  CHECK(j.contains("plus.perturbative.E_p"));
}

TEST_CASE("free theory poles") {
  const Run r = run("poles --omega0 1.25 --lambda 0 --distance 3");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["plus.E_p"].get<double>() == 1.25);
  CHECK(j["minus.E_p"].get<double>() == 1.25);
  CHECK(j["plus.gamma_p"].get<double>() == 0.0);
  CHECK(j["minus.gamma_p"].get<double>() == 0.0);
}

TEST_CASE("configuration errors exit with code 2") {
  const Run below = run("poles --omega0 0.5 --distance auto", true);
  CHECK(below.code == 2);
  CHECK(below.out.find("no resonant wavenumber") != std::string::npos);
  CHECK(run("trajectory --start 1.0 --stop 1.2 --steps 1").code == 2);
  CHECK(run("poles --format xml").code == 2);
  CHECK(run("poles --mass -1 --distance 2").code == 2);
  CHECK(run("offres --omega0 1.2 --distance 5").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("simulate --modes 400").code == 2);
}

TEST_CASE("trajectory CSV and sweep reversal") {
  const std::string common = " --omega0 1 --lambda 0.01 --distance 15 --steps 13 --sector plus --format csv";
  const Run fwd = run("trajectory --start 1.15 --stop 1.21" + common);
  const Run bwd = run("trajectory --start 1.21 --stop 1.15" + common);
  REQUIRE(fwd.code == 0);
  REQUIRE(bwd.code == 0);
  const auto a = parse_csv(fwd.out), b = parse_csv(bwd.out);
  REQUIRE(a.size() == 13);
  REQUIRE(b.size() == 13);
  for (const char* col : {"sweep_value", "sector", "E_p", "gamma_p", "defect"}) CHECK(a[0].count(col) == 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[a.size() - 1 - i];
    CHECK(std::stod(x.at("sweep_value")) == doctest::Approx(std::stod(y.at("sweep_value"))).epsilon(1e-14));
    CHECK(std::abs(std::stod(x.at("E_p")) - std::stod(y.at("E_p"))) < 1e-9);
    CHECK(std::abs(std::stod(x.at("gamma_p")) - std::stod(y.at("gamma_p"))) < 1e-9);
  }
  // Deterministic output.
  CHECK(run("trajectory --start 1.15 --stop 1.21" + common).out == fwd.out);
}

TEST_CASE("concurrence scan is independent of the worker count") {
  const std::string args = "concurrence-scan --start 1.0 --stop 1.35 --steps 15 --n-list 1 2 3";
  const Run one = run(args + " --jobs 1");
  const Run four = run(args + " --jobs 4");
  REQUIRE(one.code == 0);
  CHECK(one.out == four.out);
  const auto rows = parse_csv(one.out);
  REQUIRE(rows.size() == 45);
  for (const auto& r : rows) CHECK(std::stod(r.at("concurrence")) <= 0.5);

  const Run verbose = run("concurrence-scan --start 1.2 --stop 1.3 --steps 2 --n-list 1 --verbose --no-header");
  REQUIRE(verbose.code == 0);
  CHECK(verbose.out.rfind("omega0,", 0) == 0);
  CHECK(verbose.out.find("concurrence_quadrature") != std::string::npos);
}

TEST_CASE("energy density nodes and antinode") {
  const Run r = run("energy-density --points 3 --margin 0 --no-header");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(std::abs(std::stod(rows[0].at("energy_density"))) < 1e-18);
  CHECK(std::abs(std::stod(rows[2].at("energy_density"))) < 1e-15);
  CHECK(std::stod(rows[1].at("energy_density")) > 0.0);
}

TEST_CASE("off-resonant report") {
  const Run r = run("offres --omega0 0.8 --lambda 0.01 --distance 5");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["alpha"].get<double>() == doctest::Approx(-8.32697e-4).epsilon(1e-5));
  CHECK(j["period"].get<double>() == doctest::Approx(120513.2).epsilon(1e-6));
  CHECK(j["nonperturbative"] == false);
}

TEST_CASE("output formatting flags") {
  const Run exact = run("poles --exact");
  REQUIRE(exact.code == 0);
  const auto j = nlohmann::json::parse(exact.out);
  CHECK(j["minus.gamma_p"].is_string());
  CHECK(std::stod(j["minus.gamma_p"].get<std::string>()) == doctest::Approx(3.369e-3).epsilon(1e-3));

  const Run csv = run("poles --format csv --no-header");
  REQUIRE(csv.code == 0);
  CHECK(csv.out.find('#') == std::string::npos);
  CHECK(run("poles --format csv").out.rfind("# command = poles", 0) == 0);
}

TEST_CASE("file output is complete and leaves no temporary") {
  const fs::path out = scratch("poles.json");
  fs::remove(out);
  REQUIRE(run("poles --out " + out.string()).code == 0);
  REQUIRE(fs::exists(out));
  CHECK_FALSE(fs::exists(out.string() + ".tmp"));
  std::ifstream in(out);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["command"] == "poles");
}

TEST_CASE("config file") {
  const fs::path cfg = scratch("run.ini");
  {
    std::ofstream os(cfg);
    os << "omega0 = 0.8\nlambda = 0.01\ndistance = 5\n";
  }
  const Run r = run("offres --config " + cfg.string());
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["config.omega0"].get<double>() == 0.8);
  // Flags override the file.
  const Run o = run("offres --config " + cfg.string() + " --omega0 0.7");
  REQUIRE(o.code == 0);
  CHECK(nlohmann::json::parse(o.out)["config.omega0"].get<double>() == 0.7);

  const fs::path bad = scratch("bad.ini");
  {
    std::ofstream os(bad);
    os << "omega0 = 0.8\nno_such_key = 1\n";
  }
  CHECK(run("offres --config " + bad.string()).code == 2);
}

TEST_CASE("small simulation") {
  const Run r = run("simulate --modes 601 --t-steps 4 --t-max 200 --format csv --no-header");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(std::stod(rows[0].at("pop_a")) == doctest::Approx(1.0));
  CHECK(std::stod(rows[0].at("concurrence")) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(std::stod(rows[3].at("concurrence")) > 0.1);
}
