#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "json.hpp"
#include "qsplit/cli.hpp"
#include "qsplit/error.hpp"

using namespace qsplit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("qsplit_cli_" + tag + "_" + std::to_string(getpid()));
  fs::remove_all(p);
  return p;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("argument parsers") {
  CHECK(cli::parse_fraction("2/3") == doctest::Approx(2.0 / 3.0));
  CHECK(cli::parse_fraction("0.25") == 0.25);
  CHECK_THROWS_AS(cli::parse_fraction("1/0"), PreconditionError);
  const auto g = cli::parse_grid("1e-3:0.5:100");
  CHECK(g.lo == 1e-3);
  CHECK(g.count == 100);
  CHECK_THROWS_AS(cli::parse_grid("0.5:0.1:3"), PreconditionError);
  CHECK_THROWS_AS(cli::parse_grid("0.5:0.1"), PreconditionError);
  CHECK(cli::parse_list("3,6").size() == 2);
}

TEST_CASE("fixed-node subcommand") {
  const fs::path d = scratch("fixed");
  REQUIRE(cli::run({"qsplit", "fixed-node", "--state", "3,6", "--x0", "2/3", "--out", d.string(), "--quiet"}) == 0);
  const auto j = read_json(d / "fixed_node.json");
  CHECK(j["E_left"].get<double>() == doctest::Approx(15.0));
  CHECK(j["E_right"].get<double>() == doctest::Approx(7.5));
  CHECK(j["collapse"].size() == 4);
  const auto m = read_json(d / "manifest.json");
  CHECK(m["subcommand"] == "fixed-node");
  CHECK(m["checksums"].contains("fixed_node.json"));
  CHECK(m["parameters"]["--x0"] == "2/3");
  fs::remove_all(d);
}

TEST_CASE("sudden subcommand") {
  const fs::path d = scratch("sudden");
  REQUIRE(cli::run({"qsplit", "sudden", "--epsilon", "0.1", "--terms", "25000", "--out", d.string(), "--quiet"}) == 0);
  const auto j = read_json(d / "sudden.json");
  CHECK(j["energy_sum"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  const std::string csv = read_text(d / "coefficients.csv");
  CHECK(csv.rfind("n,a_n,b_n\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 25001);
  fs::remove_all(d);
}

TEST_CASE("daemon subcommand") {
  const fs::path d = scratch("daemon");
  REQUIRE(cli::run({"qsplit", "daemon", "--epsilon-grid", "1e-3:0.5:100", "--out", d.string(), "--quiet"}) == 0);
  std::ifstream in(d / "ledger.csv");
  std::string line, last;
  while (std::getline(in, line)) last = line;
  CHECK(last.rfind("0.5,", 0) == 0);
  const double s = std::stod(last.substr(last.find(',', 4) + 1));
  CHECK(s == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  fs::remove_all(d);
}

TEST_CASE("SI time conversion") {
  const fs::path a = scratch("si");
  const fs::path b = scratch("tau");
  REQUIRE(cli::run({"qsplit", "evolve", "--units", "SI", "--time", "1e-17", "--points", "51", "--terms", "500",
                    "--boundary-probe", "false", "--out", a.string(), "--quiet"}) == 0);
  REQUIRE(cli::run({"qsplit", "evolve", "--points", "51", "--terms", "500", "--boundary-probe", "false",
                    "--out", b.string(), "--quiet"}) == 0);
  CHECK(read_text(a / "grid.csv") == read_text(b / "grid.csv"));
  CHECK(read_json(a / "grid.json")["time_tau"].get<double>() == doctest::Approx(0.57129).epsilon(1e-4));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("exit codes") {
  const fs::path d = scratch("err");
  CHECK(cli::run({"qsplit", "sudden", "--epsilon", "1.5", "--out", d.string(), "--quiet"}) == 2);
  CHECK(cli::run({"qsplit", "sudden", "--bogus"}) == 2);
  CHECK(cli::run({"qsplit"}) == 2);
  CHECK(cli::run({"qsplit", "fatstate", "--nu", "-1", "--out", d.string(), "--quiet"}) == 2);
  CHECK(cli::run({"qsplit", "fixed-node", "--x0", "0.5", "--out", d.string(), "--quiet"}) == 2);
  CHECK(cli::run({"qsplit", "daemon", "--out", "/proc/qsplit_no_such_dir", "--quiet"}) == 2);
  fs::remove_all(d);
}
