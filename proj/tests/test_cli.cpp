#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nsf/config.hpp"
#include "nsf/errors.hpp"
#include "nsf/run.hpp"

using namespace nsf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kSmall = R"(
# tiny study used by the determinism test
grid.n1 = 128
grid.n2 = 16
epsilons = 0.2, 0.1, 0.05
orders = 1
time.T = 0.05
time.macro_dt = 0.005
time.outputs = 2
threads = 1
)";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("key = value configuration") {
    RunConfig c = parse_config(kSmall);
    CHECK(c.grid.n1 == 128);
    CHECK(c.grid.n2 == 16);
    CHECK(c.epsilons == std::vector<double>{0.2, 0.1, 0.05});
    CHECK(c.orders == std::vector<int>{1});
    CHECK(c.T == 0.05);
    CHECK(c.max_order() == 1);
    CHECK_NOTHROW(c.validate());
  }

  TEST_CASE("JSON configuration maps nested objects to dotted keys") {
    RunConfig c = parse_config(R"({"grid": {"n1": 256, "grading": "uniform"}, "epsilons": [0.3, 0.1, 0.01],
                                   "background": {"name": "constant", "rho0": 2.0}})");
    CHECK(c.grid.n1 == 256);
    CHECK(c.grid.grading == Grading::Uniform);
    CHECK(c.epsilons.size() == 3);
    CHECK(c.bg_params.at("rho0") == 2.0);
  }

  TEST_CASE("invalid configurations") {
    auto kind = [](auto&& f) {
      try {
        f();
      } catch (const NsfError& e) {
        return static_cast<int>(e.kind());
      }
      return -1;
    };
    CHECK(kind([] { parse_config("epsilons =\n").validate(); }) == static_cast<int>(ErrorKind::ConfigError));
    CHECK(kind([] { parse_config("epsilons = 0.1, 0.2\n").validate(); }) == static_cast<int>(ErrorKind::ConfigError));
    CHECK(kind([] { parse_config("grid.nonsense = 1\n"); }) == static_cast<int>(ErrorKind::ConfigError));
    CHECK(kind([] { parse_config("grid.n1 = many\n"); }) == static_cast<int>(ErrorKind::ConfigError));
    CHECK(kind([] { parse_config("orders = 7\n").validate(); }) == static_cast<int>(ErrorKind::ConfigError));
  }

  TEST_CASE("canonical rendering is stable") {
    RunConfig a = parse_config("grid.n1 = 64\nepsilons = 0.2, 0.1, 0.05\n");
    RunConfig b = parse_config("epsilons=0.2,0.1,0.05\n\n# comment\ngrid.n1=64\n");
    CHECK(canonical_config(a) == canonical_config(b));
    b.grid.n1 = 65;
    CHECK(canonical_config(a) != canonical_config(b));
    CHECK(canonical_config(parse_config(canonical_config(a))) == canonical_config(a));
  }

  TEST_CASE("matrices output is JSON with the boundary frame") {
    std::string j = matrices_json(RunConfig{}, 0.0, 0.0);
    CHECK(j.front() == '{');
    CHECK(j.find("A0") != std::string::npos);
  }

  TEST_CASE("a small study writes identical CSV files twice") {
    RunConfig cfg = parse_config(kSmall);
    const fs::path base = fs::temp_directory_path() / "nsf_cli_test";
    fs::remove_all(base);
    auto h1 = write_study(run_study(cfg), base / "a");
    auto h2 = write_study(run_study(cfg), base / "b");
    for (const char* name : {"converge_N1.csv", "energy_N1.csv"}) {
      const std::string a = slurp(base / "a" / name), b = slurp(base / "b" / name);
      CHECK(!a.empty());
      CHECK(a == b);
      CHECK(h1.at(name) == h2.at(name));
    }
    std::istringstream csv(slurp(base / "a" / "converge_N1.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "epsilon,err_rho,err_v1,err_v2,err_theta\r");  // RFC 4180 line ends
    int rows = 0;
    while (std::getline(csv, line))
      if (line.size() > 1) ++rows;
    CHECK(rows == 3);
    CHECK(fs::exists(base / "a" / "summary.json"));
    CHECK(fs::exists(base / "a" / "manifest.json"));
    fs::remove_all(base);
  }
}
