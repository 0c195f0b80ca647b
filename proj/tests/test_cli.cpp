#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fracrd/app.hpp"
#include "fracrd/config.hpp"
#include "fracrd/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

using namespace fracrd;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path configs = FRACRD_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "fracrd_test_cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

const char* linear_ini = R"(
[domain]
lengths = 1.0
grid = 64
n_modes = 8

[model]
alpha = 0.5
s = 1.0
mu = 0
k = 0
gamma = 0

[run]
scheme = mild
dt = 0.01
t_final = 1
c_gn = 1.0
)";

// (t, L2) columns of a norms.csv
std::vector<std::pair<double, double>> read_l2(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<double, double>> out;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string t, l1, l2;
    std::getline(ls, t, ',');
    std::getline(ls, l1, ',');
    std::getline(ls, l2, ',');
    out.emplace_back(std::stod(t), std::stod(l2));
  }
  return out;
}

} // namespace

TEST_CASE("config parsing") {
  std::istringstream in(linear_ini);
  const auto cfg = parse_config(in);
  CHECK(cfg.domain.dimension == 1);
  CHECK(cfg.n_modes == 8);
  CHECK(cfg.model.alpha == 0.5);
  CHECK(cfg.run.scheme == Scheme::mild);
  REQUIRE(cfg.c_gn.has_value());
  CHECK(*cfg.c_gn == 1.0);

  std::istringstream two("[domain]\nlengths = 1, 2\ngrid = 32, 48\n[run]\nc_gn = probe\n");
  const auto c2 = parse_config(two);
  CHECK(c2.domain.dimension == 2);
  CHECK(c2.domain.grid_points == std::vector<int>{32, 48});
  CHECK_FALSE(c2.c_gn.has_value());

  for (const auto& f : fs::directory_iterator(configs))
    if (f.path().extension() == ".ini") {
      INFO(f.path().string());
      CHECK_NOTHROW(load_config(f.path().string()).validate());
    }
}

TEST_CASE("config errors name the key") {
  std::istringstream unknown("[model]\nalpha = 0.5\nbogus = 1\n[run]\nwhat = 2\n");
  try {
    parse_config(unknown);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("model.bogus") != std::string::npos);
    CHECK(std::string(e.what()).find("run.what") != std::string::npos);
  }

  std::istringstream alpha("[model]\nalpha = 1.5\n");
  try {
    parse_config(alpha).validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "model.alpha");
  }

  std::istringstream junk("[run]\ndt = fast\n");
  CHECK_THROWS_AS(parse_config(junk), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/fracrd.ini"), ConfigError);
}

TEST_CASE("single keys and sweepable keys") {
  RunConfig cfg;
  set_config_value(cfg, "model.k", "2.5");
  CHECK(cfg.model.k == 2.5);
  set_config_value(cfg, "eta", "0.25");
  CHECK(cfg.kernel.eta == 0.25);
  CHECK_THROWS_AS(set_config_value(cfg, "nope", "1"), ConfigError);
  CHECK(canonical_sweep_key("alpha") == "model.alpha");
  CHECK(canonical_sweep_key("run.dt") == "run.dt");
  CHECK_THROWS_AS(canonical_sweep_key("run.output"), ConfigError);
  CHECK_THROWS_AS(canonical_sweep_key("kernel.kind"), ConfigError);
}

TEST_CASE("run: decay config") {
  const auto out = scratch("decay");
  std::ostringstream so, se;
  CHECK(cmd_run((configs / "decay.ini").string(), out.string(), so, se) == exit_ok);
  const auto rep = json::parse(slurp(out / "report.json"));
  CHECK(rep["status"] == "ok");
  CHECK(rep["exit_code"] == 0);
  CHECK(rep["envelope_applicable"] == true);
  CHECK(rep["envelope_dominated"] == true);
  CHECK(fs::exists(out / "norms.csv"));
  CHECK(fs::exists(out / "coeffs_final.csv"));
}

TEST_CASE("run: blow-up config") {
  const auto out = scratch("blowup");
  std::ostringstream so, se;
  CHECK(cmd_run((configs / "blowup.ini").string(), out.string(), so, se) == exit_blowup);
  const auto rep = json::parse(slurp(out / "report.json"));
  CHECK(rep["status"] == "blowup");
  CHECK(rep["blowup"]["detected"] == true);
  CHECK(rep["blowup"]["hypothesis_met"] == true);
  CHECK(rep["blowup"]["t_blow_numeric"].get<double>() >= rep["blowup"]["t_lower"].get<double>());
}

TEST_CASE("run: invalid alpha") {
  const auto dir = scratch("bad_alpha");
  std::string text = linear_ini;
  text.replace(text.find("alpha = 0.5"), 11, "alpha = 1.5");
  const auto cfg = write_file(dir / "bad.ini", text);
  std::ostringstream so, se;
  CHECK(cmd_run(cfg.string(), (dir / "out").string(), so, se) == exit_failure);
  CHECK(se.str().find("alpha") != std::string::npos);
  const auto rep = json::parse(slurp(dir / "out" / "report.json"));
  CHECK(rep["exit_code"] == 1);
  CHECK(rep["error_key"] == "model.alpha");
}

TEST_CASE("run: identical configs give identical norms") {
  const auto dir = scratch("determinism");
  const auto cfg = write_file(dir / "lin.ini", linear_ini);
  std::ostringstream so, se;
  REQUIRE(cmd_run(cfg.string(), (dir / "a").string(), so, se) == exit_ok);
  REQUIRE(cmd_run(cfg.string(), (dir / "b").string(), so, se) == exit_ok);
  CHECK(slurp(dir / "a" / "norms.csv") == slurp(dir / "b" / "norms.csv"));
  CHECK(slurp(dir / "a" / "report.json") == slurp(dir / "b" / "report.json"));
}

TEST_CASE("verify") {
  std::ostringstream so, se;
  CHECK(cmd_verify("nope", so, se) == exit_failure);
  CHECK(se.str().find("nope") != std::string::npos);

  std::ostringstream out;
  CHECK(cmd_verify("mlf", out, se) == exit_ok);
  const auto line = json::parse(out.str());
  CHECK(line["id"] == "C1");
  CHECK(line["pass"] == true);
  for (const char* key : {"measured", "bound", "runtime_ms"})
    CHECK(line.contains(key));
}

TEST_CASE("sweep argument errors") {
  const auto dir = scratch("sweep_err");
  const auto cfg = write_file(dir / "lin.ini", linear_ini);
  std::ostringstream so, se;
  CHECK(cmd_sweep(cfg.string(), "model.k", {}, (dir / "o").string(), so, se) == exit_failure);
  CHECK(cmd_sweep(cfg.string(), "run.output", {"x"}, (dir / "o").string(), so, se) == exit_failure);
  CHECK(cmd_sweep(cfg.string(), "model.alpha", {"0.5", "1.5"}, (dir / "o").string(), so, se) ==
        exit_failure);
}

TEST_CASE("sweep over k records the effect on the sup norm") {
  const auto dir = scratch("sweep_k");
  std::string text = linear_ini;
  text.replace(text.find("mu = 0"), 6, "mu = 10");
  text.replace(text.find("gamma = 0"), 9, "gamma = 1.5");
  text.replace(text.find("dt = 0.01"), 9, "dt = 2e-4");
  text += "u0_amplitude = 1\n";
  const auto cfg = write_file(dir / "grow.ini", text);
  std::ostringstream so, se;
  REQUIRE(cmd_sweep(cfg.string(), "k", {"8", "0.5", "2", "1", "4"}, (dir / "o").string(), so, se) ==
          exit_ok);
  std::ifstream idx(dir / "o" / "index.csv");
  std::string line;
  std::getline(idx, line);
  CHECK(line.rfind("value,", 0) == 0);
  std::vector<double> ks, sups;
  while (std::getline(idx, line)) {
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string x; std::getline(ls, x, ',');)
      f.push_back(x);
    ks.push_back(std::stod(f[0]));
    sups.push_back(std::stod(f[6]));  // final Linf
  }
  REQUIRE(ks.size() == 5);
  for (std::size_t i = 1; i < ks.size(); ++i) {
    CHECK(ks[i] > ks[i - 1]);
    CHECK(sups[i] < sups[i - 1]);
  }
  for (int i = 0; i < 5; ++i)
    CHECK(fs::exists(dir / "o" / ("run_00" + std::to_string(i)) / "report.json"));
}

TEST_CASE("sweep over alpha: heavier tails and crossing curves for smaller alpha") {
  const auto dir = scratch("sweep_alpha");
  std::string text = linear_ini;
  text.replace(text.find("t_final = 1"), 11, "t_final = 2");
  const auto cfg = write_file(dir / "lin.ini", text);
  std::ostringstream so, se;
  REQUIRE(cmd_sweep(cfg.string(), "model.alpha", {"0.9", "0.3", "0.7", "0.5"},
                    (dir / "o").string(), so, se) == exit_ok);
  std::vector<std::vector<std::pair<double, double>>> runs;
  for (int i = 0; i < 4; ++i)
    runs.push_back(read_l2(dir / "o" / ("run_00" + std::to_string(i)) / "norms.csv"));
  // runs are ordered by alpha: 0.3, 0.5, 0.7, 0.9
  for (int i = 0; i + 1 < 4; ++i) {
    const auto& small = runs[i];
    const auto& large = runs[i + 1];
    REQUIRE(small.size() == large.size());
    CHECK(small.back().second > large.back().second);
    // the smaller order drops faster right after t = 0, so the curves cross
    CHECK(small[1].second < large[1].second);
  }
}

TEST_CASE("mlf eval and thread cap") {
  std::ostringstream so, se;
  CHECK(cmd_mlf_eval(1.0, 1.0, 1.0, so, se) == exit_ok);
  CHECK(std::stod(so.str()) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  std::ostringstream s2, e2;
  CHECK(cmd_mlf_eval(-1.0, 1.0, 1.0, s2, e2) == exit_failure);

  setenv("FRACRD_THREADS", "3", 1);
  CHECK(thread_cap() == 3);
  setenv("FRACRD_THREADS", "zero", 1);
  CHECK(thread_cap() >= 1);
  unsetenv("FRACRD_THREADS");
}

TEST_CASE("command line parsing") {
  auto run = [](std::vector<std::string> args) {
    std::vector<char*> argv;
    for (auto& a : args)
      argv.push_back(a.data());
    return cli_main(static_cast<int>(argv.size()), argv.data());
  };
  CHECK(run({"fracrd"}) == exit_failure);
  CHECK(run({"fracrd", "frobnicate"}) == exit_failure);
  CHECK(run({"fracrd", "mlf", "eval", "--alpha", "0.5", "--beta", "1", "--z", "-1"}) == exit_ok);
  CHECK(run({"fracrd", "mlf", "eval", "--alpha", "0.5"}) == exit_failure);
  CHECK(run({"fracrd", "verify", "nope"}) == exit_failure);
}
