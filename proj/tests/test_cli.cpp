#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <omp.h>

#include "fatigue/app/config.hpp"
#include "fatigue/app/run.hpp"
#include "fatigue/errors.hpp"

using namespace fatigue;
using namespace fatigue::app;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("fatigue-test-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

const char* kSmall = R"([run]
seed = 5
[load]
sigma_max = 150
[sensitivity]
N = 12
bootstrap = 5
[calibration]
data = )" FATIGUE_DATA_DIR R"(/coupon_tests.csv
samples_per_level = 12
levels = 2
steps_per_sample = 1
[prediction]
M = 6
stresses = 120 200
[design_query]
N_target = 100
scan_points = 3
v_hi = 0.05
)";

}  // namespace

TEST_CASE("empty and minimal configs are valid") {
  const RunConfig c = parse_config_text("");
  CHECK(c.material.E == midpoint_params().E);
  const RunConfig m = parse_config_text("[load]\nsigma_max = 100\nR = 0.1\n");
  CHECK(m.load.sigma_max == 100.0);
}

TEST_CASE("range violations name the field") {
  const std::string e = error_of("[material]\nnu = 0.7\n");
  CHECK(e.find("nu") != std::string::npos);
}

TEST_CASE("unknown names are rejected") {
  CHECK(error_of("[material]\nsigma_q = 3\n").find("sigma_q") != std::string::npos);
  CHECK(error_of("[bogus]\nx = 1\n").find("bogus") != std::string::npos);
  CHECK(error_of("[load]\nsigma = 1\n").find("sigma") != std::string::npos);
  CHECK(error_of("[calibration]\nparams = S q\n").find("q") != std::string::npos);
}

TEST_CASE("every error is listed, not just the first") {
  const std::string e = error_of("[material]\nnu = 0.7\nsigma_q = 1\n[load]\nR = 2\n[bogus]\n");
  CHECK(e.find("nu") != std::string::npos);
  CHECK(e.find("sigma_q") != std::string::npos);
  CHECK(e.find("R") != std::string::npos);
  CHECK(e.find("bogus") != std::string::npos);
}

TEST_CASE("missing files are configuration errors") {
  CHECK(error_of("[calibration]\ndata = /no/such/file.csv\n").find("file.csv") != std::string::npos);
  CHECK_THROWS_AS(parse_config("/no/such/config.ini"), ConfigError);
}

TEST_CASE("serialization round-trips") {
  RunConfig c = parse_config_text(kSmall);
  c.material.S = 2.5;
  c.distributions[0].law = Marginal::point_mass(16500);
  c.model.energy = EnergyForm::as_printed;
  c.likelihood.infer_sigma = true;
  c.prediction.band = BandKind::highest_density;
  c.sensitivity.fixed_subsets = {{Param::C_y}, {Param::S, Param::s, Param::D_c}};
  const std::string text = serialize_config(c);
  const RunConfig back = parse_config_text(text);
  CHECK(serialize_config(back) == text);
  CHECK(back.material.S == 2.5);
  CHECK(back.distributions[0].law.kind == Marginal::Kind::point_mass);
  CHECK(back.prediction.band == BandKind::highest_density);
  CHECK(back.sensitivity.fixed_subsets.size() == 2);
}

TEST_CASE("simulate reports one life") {
  RunConfig c = parse_config_text("[load]\nsigma_max = 100\nR = 0.1\n");
  const RunOutcome out = execute("simulate", c);
  REQUIRE(out.files.size() == 1);
  CHECK(out.files[0].name == "simulate.csv");
  CHECK(out.summary.find("N_f") != std::string::npos);
  CHECK_THROWS_AS(execute("frobnicate", c), ConfigError);
}

TEST_CASE("failed runs leave no output behind") {
  TempDir tmp;
  RunConfig c = parse_config_text(kSmall);
  c.calibration.data.clear();
  const fs::path out = tmp.path / "out";
  CHECK_THROWS(run_and_write("calibrate", c, out));
  CHECK_FALSE(fs::exists(out));
  CHECK(exit_code_for(ConfigError("x")) == 2);
  CHECK(exit_code_for(DataError("x")) == 3);
  CHECK(exit_code_for(NumericalError("x")) == 4);
}

TEST_CASE("every command replays bitwise from its manifest") {
  TempDir tmp;
  const RunConfig c = parse_config_text(kSmall);
  for (std::string_view cmd : kCommands) {
    CAPTURE(cmd);
    const fs::path first = tmp.path / (std::string(cmd) + "-1");
    const fs::path second = tmp.path / (std::string(cmd) + "-2");
    const RunOutcome out = run_and_write(cmd, c, first);
    CHECK(fs::exists(first / "manifest.json"));
    const ReplayReport rep = replay(first / "manifest.json", second);
    CHECK(rep.mismatches.empty());
    for (const auto& f : out.files) CHECK(slurp(first / f.name) == slurp(second / f.name));
    for (const auto& entry : fs::directory_iterator(first)) {
      CHECK(entry.path().filename().string().front() != '.');
    }
  }
}

TEST_CASE("worker count does not change outputs") {
  const RunConfig c = parse_config_text(kSmall);
  for (std::string_view cmd : {"sensitivity", "calibrate", "life-dist"}) {
    CAPTURE(cmd);
    omp_set_num_threads(1);
    const RunOutcome a = execute(cmd, c);
    omp_set_num_threads(4);
    const RunOutcome b = execute(cmd, c);
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) CHECK(a.files[i].content == b.files[i].content);
  }
}

TEST_CASE("replay refuses changed inputs") {
  TempDir tmp;
  const fs::path data = tmp.path / "data.csv";
  fs::copy_file(FATIGUE_DATA_DIR "/coupon_tests.csv", data);
  RunConfig c = parse_config_text(kSmall);
  c.calibration.data = data.string();
  run_and_write("calibrate-det", c, tmp.path / "a");
  std::ofstream(data, std::ios::app) << "TDA-99,1000,50,120\n";
  CHECK_THROWS_AS(replay(tmp.path / "a" / "manifest.json", tmp.path / "b"), DataError);
}
