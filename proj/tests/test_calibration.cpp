#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fatigue/calibration.hpp"
#include "fatigue/dataset.hpp"
#include "fatigue/errors.hpp"
#include "fatigue/random.hpp"

using namespace fatigue;
using doctest::Approx;

namespace {

const std::vector<Param> kSs{Param::S, Param::s};

ForwardScenario coupon() {
  ForwardScenario sc;
  sc.base = midpoint_params();
  return sc;
}

FatigueDataset synthetic(const LifeCache& model, std::span<const double> theta, double noise,
                         std::uint64_t seed) {
  Rng rng = make_rng(seed, 0, 0);
  FatigueDataset d;
  int id = 0;
  for (double stress : {110.0, 140.0, 170.0, 200.0, 240.0}) {
    const double n = model.life(theta, stress, 0.1);
    const double cycles = std::pow(10.0, std::log10(n) + noise * normal01(rng));
    d.records.push_back({"syn-" + std::to_string(++id), cycles, stress / 2.5, stress, 0.1});
  }
  return d;
}

}  // namespace

TEST_CASE("parses the test table") {
  const FatigueDataset d = load_dataset(FATIGUE_DATA_DIR "/coupon_tests.csv");
  REQUIRE(d.size() == 5);
  const auto& r = d.records[2];
  CHECK(r.sample_id == "TDA-4");
  CHECK(r.cycles == 279931);
  CHECK(r.notch_stress == Approx(87.3154));
  CHECK(r.remote_stress == 35.0);
  CHECK(r.R == 0.1);
}

TEST_CASE("dataset errors name the line") {
  std::istringstream empty("sample_id,cycles,remote_stress_ksi,notch_stress_ksi\n");
  CHECK_THROWS_AS(parse_dataset(empty), DataError);
  std::istringstream zero("sample_id,cycles,remote_stress_ksi,notch_stress_ksi\nA,100,10,20\nB,0,10,20\n");
  try {
    parse_dataset(zero);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream notch("sample_id,cycles,remote_stress_ksi,notch_stress_ksi\nA,100,30,20\n");
  CHECK_THROWS_AS(parse_dataset(notch), DataError);
  std::istringstream with_r("sample_id,cycles,remote_stress_ksi,notch_stress_ksi,R\nA,100,10,20,-1\n");
  CHECK(parse_dataset(with_r).records[0].R == -1.0);
  std::istringstream bad_header("id,cycles\nA,1\n");
  CHECK_THROWS_AS(parse_dataset(bad_header), DataError);
}

TEST_CASE("zero residuals give the normalizing constant") {
  const LifeCache model(coupon(), kSs);
  const std::vector<double> theta{2.0, 2.0};
  const FatigueDataset d = synthetic(model, theta, 0.0, 1);
  const double n = double(d.size());
  LikelihoodSpec spec;
  spec.sigma = 1.0;
  const double at1 = log_likelihood(theta, d, spec, model).value;
  CHECK(at1 == Approx(-0.5 * n * std::log(2 * std::numbers::pi)).epsilon(1e-12));
  spec.sigma = 2.0;
  CHECK(log_likelihood(theta, d, spec, model).value == Approx(at1 - n * std::log(2.0)).epsilon(1e-12));
  spec.sigma = 0.0;
  spec.per_point = {2, 2, 2, 2, 2};
  CHECK(log_likelihood(theta, d, spec, model).value == Approx(at1 - n * std::log(2.0)).epsilon(1e-12));
  LikelihoodSpec inferred;
  inferred.infer_sigma = true;
  const std::vector<double> with_sigma{2.0, 2.0, std::log(2.0)};
  CHECK(log_likelihood(with_sigma, d, inferred, model).value == Approx(at1 - n * std::log(2.0)).epsilon(1e-12));
  CHECK(model.hits() > 0);
}

TEST_CASE("model failures make the likelihood -inf with a diagnostic") {
  ForwardScenario sc = coupon();
  sc.base.nu = 0.7;
  const LifeCache model(sc, kSs);
  FatigueDataset d;
  d.records.push_back({"X", 1000, 50, 100, 0.1});
  const std::vector<double> theta{2.0, 2.0};
  const auto v = log_likelihood(theta, d, {}, model);
  CHECK(std::isinf(v.value));
  CHECK(v.value < 0);
  CHECK(v.diagnostic.find("X") != std::string::npos);
}

TEST_CASE("true parameters beat 20 percent perturbations on synthetic data") {
  const LifeCache model(coupon(), kSs);
  const std::vector<double> truth{2.0, 2.0};
  LikelihoodSpec spec;
  spec.sigma = 0.1;
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const FatigueDataset d = synthetic(model, truth, 0.1, seed);
    const double at_truth = log_likelihood(truth, d, spec, model).value;
    bool best = true;
    for (double f : {0.8, 1.2}) {
      const std::vector<double> t{truth[0] * f, truth[1] * f};
      best = best && at_truth > log_likelihood(t, d, spec, model).value;
    }
    wins += best;
  }
  CHECK(wins >= 19);
}

TEST_CASE("empty data returns the prior") {
  ParamSpace priors{{Param::S, Marginal::uniform(0.1, 4.0)}, {Param::s, Marginal::uniform(0.1, 4.0)}};
  CalibrationSettings cs;
  cs.scenario = coupon();
  cs.tempering.samples_per_level = 2000;
  cs.tempering.levels = 2;
  const auto r = calibrate_bayes({}, priors, {}, cs);
  CHECK(r.model_evaluations == 0);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto x = r.chain.final_column(j);
    double m = 0.0;
    for (double v : x) m += v;
    m /= double(x.size());
    CHECK(std::abs(m - 2.05) < 0.1);
    REQUIRE_FALSE(r.marginals[j].density.empty());
    // Uniform density on [0.1, 4] away from the edges.
    for (std::size_t i = 0; i < r.marginals[j].x.size(); ++i) {
      const double xi = r.marginals[j].x[i];
      if (xi > 1.0 && xi < 3.0) CHECK(std::abs(r.marginals[j].density[i] - 1 / 3.9) < 0.06);
    }
  }
}

TEST_CASE("posterior is proportional to likelihood times prior") {
  const LifeCache model(coupon(), kSs);
  const std::vector<double> truth{2.0, 2.0};
  const FatigueDataset d = synthetic(model, truth, 0.1, 3);
  ParamSpace priors{{Param::S, Marginal::uniform(1.0, 3.0)}, {Param::s, Marginal::uniform(1.0, 3.0)}};
  CalibrationSettings cs;
  cs.scenario = coupon();
  cs.tempering.samples_per_level = 40;
  cs.tempering.levels = 2;
  cs.tempering.steps_per_sample = 1;
  cs.tempering.pilot_rounds = 1;
  LikelihoodSpec spec;
  const auto r = calibrate_bayes(d, priors, spec, cs);
  const double log_prior = -std::log(4.0);
  for (std::size_t i = 0; i < r.chain.size(); i += 7) {
    const double ll = log_likelihood(r.chain.row(i), d, spec, model).value;
    CHECK(std::abs(r.chain.log_target[i] - (ll + log_prior)) < 1e-12 * std::max(1.0, std::abs(ll)));
    CHECK(r.chain(i, 0) >= 1.0);
    CHECK(r.chain(i, 1) <= 3.0);
  }
  CHECK(r.chain.names == std::vector<std::string>{"S", "s"});
}

TEST_CASE("deterministic calibration recovers noise-free synthetic parameters") {
  const LifeCache model(coupon(), kSs);
  const std::vector<double> truth{2.0, 2.0};
  const FatigueDataset d = synthetic(model, truth, 0.0, 1);
  const std::vector<double> x0{2.3, 1.8}, step{0.2, 0.2};
  const auto r = calibrate_deterministic(d, coupon(), kSs, x0, step);
  CHECK(r.ssr < 1e-4);
  CHECK(std::abs(r.x[0] - 2.0) < 0.05);
  CHECK(std::abs(r.x[1] - 2.0) < 0.05);
  const Box bounds{{2.2, 1.0}, {4.0, 4.0}};
  const auto b = calibrate_deterministic(d, coupon(), kSs, x0, step, Scale::log10, bounds);
  CHECK(b.x[0] >= 2.2);
  CHECK_THROWS_AS(calibrate_deterministic({}, coupon(), kSs, x0, step), DataError);
}
