#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <omp.h>

#include "fatigue/ensemble.hpp"
#include "fatigue/errors.hpp"
#include "fatigue/sampling.hpp"
#include "fatigue/stats.hpp"

using namespace fatigue;

TEST_CASE("uniform column mean") {
  const Marginal u = Marginal::uniform(0.0, 1.0);
  const SampleMatrix m = draw_matrix(std::span(&u, 1), 10000, 3, 1);
  CHECK(std::abs(mean(m.values) - 0.5) < 0.02);
  for (double v : m.values) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("draws stay inside the marginal supports") {
  const ParamSpace space = table_distributions();
  const SampleMatrix m = draw_matrix(space, 2000, 11, 1);
  REQUIRE(m.cols() == space.size());
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      CHECK(m(r, c) >= space[c].law.lo);
      CHECK(m(r, c) <= space[c].law.hi);
    }
  }
}

TEST_CASE("point mass gives a constant column") {
  ParamSpace space = table_distributions();
  const Param fixed[] = {Param::E};
  space = fix_at_mean(space, fixed);
  const SampleMatrix m = draw_matrix(space, 100, 1, 1);
  for (std::size_t r = 0; r < m.rows; ++r) CHECK(m(r, 0) == kTableRanges[0].mid());
}

TEST_CASE("same seed and stream reproduce, other streams differ") {
  const ParamSpace space = table_distributions();
  const SampleMatrix a = draw_matrix(space, 500, 42, 1);
  const SampleMatrix b = draw_matrix(space, 500, 42, 1);
  const SampleMatrix c = draw_matrix(space, 500, 42, 2);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
}

TEST_CASE("row draws do not depend on the number of rows") {
  const ParamSpace space = table_distributions();
  const SampleMatrix small = draw_matrix(space, 10, 5, 1);
  const SampleMatrix large = draw_matrix(space, 1000, 5, 1);
  for (std::size_t i = 0; i < small.values.size(); ++i) CHECK(small.values[i] == large.values[i]);
}

TEST_CASE("invalid marginal specifications are rejected") {
  CHECK_THROWS_AS(Marginal::uniform(1.0, 1.0).validate(), DomainError);
  CHECK_THROWS_AS(Marginal::uniform(2.0, 1.0).validate(), DomainError);
  ParamSpace dup = table_distributions();
  dup.push_back(dup.front());
  CHECK_THROWS_AS(draw_matrix(dup, 10, 1, 1), DomainError);
}

TEST_CASE("row parameters override the base") {
  const ParamSpace space = table_distributions();
  const SampleMatrix m = draw_matrix(space, 3, 1, 1);
  const MaterialParams p = row_params(m, 2, midpoint_params());
  for (std::size_t c = 0; c < m.cols(); ++c) CHECK(get(p, space[c].param) == m(2, c));
}

namespace {

ForwardScenario scenario_at(double sigma) {
  ForwardScenario sc;
  sc.load.sigma_max = sigma;
  sc.load.R = -1.0;
  sc.base = midpoint_params();
  return sc;
}

}  // namespace

TEST_CASE("all point masses give identical outputs") {
  ParamSpace space = table_distributions();
  for (auto& d : space) d.law = Marginal::point_mass(d.law.mean());
  const OutputEnsemble out = propagate(draw_matrix(space, 8, 1, 1), scenario_at(80.0));
  for (double c : out.cycles) CHECK(c == out.cycles.front());
}

TEST_CASE("permuting rows permutes outputs") {
  const ParamSpace space = table_distributions();
  const SampleMatrix m = draw_matrix(space, 24, 9, 1);
  std::vector<std::size_t> perm(m.rows);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::swap(perm[3], perm[10]);
  SampleMatrix p = m;
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) p(r, c) = m(perm[r], c);
  const ForwardScenario sc = scenario_at(60.0);
  const OutputEnsemble a = propagate(m, sc);
  const OutputEnsemble b = propagate(p, sc);
  for (std::size_t r = 0; r < m.rows; ++r) CHECK(b.cycles[r] == a.cycles[perm[r]]);
}

TEST_CASE("parallel propagation equals the serial reference at any thread count") {
  const SampleMatrix m = draw_matrix(table_distributions(), 40, 17, 1);
  const ForwardScenario sc = scenario_at(55.0);
  const OutputEnsemble ref = serial::propagate(m, sc);
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    const OutputEnsemble par = propagate(m, sc);
    CHECK(par.cycles == ref.cycles);
    CHECK(par.runout == ref.runout);
  }
}

TEST_CASE("row failures are captured, not thrown") {
  std::vector<MaterialParams> params(3, midpoint_params());
  params[1].nu = 0.7;
  ForwardScenario sc = scenario_at(60.0);
  const OutputEnsemble out = propagate(params, sc);
  CHECK(out.failures() == 1);
  CHECK(out.failed[1]);
  CHECK(std::isnan(out.cycles[1]));
  CHECK_FALSE(out.errors[1].empty());
  CHECK(out.values(Scale::linear).size() == 2);
}

TEST_CASE("runout policy and scales") {
  OutputEnsemble e;
  e.cycles = {1000.0, 1e7, 100.0};
  e.runout = {0, 1, 0};
  e.failed = {0, 0, 0};
  e.errors.resize(3);
  e.N_cap = 10000000;
  CHECK(e.values(Scale::log10) == std::vector<double>{3.0, 7.0, 2.0});
  CHECK(e.values(Scale::linear, RunoutPolicy::exclude) == std::vector<double>{1000.0, 100.0});
}
