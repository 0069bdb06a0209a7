#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <omp.h>

#include "fatigue/errors.hpp"
#include "fatigue/mcmc.hpp"
#include "fatigue/random.hpp"
#include "fatigue/stats.hpp"

using namespace fatigue;

namespace {

std::vector<double> column(const PosteriorChain& c, std::size_t j) {
  std::vector<double> out;
  for (std::size_t i = 0; i < c.size(); ++i) out.push_back(c(i, j));
  return out;
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / double(a.size()) - double(j) / double(b.size())));
  }
  return d;
}

const Box kWide{{-20.0, -20.0}, {20.0, 20.0}};

}  // namespace

TEST_CASE("flat target on a box recovers the centre") {
  const Box box{{0.0, 10.0}, {2.0, 14.0}};
  const std::vector<double> init{1.0, 12.0};
  const std::vector<double> step{0.5, 1.0};
  const auto c = metropolis_chain([](std::span<const double>) { return 0.0; }, init, step, 50000, 3, box);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto x = column(c, j);
    CHECK(std::abs(mean(x) - box.center()[j]) < 3 * batch_means_se(x));
    for (double v : x) {
      CHECK(v >= box.lo[j]);
      CHECK(v <= box.hi[j]);
    }
  }
}

TEST_CASE("two-dimensional Gaussian target") {
  // mean (1, -1), covariance [[1, 0.5], [0.5, 2]]
  const double s11 = 1.0, s12 = 0.5, s22 = 2.0;
  const double det = s11 * s22 - s12 * s12;
  auto target = [&](std::span<const double> x) {
    const double a = x[0] - 1.0, b = x[1] + 1.0;
    return -0.5 * (s22 * a * a - 2 * s12 * a * b + s11 * b * b) / det;
  };
  const std::vector<double> init{0.0, 0.0};
  const std::vector<double> step{1.5, 2.0};
  const auto c = metropolis_chain(target, init, step, 100000, 11, kWide);
  const auto x = column(c, 0);
  const auto y = column(c, 1);
  CHECK(std::abs(mean(x) - 1.0) < 3 * batch_means_se(x));
  CHECK(std::abs(mean(y) + 1.0) < 3 * batch_means_se(y));
  const double mx = mean(x), my = mean(y);
  double cxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) cxy += (x[i] - mx) * (y[i] - my);
  cxy /= double(x.size() - 1);
  CHECK(std::abs(variance(x) - s11) / s11 < 0.15);
  CHECK(std::abs(variance(y) - s22) / s22 < 0.15);
  CHECK(std::abs(cxy - s12) / s12 < 0.15);
  CHECK(c.acceptance[0] > 0.0);
  CHECK(c.acceptance[0] < 1.0);
}

TEST_CASE("vanishing proposal scale accepts almost everything") {
  auto target = [](std::span<const double> x) { return -0.5 * (x[0] * x[0] + x[1] * x[1]); };
  const std::vector<double> init{0.3, -0.2};
  const std::vector<double> step{1e-7, 1e-7};
  const auto c = metropolis_chain(target, init, step, 2000, 1, kWide);
  CHECK(c.acceptance[0] > 0.99);
}

TEST_CASE("zero acceptance is flagged") {
  auto target = [](std::span<const double> x) { return x[0] > 0.5 ? -INFINITY : 0.0; };
  const Box box{{0.0}, {1.0}};
  const std::vector<double> init{0.2};
  const std::vector<double> step{1e3};
  const auto c = metropolis_chain(target, init, step, 200, 1, box);
  CHECK(c.zero_acceptance);
}

TEST_CASE("default ladder") {
  TemperingSettings s;
  s.levels = 4;
  CHECK(s.resolved_ladder() == std::vector<double>{0.0, 1.0 / 16, 0.25, 9.0 / 16, 1.0});
  s.ladder = {0.0, 0.7, 0.5, 1.0};
  const Box box{{0.0}, {1.0}};
  CHECK_THROWS_AS(tempered_sample(box, [](std::span<const double>) { return 0.0; }, s), DomainError);
}

TEST_CASE("constant likelihood reproduces the prior at every level") {
  const Box box{{0.1, 0.1}, {4.0, 4.0}};
  TemperingSettings s;
  s.samples_per_level = 10000;
  s.levels = 3;
  const auto c = tempered_sample(box, [](std::span<const double>) { return 0.0; }, s);
  Rng rng = make_rng(99, 0, 0);
  const double critical = 1.628 * std::sqrt(2.0 / 10000.0);
  for (int level = 0; level <= 3; ++level) {
    for (std::size_t j = 0; j < 2; ++j) {
      std::vector<double> drawn, direct;
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (c.level[i] == level) drawn.push_back(c(i, j));
      }
      for (std::size_t i = 0; i < drawn.size(); ++i) direct.push_back(0.1 + 3.9 * uniform01(rng));
      CHECK(ks_statistic(drawn, direct) < critical);
    }
  }
}

TEST_CASE("two-level ladder samples the posterior") {
  const Box box{{-3.0, -3.0}, {3.0, 3.0}};
  auto ll = [](std::span<const double> x) {
    return -0.5 * (std::pow((x[0] - 0.5) / 0.5, 2) + std::pow((x[1] + 0.5) / 0.5, 2));
  };
  TemperingSettings s;
  s.ladder = {0.0, 1.0};
  s.samples_per_level = 4000;
  s.steps_per_sample = 10;
  const auto c = tempered_sample(box, ll, s);
  const auto x = c.final_column(0);
  const auto y = c.final_column(1);
  CHECK(std::abs(mean(x) - 0.5) < 0.05);
  CHECK(std::abs(mean(y) + 0.5) < 0.05);
  CHECK(std::sqrt(variance(x)) == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("bimodal likelihood keeps both modes") {
  const Box box{{-5.0, -5.0}, {5.0, 5.0}};
  auto ll = [](std::span<const double> x) {
    auto bump = [&](double c) { return std::exp(-0.5 * (std::pow((x[0] - c) / 0.3, 2) + std::pow((x[1] - c) / 0.3, 2))); };
    return std::log(bump(-2.0) + bump(2.0));
  };
  TemperingSettings s;
  s.samples_per_level = 2000;
  const auto c = tempered_sample(box, ll, s);
  const auto x = c.final_column(0);
  const double left = double(std::count_if(x.begin(), x.end(), [](double v) { return v < 0; })) / double(x.size());
  CHECK(left >= 0.1);
  CHECK(left <= 0.9);
  for (double a : c.acceptance) {
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
  }
}

TEST_CASE("tempered sampling is deterministic and independent of thread count") {
  const Box box{{-2.0, -2.0}, {2.0, 2.0}};
  auto ll = [](std::span<const double> x) { return -4.0 * (x[0] * x[0] + x[1] * x[1]); };
  TemperingSettings s;
  s.samples_per_level = 300;
  s.levels = 3;
  s.seed = 12;
  omp_set_num_threads(1);
  const auto a = tempered_sample(box, ll, s);
  omp_set_num_threads(4);
  const auto b = tempered_sample(box, ll, s);
  CHECK(a.samples == b.samples);
  CHECK(a.log_target == b.log_target);
  s.seed = 13;
  CHECK(tempered_sample(box, ll, s).samples != a.samples);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(box.contains(a.row(i)));
}

TEST_CASE("degenerate levels are flagged") {
  const Box box{{0.0}, {1.0}};
  auto ll = [](std::span<const double> x) { return -1e6 * std::pow(x[0] - 0.123, 2); };
  TemperingSettings s;
  s.ladder = {0.0, 1.0};
  s.samples_per_level = 50;
  const auto c = tempered_sample(box, ll, s);
  CHECK_FALSE(c.degenerate_levels.empty());
}
