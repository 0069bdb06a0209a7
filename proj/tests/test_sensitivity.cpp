#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "fatigue/errors.hpp"
#include "fatigue/sensitivity.hpp"

using namespace fatigue;
using doctest::Approx;

namespace {

struct IshigamiIndices {
  double S1, S2, S3;
};

IshigamiIndices ishigami_oracle(double a, double b) {
  const double pi4 = std::pow(std::numbers::pi, 4);
  const double pi8 = pi4 * pi4;
  const double V1 = 0.5 * std::pow(1 + b * pi4 / 5, 2);
  const double V2 = a * a / 8;
  const double V13 = b * b * pi8 * (1.0 / 18 - 1.0 / 50);
  const double V = V1 + V2 + V13;
  return {(V1 + V13) / V, V2 / V, V13 / V};
}

double ishigami(std::span<const double> x) {
  return std::sin(x[0]) + 7.0 * std::pow(std::sin(x[1]), 2) + 0.1 * std::pow(x[2], 4) * std::sin(x[0]);
}

}  // namespace

TEST_CASE("radial matrices differ from A in one column") {
  const std::vector<Marginal> laws(3, Marginal::uniform(0, 1));
  const SaltelliDesign d = make_saltelli_design(laws, 50, 4);
  REQUIRE(d.D.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t r = 0; r < 50; ++r) {
      for (std::size_t c = 0; c < 3; ++c) {
        CHECK(d.D[i](r, c) == (c == i ? d.B(r, c) : d.A(r, c)));
      }
    }
  }
  const std::vector<Marginal> one(1, Marginal::uniform(0, 1));
  const SaltelliDesign d1 = make_saltelli_design(one, 20, 4);
  CHECK(d1.D[0].values == d1.B.values);
  CHECK_THROWS_AS(build_radial_matrix(d.A, d.B, 3), DomainError);
}

TEST_CASE("single-factor model") {
  const std::vector<Marginal> laws(2, Marginal::uniform(-1, 1));
  const auto r = saltelli_total_effects(laws, {"x1", "x2"}, 1 << 14, [](std::span<const double> x) { return x[0]; });
  CHECK(r.S_T[0] == Approx(1.0).epsilon(0.02));
  CHECK(std::abs(r.S_T[1]) < 0.02);
}

TEST_CASE("additive model with equal variances") {
  const std::vector<Marginal> laws(2, Marginal::uniform(0, 1));
  const auto r = saltelli_total_effects(laws, {"a", "b"}, 1 << 14,
                                        [](std::span<const double> x) { return x[0] + x[1]; });
  CHECK(std::abs(r.S_T[0] - 0.5) < 0.05);
  CHECK(std::abs(r.S_T[1] - 0.5) < 0.05);
}

TEST_CASE("Ishigami total effects match the analytic values") {
  const auto oracle = ishigami_oracle(7.0, 0.1);
  const std::vector<Marginal> laws(3, Marginal::uniform(-std::numbers::pi, std::numbers::pi));
  const auto r = saltelli_total_effects(laws, {"x1", "x2", "x3"}, 1 << 14, ishigami);
  CHECK(std::abs(r.S_T[0] - oracle.S1) < 0.05);
  CHECK(std::abs(r.S_T[1] - oracle.S2) < 0.05);
  CHECK(std::abs(r.S_T[2] - oracle.S3) < 0.05);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.q05[i] <= r.S_T[i]);
    CHECK(r.q95[i] >= r.S_T[i]);
  }
  CHECK(r.evaluations == 5u * (1u << 14));
}

TEST_CASE("estimator is invariant to shifting and scaling the outputs") {
  const std::vector<Marginal> laws(3, Marginal::uniform(-std::numbers::pi, std::numbers::pi));
  const SaltelliDesign d = make_saltelli_design(laws, 2000, 9);
  std::vector<double> ya;
  for (std::size_t r = 0; r < d.A.rows; ++r) ya.push_back(ishigami(d.A.row(r)));
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<double> yd;
    for (std::size_t r = 0; r < d.A.rows; ++r) yd.push_back(ishigami(d.D[i].row(r)));
    const double base = total_effect(ya, yd);
    for (auto [shift, scale] : {std::pair{1e3, 1.0}, std::pair{0.0, 17.0}, std::pair{-5.0, 0.01}}) {
      std::vector<double> a = ya, b = yd;
      for (auto& v : a) v = scale * v + shift;
      for (auto& v : b) v = scale * v + shift;
      CHECK(std::abs(total_effect(a, b) - base) < 1e-12);
    }
  }
}

TEST_CASE("constant output is an error, not NaN") {
  const std::vector<double> c(10, 4.0);
  CHECK_THROWS_AS(total_effect(c, c), DomainError);
}

TEST_CASE("rows with failed evaluations are dropped") {
  const std::vector<double> ya{1, 2, 3, NAN, 5};
  const std::vector<std::vector<double>> yd{{1, 2, 4, 4, 5}};
  const auto r = estimate_total_effects(ya, yd, {"x"}, {});
  CHECK(r.excluded_rows == 1);
  CHECK(std::isfinite(r.S_T[0]));
}

TEST_CASE("fatigue study counts evaluations and isolates a single free parameter") {
  ParamSpace space = table_distributions();
  for (auto& d : space) {
    if (d.param != Param::s) d.law = Marginal::point_mass(d.law.mean());
  }
  ForwardScenario sc;
  sc.load.sigma_max = 120.0;
  sc.base = midpoint_params();
  const std::size_t N = 64;
  SaltelliOptions opts;
  opts.bootstrap = 20;
  const SensitivityStudy st = run_sensitivity_study(space, sc, N, opts);
  CHECK(st.log10.evaluations == (space.size() + 2) * N);
  const auto rank = st.log10.ranking();
  CHECK(st.log10.names[rank[0]] == "s");
  CHECK(st.log10.S_T[rank[0]] == Approx(1.0).epsilon(0.1));
}

TEST_CASE("scatter study passes propagate results through") {
  ForwardScenario sc;
  sc.load.sigma_max = 60.0;
  sc.load.R = -1.0;
  const ParamSpace space = table_distributions();
  const ScatterStudy s = scatter_study(space, sc, 16, 3);
  CHECK(s.inputs.rows == 16);
  CHECK(s.inputs.cols() == space.size());
  CHECK(s.outputs.cycles == propagate(s.inputs, sc).cycles);
  CHECK(scatter_study(space, sc, 16, 3).outputs.cycles == s.outputs.cycles);
}

TEST_CASE("KDE comparison: empty subset is the baseline, fixing everything is degenerate") {
  ForwardScenario sc;
  sc.load.sigma_max = 60.0;
  sc.load.R = -1.0;
  const ParamSpace space = table_distributions();
  std::vector<Param> all;
  for (const auto& d : space) all.push_back(d.param);
  const auto curves = kde_compare_study(space, sc, 60, {{}, all}, 5);
  REQUIRE(curves.size() == 3);
  CHECK(curves[0].label == "baseline");
  CHECK(curves[1].curve.density == curves[0].curve.density);
  CHECK(curves[2].degenerate);
  CHECK(sup_distance(curves[0].curve, curves[1].curve) == 0.0);
}
