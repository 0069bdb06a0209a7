#include "fatigue/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fatigue/errors.hpp"

namespace fatigue {

namespace {

using Point = std::vector<double>;

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

Point towards(const Point& from, const Point& to, double t) {
  Point p(from.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = from[j] + t * (to[j] - from[j]);
  return p;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::span<const double> x0, std::span<const double> step,
                             const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  if (n == 0 || step.size() != n) throw DomainError("nelder_mead: dimension mismatch");

  NelderMeadResult res;
  auto eval = [&](const Point& x) {
    ++res.evaluations;
    double v;
    try {
      v = f(x);
    } catch (const Error&) {
      v = std::numeric_limits<double>::infinity();
    }
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<Point> simplex(n + 1, Point(x0.begin(), x0.end()));
  for (std::size_t j = 0; j < n; ++j) {
    if (step[j] == 0.0) throw DomainError("nelder_mead: zero initial step");
    simplex[j + 1][j] += step[j];
  }
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const Point& best = simplex[order[0]];
    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) diameter = std::max(diameter, distance(simplex[order[i]], best));
    double scale = 0.0;
    for (double v : best) scale = std::max(scale, std::abs(v));
    if (diameter < opts.rel_tol * std::max(1.0, scale)) {
      res.converged = true;
      res.message = "converged";
      break;
    }
    if (res.evaluations >= opts.max_evaluations) {
      res.message = "evaluation budget exhausted";
      break;
    }

    const std::size_t worst = order[n];
    const std::size_t second = order[n - 1];
    Point centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[order[i]][j] / static_cast<double>(n);
    }

    const Point xr = towards(centroid, simplex[worst], -opts.reflection);
    const double fr = eval(xr);
    if (fr < fv[order[0]]) {
      const Point xe = towards(centroid, simplex[worst], -opts.reflection * opts.expansion);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    const Point xc = outside ? towards(centroid, xr, opts.contraction)
                             : towards(centroid, simplex[worst], opts.contraction);
    const double fc = eval(xc);
    if (fc < (outside ? fr : fv[worst])) {
      simplex[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    const Point anchor = simplex[order[0]];
    for (std::size_t i = 1; i <= n; ++i) {
      simplex[order[i]] = towards(anchor, simplex[order[i]], opts.shrink);
      fv[order[i]] = eval(simplex[order[i]]);
    }
  }
  res.x = simplex[order[0]];
  res.value = fv[order[0]];
  return res;
}

}  // namespace fatigue
