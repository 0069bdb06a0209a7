#include "fatigue/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fatigue/errors.hpp"

namespace fatigue {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double sanitize(double v) { return std::isnan(v) ? kNegInf : v; }

std::uint64_t level_stream(std::size_t level, std::uint64_t kind) {
  return (static_cast<std::uint64_t>(level) << 8) | kind;
}

constexpr std::uint64_t kInitKind = 1;
constexpr std::uint64_t kResampleKind = 2;
constexpr std::uint64_t kPilotKind = 3;
constexpr std::uint64_t kMoveKind = 4;

}  // namespace

bool Box::contains(std::span<const double> x) const {
  for (std::size_t j = 0; j < dim(); ++j) {
    if (!(x[j] >= lo[j] && x[j] <= hi[j])) return false;
  }
  return true;
}

double Box::log_volume() const {
  double v = 0.0;
  for (std::size_t j = 0; j < dim(); ++j) v += std::log(width(j));
  return v;
}

std::vector<double> Box::center() const {
  std::vector<double> c(dim());
  for (std::size_t j = 0; j < dim(); ++j) c[j] = 0.5 * (lo[j] + hi[j]);
  return c;
}

void Box::validate() const {
  if (lo.size() != hi.size() || lo.empty()) throw DomainError("box: bounds must be non-empty and of equal length");
  for (std::size_t j = 0; j < dim(); ++j) {
    if (!std::isfinite(lo[j]) || !std::isfinite(hi[j]) || !(lo[j] < hi[j])) {
      throw DomainError("box: need finite lo < hi in every dimension");
    }
  }
}

std::vector<std::size_t> PosteriorChain::final_rows() const {
  std::vector<std::size_t> out;
  if (level.empty()) return out;
  const int last = level.back();
  for (std::size_t i = 0; i < level.size(); ++i) {
    if (level[i] == last) out.push_back(i);
  }
  return out;
}

std::vector<double> PosteriorChain::final_column(std::size_t j) const {
  std::vector<double> out;
  for (std::size_t i : final_rows()) out.push_back((*this)(i, j));
  return out;
}

PosteriorChain metropolis_chain(const LogDensity& target, std::span<const double> init,
                                std::span<const double> step, std::size_t length, std::uint64_t seed,
                                const Box& support) {
  support.validate();
  const std::size_t dim = support.dim();
  if (init.size() != dim || step.size() != dim) throw DomainError("metropolis: dimension mismatch");
  if (!support.contains(init)) throw DomainError("metropolis: initial state outside the support");
  for (double s : step) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("metropolis: step sizes must be finite and >= 0");
  }
  std::vector<double> x(init.begin(), init.end());
  double lp = sanitize(target(x));
  if (lp == kNegInf) throw DomainError("metropolis: initial state has zero density");

  PosteriorChain chain;
  chain.dim = dim;
  chain.seed = seed;
  chain.alphas = {1.0};
  chain.samples.reserve(length * dim);
  Rng rng = make_rng(seed, 0, 0);
  std::vector<double> y(dim);
  std::size_t accepted = 0;
  for (std::size_t t = 0; t < length; ++t) {
    for (std::size_t j = 0; j < dim; ++j) y[j] = x[j] + step[j] * normal01(rng);
    const double u = uniform01(rng);
    if (support.contains(y)) {
      const double lq = sanitize(target(y));
      if (std::log(u) < lq - lp) {
        x = y;
        lp = lq;
        ++accepted;
      }
    }
    chain.samples.insert(chain.samples.end(), x.begin(), x.end());
    chain.log_target.push_back(lp);
    chain.level.push_back(0);
  }
  chain.acceptance = {length ? static_cast<double>(accepted) / static_cast<double>(length) : 0.0};
  chain.zero_acceptance = length > 0 && accepted == 0;
  return chain;
}

double batch_means_se(std::span<const double> x, std::size_t batches) {
  if (batches < 2 || x.size() < 2 * batches) throw DomainError("batch means: too few samples");
  const std::size_t b = x.size() / batches;
  std::vector<double> means(batches);
  for (std::size_t k = 0; k < batches; ++k) {
    means[k] = std::accumulate(x.begin() + static_cast<std::ptrdiff_t>(k * b),
                               x.begin() + static_cast<std::ptrdiff_t>((k + 1) * b), 0.0) /
               static_cast<double>(b);
  }
  const double m = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(batches);
  double ss = 0.0;
  for (double v : means) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
}

std::vector<double> TemperingSettings::resolved_ladder() const {
  if (!ladder.empty()) return ladder;
  if (levels < 1) throw DomainError("tempering: at least one level required");
  std::vector<double> out(levels + 1);
  for (std::size_t l = 0; l <= levels; ++l) {
    const double t = static_cast<double>(l) / static_cast<double>(levels);
    out[l] = t * t;
  }
  return out;
}

namespace {

struct Walker {
  std::vector<double> x;
  double ll;
};

struct MoveStats {
  std::size_t accepted = 0;
  std::size_t proposed = 0;
};

/// Metropolis moves on prior x likelihood^alpha, uniform prior on the box.
void move(Walker& w, double alpha, const std::vector<double>& step, const Box& box,
          const LogDensity& log_likelihood, Rng& rng, MoveStats& stats) {
  std::vector<double> y(w.x.size());
  for (std::size_t j = 0; j < y.size(); ++j) y[j] = w.x[j] + step[j] * normal01(rng);
  const double u = uniform01(rng);
  ++stats.proposed;
  if (!box.contains(y)) return;
  const double ll = sanitize(log_likelihood(y));
  if (ll == kNegInf) return;
  if (std::log(u) < alpha * (ll - w.ll)) {
    w.x = std::move(y);
    w.ll = ll;
    ++stats.accepted;
  }
}

std::vector<double> steps_for(const Box& box, double scale) {
  std::vector<double> s(box.dim());
  for (std::size_t j = 0; j < box.dim(); ++j) s[j] = scale * box.width(j);
  return s;
}

}  // namespace

PosteriorChain tempered_sample(const Box& support, const LogDensity& log_likelihood,
                               const TemperingSettings& settings) {
  support.validate();
  const auto ladder = settings.resolved_ladder();
  if (ladder.size() < 2 || ladder.front() != 0.0 || ladder.back() != 1.0) {
    throw DomainError("tempering: ladder must run from 0 to 1");
  }
  for (std::size_t l = 1; l < ladder.size(); ++l) {
    if (!(ladder[l] > ladder[l - 1])) throw DomainError("tempering: ladder must be strictly increasing");
  }
  const std::size_t n = settings.samples_per_level;
  const std::size_t dim = support.dim();
  if (n < 2) throw DomainError("tempering: at least two samples per level");
  if (settings.steps_per_sample < 1) throw DomainError("tempering: steps_per_sample must be >= 1");

  PosteriorChain chain;
  chain.dim = dim;
  chain.seed = settings.seed;
  chain.alphas = ladder;
  const double log_prior = -support.log_volume();

  auto record = [&](const std::vector<Walker>& ws, int level) {
    for (const auto& w : ws) {
      chain.samples.insert(chain.samples.end(), w.x.begin(), w.x.end());
      chain.log_target.push_back(log_prior + w.ll);
      chain.level.push_back(level);
    }
  };

  std::vector<Walker> walkers(n);
  const auto ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < ni; ++i) {
    Rng rng = make_rng(settings.seed, level_stream(0, kInitKind), static_cast<std::uint64_t>(i));
    auto& w = walkers[static_cast<std::size_t>(i)];
    w.x.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) w.x[j] = support.lo[j] + support.width(j) * uniform01(rng);
    w.ll = sanitize(log_likelihood(w.x));
  }
  record(walkers, 0);
  chain.acceptance.push_back(1.0);
  chain.ess.push_back(static_cast<double>(n));
  chain.proposal_scale.push_back(0.0);

  double scale = settings.initial_scale;
  std::size_t total_accepted = 0;
  for (std::size_t l = 1; l < ladder.size(); ++l) {
    const double alpha = ladder[l];
    const double dalpha = ladder[l] - ladder[l - 1];

    std::vector<double> logw(n);
    double top = kNegInf;
    for (std::size_t i = 0; i < n; ++i) {
      logw[i] = walkers[i].ll == kNegInf ? kNegInf : dalpha * walkers[i].ll;
      top = std::max(top, logw[i]);
    }
    if (top == kNegInf) throw NumericalError("tempering: every state has zero likelihood at level " + std::to_string(l));
    std::vector<double> w(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += (w[i] = std::exp(logw[i] - top));
    double sq = 0.0, wmax = 0.0;
    for (auto& v : w) {
      v /= sum;
      sq += v * v;
      wmax = std::max(wmax, v);
    }
    chain.ess.push_back(1.0 / sq);
    if (wmax >= 0.99) chain.degenerate_levels.push_back(static_cast<int>(l));

    // systematic resampling
    std::vector<std::size_t> counts(n, 0);
    {
      Rng rng = make_rng(settings.seed, level_stream(l, kResampleKind), 0);
      const double u0 = uniform01(rng) / static_cast<double>(n);
      double cum = 0.0;
      std::size_t i = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const double target = u0 + static_cast<double>(k) / static_cast<double>(n);
        while (i + 1 < n && cum + w[i] <= target) cum += w[i++];
        ++counts[i];
      }
    }
    std::vector<std::size_t> parents;
    for (std::size_t i = 0; i < n; ++i) {
      if (counts[i] > 0) parents.push_back(i);
    }

    // pilot tuning of the proposal scale
    for (std::size_t round = 0; round < settings.pilot_rounds; ++round) {
      const auto steps = steps_for(support, scale);
      MoveStats stats;
      const std::size_t chains = std::min(settings.pilot_chains, parents.size());
      for (std::size_t c = 0; c < chains; ++c) {
        Walker pw = walkers[parents[c * parents.size() / chains]];
        Rng rng = make_rng(settings.seed, level_stream(l, kPilotKind), round * settings.pilot_chains + c);
        for (std::size_t t = 0; t < settings.pilot_steps; ++t) move(pw, alpha, steps, support, log_likelihood, rng, stats);
      }
      const double acc = stats.proposed ? static_cast<double>(stats.accepted) / static_cast<double>(stats.proposed) : 0.0;
      if (acc < settings.target_acceptance_lo) {
        scale *= 0.5;
      } else if (acc > settings.target_acceptance_hi) {
        scale *= 2.0;
      } else {
        break;
      }
      scale = std::clamp(scale, 1e-4, 2.0);
    }
    chain.proposal_scale.push_back(scale);

    const auto steps = steps_for(support, scale);
    std::vector<std::vector<Walker>> produced(parents.size());
    std::vector<MoveStats> stats(parents.size());
    const auto np = static_cast<std::int64_t>(parents.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t q = 0; q < np; ++q) {
      const auto k = static_cast<std::size_t>(q);
      const std::size_t p = parents[k];
      Rng rng = make_rng(settings.seed, level_stream(l, kMoveKind), p);
      Walker cur = walkers[p];
      for (std::size_t m = 0; m < counts[p]; ++m) {
        for (std::size_t t = 0; t < settings.steps_per_sample; ++t) {
          move(cur, alpha, steps, support, log_likelihood, rng, stats[k]);
        }
        produced[k].push_back(cur);
      }
    }
    std::vector<Walker> next;
    next.reserve(n);
    MoveStats level_stats;
    for (std::size_t k = 0; k < parents.size(); ++k) {
      for (auto& wk : produced[k]) next.push_back(std::move(wk));
      level_stats.accepted += stats[k].accepted;
      level_stats.proposed += stats[k].proposed;
    }
    walkers = std::move(next);
    total_accepted += level_stats.accepted;
    chain.acceptance.push_back(static_cast<double>(level_stats.accepted) /
                               static_cast<double>(std::max<std::size_t>(1, level_stats.proposed)));
    record(walkers, static_cast<int>(l));
  }
  chain.zero_acceptance = total_accepted == 0;
  return chain;
}

}  // namespace fatigue
