#include "fatigue/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "fatigue/errors.hpp"
#include "fatigue/random.hpp"

namespace fatigue {

void Marginal::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("distribution bounds must be finite");
  if (kind == Kind::uniform && !(lo < hi)) throw DomainError("uniform distribution needs lo < hi");
}

ParamSpace table_distributions() {
  ParamSpace out;
  for (int i = 0; i < kParamCount; ++i) {
    const auto& r = kTableRanges[static_cast<std::size_t>(i)];
    out.push_back({static_cast<Param>(i), Marginal::uniform(r.lo, r.hi)});
  }
  return out;
}

ParamSpace fix_at_mean(ParamSpace space, std::span<const Param> fixed) {
  for (Param p : fixed) {
    auto it = std::find_if(space.begin(), space.end(),
                           [p](const ParamDistribution& d) { return d.param == p; });
    if (it == space.end()) {
      throw DomainError("parameter '" + std::string(param_name(p)) + "' is not in the space");
    }
    it->law = Marginal::point_mass(it->law.mean());
  }
  return space;
}

SampleMatrix draw_matrix(std::span<const Marginal> laws, std::size_t N, std::uint64_t seed,
                         std::uint64_t stream) {
  if (N < 1) throw DomainError("draw_matrix: N must be >= 1");
  for (const auto& law : laws) law.validate();
  SampleMatrix m;
  m.rows = N;
  m.width = laws.size();
  m.seed = seed;
  m.stream = stream;
  m.values.resize(N * m.width);
  for (std::size_t r = 0; r < N; ++r) {
    Rng rng = make_rng(seed, stream, r);
    for (std::size_t c = 0; c < m.width; ++c) m(r, c) = laws[c].from_unit(uniform01(rng));
  }
  return m;
}

std::vector<Marginal> laws_of(const ParamSpace& dists) {
  std::vector<Marginal> out;
  for (const auto& d : dists) out.push_back(d.law);
  return out;
}

SampleMatrix draw_matrix(const ParamSpace& dists, std::size_t N, std::uint64_t seed,
                         std::uint64_t stream) {
  std::vector<Param> columns;
  for (const auto& d : dists) {
    if (std::find(columns.begin(), columns.end(), d.param) != columns.end()) {
      throw DomainError("draw_matrix: duplicate parameter '" + std::string(param_name(d.param)) + "'");
    }
    columns.push_back(d.param);
  }
  SampleMatrix m = draw_matrix(laws_of(dists), N, seed, stream);
  m.columns = std::move(columns);
  return m;
}

MaterialParams row_params(const SampleMatrix& m, std::size_t r, const MaterialParams& base) {
  if (m.columns.size() != m.cols()) throw DomainError("row_params: matrix columns are not named parameters");
  MaterialParams out = base;
  for (std::size_t c = 0; c < m.cols(); ++c) set(out, m.columns[c], m(r, c));
  return out;
}

}  // namespace fatigue
