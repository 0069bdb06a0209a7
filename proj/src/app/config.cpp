#include "fatigue/app/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fatigue/errors.hpp"
#include "fatigue/export.hpp"

namespace fatigue::app {

namespace pt = boost::property_tree;

ForwardScenario RunConfig::scenario() const {
  return {load, DesignSpec::from_magnitude(residual_strain), material, jump, model};
}

ParamSpace RunConfig::priors() const {
  ParamSpace out;
  for (Param p : calibration.params) {
    for (const auto& d : distributions) {
      if (d.param == p) out.push_back(d);
    }
  }
  return out;
}

namespace {

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool param_value_valid(Param p, double v) {
  MaterialParams m = midpoint_params();
  set(m, p, v);
  try {
    m.validate();
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::filesystem::path base) : tree_(tree), base_(std::move(base)) {
    for (const auto& [name, section] : tree_) {
      if (section.empty() && !section.data().empty()) {
        errors.push_back("key '" + name + "' outside any section");
      }
    }
  }

  std::vector<std::string> errors;

  /// Marks the section as known and reports keys not in `keys`.
  void section(const std::string& name, std::initializer_list<std::string_view> keys) {
    known_sections_.insert(name);
    const auto* sec = find(name);
    if (!sec) return;
    for (const auto& [key, value] : *sec) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        errors.push_back("[" + name + "] unknown key '" + key + "'");
      }
    }
  }

  /// A section whose keys are material parameter names.
  void param_section(const std::string& name) {
    known_sections_.insert(name);
    const auto* sec = find(name);
    if (!sec) return;
    for (const auto& [key, value] : *sec) {
      if (!param_from_name(key)) errors.push_back("[" + name + "] unknown parameter '" + key + "'");
    }
  }

  void unknown_sections(const std::vector<std::string>& headers) {
    std::set<std::string> reported;
    for (const auto& name : headers) {
      if (!known_sections_.contains(name) && reported.insert(name).second) {
        errors.push_back("unknown section [" + name + "]");
      }
    }
  }

  const std::string* raw(const std::string& sec, const std::string& key) const {
    const auto* s = find(sec);
    if (!s) return nullptr;
    const auto it = s->find(key);
    return it == s->not_found() ? nullptr : &it->second.data();
  }

  void number(const std::string& sec, const std::string& key, double& out) {
    if (const auto* v = raw(sec, key)) {
      if (!to_double(*v, out)) fail(sec, key, *v, "expected a number");
    }
  }

  template <class Int>
  void integer(const std::string& sec, const std::string& key, Int& out) {
    if (const auto* v = raw(sec, key)) {
      Int x{};
      const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), x);
      if (v->empty() || ec != std::errc() || ptr != v->data() + v->size()) {
        fail(sec, key, *v, "expected a non-negative integer");
      } else {
        out = x;
      }
    }
  }

  void boolean(const std::string& sec, const std::string& key, bool& out) {
    if (const auto* v = raw(sec, key)) {
      if (*v == "true") {
        out = true;
      } else if (*v == "false") {
        out = false;
      } else {
        fail(sec, key, *v, "expected true or false");
      }
    }
  }

  void numbers(const std::string& sec, const std::string& key, std::vector<double>& out) {
    if (const auto* v = raw(sec, key)) {
      std::vector<double> xs;
      for (const auto& w : words(*v)) {
        double x;
        if (!to_double(w, x)) {
          fail(sec, key, *v, "expected a list of numbers");
          return;
        }
        xs.push_back(x);
      }
      out = std::move(xs);
    }
  }

  void params(const std::string& sec, const std::string& key, std::vector<Param>& out) {
    if (const auto* v = raw(sec, key)) {
      std::vector<Param> ps;
      for (const auto& w : words(*v)) {
        const auto p = param_from_name(w);
        if (!p) {
          fail(sec, key, *v, "unknown parameter '" + w + "'");
          return;
        }
        ps.push_back(*p);
      }
      out = std::move(ps);
    }
  }

  void path(const std::string& sec, const std::string& key, std::string& out) {
    if (const auto* v = raw(sec, key)) {
      if (v->empty()) {
        out.clear();
        return;
      }
      std::filesystem::path p(*v);
      if (p.is_relative() && !base_.empty()) p = (base_ / p).lexically_normal();
      if (!std::filesystem::exists(p)) {
        fail(sec, key, *v, "file not found");
      } else {
        out = p.string();
      }
    }
  }

  void fail(const std::string& sec, const std::string& key, const std::string& value, const std::string& why) {
    errors.push_back(sec + "." + key + " = '" + value + "': " + why);
  }

  const pt::ptree* find(const std::string& name) const {
    const auto it = tree_.find(name);
    return it == tree_.not_found() ? nullptr : &it->second;
  }

 private:
  static bool to_double(const std::string& s, double& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return !s.empty() && ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
  }

  const pt::ptree& tree_;
  std::filesystem::path base_;
  std::set<std::string> known_sections_;
};

std::string distribution_text(const Marginal& m) {
  if (m.kind == Marginal::Kind::uniform) return "uniform " + format_double(m.lo) + " " + format_double(m.hi);
  return "point " + format_double(m.lo);
}

std::string join_params(const std::vector<Param>& ps) {
  std::string out;
  for (Param p : ps) out += (out.empty() ? "" : " ") + std::string(param_name(p));
  return out;
}

std::string join_numbers(const std::vector<double>& xs) {
  std::string out;
  for (double x : xs) out += (out.empty() ? "" : " ") + format_double(x);
  return out;
}

template <class F>
void check(std::vector<std::string>& errors, const std::string& where, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    errors.push_back(where + ": " + e.what());
  }
}

}  // namespace

RunConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config syntax error at line " + std::to_string(e.line()) + ": " + e.message());
  }

  // The INI reader drops sections without keys; keep their names for checking.
  std::vector<std::string> headers;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t");
      const auto last = line.find_last_not_of(" \t\r");
      if (first != std::string::npos && line[first] == '[' && line[last] == ']') {
        headers.push_back(line.substr(first + 1, last - first - 1));
      }
    }
  }

  RunConfig c;
  Reader r(tree, base_dir);

  r.section("run", {"seed"});
  r.integer("run", "seed", c.seed);

  r.param_section("material");
  for (int i = 0; i < kParamCount; ++i) {
    const auto p = static_cast<Param>(i);
    double v = get(c.material, p);
    r.number("material", std::string(param_name(p)), v);
    set(c.material, p, v);
  }
  check(r.errors, "[material]", [&] { c.material.validate(); });

  r.param_section("distribution");
  for (auto& d : c.distributions) {
    const std::string key(param_name(d.param));
    const auto* v = r.raw("distribution", key);
    if (!v) continue;
    const auto w = words(*v);
    double a = 0, b = 0;
    auto num = [](const std::string& s, double& x) {
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
      return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(x);
    };
    if (w.size() == 3 && w[0] == "uniform" && num(w[1], a) && num(w[2], b)) {
      if (!(a < b)) {
        r.fail("distribution", key, *v, "uniform needs lo < hi");
      } else if (!param_value_valid(d.param, a) || !param_value_valid(d.param, b)) {
        r.fail("distribution", key, *v, "bounds outside the valid range of " + key);
      } else {
        d.law = Marginal::uniform(a, b);
      }
    } else if (w.size() == 2 && w[0] == "point" && num(w[1], a)) {
      if (!param_value_valid(d.param, a)) {
        r.fail("distribution", key, *v, "value outside the valid range of " + key);
      } else {
        d.law = Marginal::point_mass(a);
      }
    } else {
      r.fail("distribution", key, *v, "expected 'uniform LO HI' or 'point VALUE'");
    }
  }

  r.section("load", {"sigma_max", "R", "n_inc", "N_cap"});
  r.number("load", "sigma_max", c.load.sigma_max);
  r.number("load", "R", c.load.R);
  r.integer("load", "n_inc", c.load.n_inc);
  r.integer("load", "N_cap", c.load.N_cap);
  check(r.errors, "[load]", [&] { c.load.validate(); });

  r.section("design", {"residual_strain"});
  r.number("design", "residual_strain", c.residual_strain);
  if (!(c.residual_strain >= 0.0)) r.errors.push_back("design.residual_strain: must be >= 0");

  r.section("model", {"energy", "cycle_jump", "jump_fraction", "warmup_cycles"});
  if (const auto* v = r.raw("model", "energy")) {
    if (*v == "standard") {
      c.model.energy = EnergyForm::standard;
    } else if (*v == "as_printed") {
      c.model.energy = EnergyForm::as_printed;
    } else {
      r.fail("model", "energy", *v, "expected standard or as_printed");
    }
  }
  r.boolean("model", "cycle_jump", c.jump.enabled);
  r.number("model", "jump_fraction", c.jump.target_fraction);
  r.integer("model", "warmup_cycles", c.jump.warmup_cycles);
  if (!(c.jump.target_fraction > 0.0 && c.jump.target_fraction <= 1.0)) {
    r.errors.push_back("model.jump_fraction: must lie in (0, 1]");
  }

  r.section("sensitivity", {"N", "bootstrap", "fixed_subsets"});
  r.integer("sensitivity", "N", c.sensitivity.N);
  r.integer("sensitivity", "bootstrap", c.sensitivity.bootstrap);
  if (const auto* v = r.raw("sensitivity", "fixed_subsets")) {
    c.sensitivity.fixed_subsets.clear();
    std::stringstream groups(*v);
    for (std::string g; std::getline(groups, g, ';');) {
      std::vector<Param> ps;
      for (const auto& w : words(g)) {
        if (auto p = param_from_name(w)) {
          ps.push_back(*p);
        } else {
          r.fail("sensitivity", "fixed_subsets", *v, "unknown parameter '" + w + "'");
        }
      }
      if (!ps.empty()) c.sensitivity.fixed_subsets.push_back(std::move(ps));
    }
  }
  if (c.sensitivity.N < 2) r.errors.push_back("sensitivity.N: must be >= 2");

  r.section("likelihood", {"scale", "sigma", "infer_sigma", "sigma_lo", "sigma_hi"});
  if (const auto* v = r.raw("likelihood", "scale")) {
    if (*v == "log10") {
      c.likelihood.scale = Scale::log10;
    } else if (*v == "linear") {
      c.likelihood.scale = Scale::linear;
    } else {
      r.fail("likelihood", "scale", *v, "expected log10 or linear");
    }
  }
  r.number("likelihood", "sigma", c.likelihood.sigma);
  r.boolean("likelihood", "infer_sigma", c.likelihood.infer_sigma);
  r.number("likelihood", "sigma_lo", c.likelihood.sigma_lo);
  r.number("likelihood", "sigma_hi", c.likelihood.sigma_hi);
  check(r.errors, "[likelihood]", [&] { c.likelihood.validate(0); });

  auto& cal = c.calibration;
  r.section("calibration", {"data", "params", "samples_per_level", "steps_per_sample", "levels", "initial_scale",
                            "start", "step", "bounded"});
  r.path("calibration", "data", cal.data);
  r.params("calibration", "params", cal.params);
  r.integer("calibration", "samples_per_level", cal.tempering.samples_per_level);
  r.integer("calibration", "steps_per_sample", cal.tempering.steps_per_sample);
  r.integer("calibration", "levels", cal.tempering.levels);
  r.number("calibration", "initial_scale", cal.tempering.initial_scale);
  r.numbers("calibration", "start", cal.start);
  r.numbers("calibration", "step", cal.step);
  r.boolean("calibration", "bounded", cal.bounded);
  if (cal.params.empty()) r.errors.push_back("calibration.params: at least one parameter required");
  for (std::size_t i = 0; i < cal.params.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (cal.params[i] == cal.params[j]) r.errors.push_back("calibration.params: duplicate parameter");
    }
  }
  for (const auto& d : c.priors()) {
    if (d.law.kind != Marginal::Kind::uniform) {
      r.errors.push_back("calibration.params: prior of '" + std::string(param_name(d.param)) +
                         "' must be uniform in [distribution]");
    }
  }
  if (cal.start.size() != cal.params.size() || cal.step.size() != cal.params.size()) {
    r.errors.push_back("calibration.start/step: one value per calibrated parameter required");
  }
  if (cal.tempering.samples_per_level < 2) r.errors.push_back("calibration.samples_per_level: must be >= 2");
  if (cal.tempering.steps_per_sample < 1) r.errors.push_back("calibration.steps_per_sample: must be >= 1");
  if (cal.tempering.levels < 1) r.errors.push_back("calibration.levels: must be >= 1");
  if (!(cal.tempering.initial_scale > 0.0)) r.errors.push_back("calibration.initial_scale: must be > 0");

  auto& pr = c.prediction;
  r.section("prediction", {"posterior", "M", "stresses", "band"});
  r.path("prediction", "posterior", pr.posterior);
  r.integer("prediction", "M", pr.M);
  r.numbers("prediction", "stresses", pr.stresses);
  if (const auto* v = r.raw("prediction", "band")) {
    if (*v == "equal_tailed") {
      pr.band = BandKind::equal_tailed;
    } else if (*v == "hdi") {
      pr.band = BandKind::highest_density;
    } else {
      r.fail("prediction", "band", *v, "expected equal_tailed or hdi");
    }
  }
  if (pr.M < 2) r.errors.push_back("prediction.M: must be >= 2");
  if (pr.stresses.empty() || !std::is_sorted(pr.stresses.begin(), pr.stresses.end()) ||
      std::any_of(pr.stresses.begin(), pr.stresses.end(), [](double s) { return !(s > 0.0); })) {
    r.errors.push_back("prediction.stresses: need ascending positive values");
  }

  r.section("design_query", {"N_target", "reliability", "v_lo", "v_hi", "tol_p", "bracket_tol", "scan_points"});
  r.number("design_query", "N_target", c.design.N_target);
  r.number("design_query", "reliability", c.design.rho);
  r.number("design_query", "v_lo", c.design.v_lo);
  r.number("design_query", "v_hi", c.design.v_hi);
  r.number("design_query", "tol_p", c.design.tol_p);
  r.number("design_query", "bracket_tol", c.design.bracket_tol);
  r.integer("design_query", "scan_points", c.design.scan_points);
  check(r.errors, "[design_query]", [&] { c.design.validate(); });

  r.unknown_sections(headers);
  if (!r.errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : r.errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path.parent_path());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  auto kv = [&](std::string_view k, const std::string& v) { out << k << " = " << v << '\n'; };
  auto num = [&](std::string_view k, double v) { kv(k, format_double(v)); };

  out << "[run]\n";
  kv("seed", std::to_string(c.seed));

  out << "\n[material]\n";
  for (int i = 0; i < kParamCount; ++i) num(param_name(static_cast<Param>(i)), get(c.material, static_cast<Param>(i)));

  out << "\n[distribution]\n";
  for (const auto& d : c.distributions) kv(param_name(d.param), distribution_text(d.law));

  out << "\n[load]\n";
  num("sigma_max", c.load.sigma_max);
  num("R", c.load.R);
  kv("n_inc", std::to_string(c.load.n_inc));
  kv("N_cap", std::to_string(c.load.N_cap));

  out << "\n[design]\n";
  num("residual_strain", c.residual_strain);

  out << "\n[model]\n";
  kv("energy", c.model.energy == EnergyForm::standard ? "standard" : "as_printed");
  kv("cycle_jump", c.jump.enabled ? "true" : "false");
  num("jump_fraction", c.jump.target_fraction);
  kv("warmup_cycles", std::to_string(c.jump.warmup_cycles));

  out << "\n[sensitivity]\n";
  kv("N", std::to_string(c.sensitivity.N));
  kv("bootstrap", std::to_string(c.sensitivity.bootstrap));
  std::string subsets;
  for (const auto& g : c.sensitivity.fixed_subsets) subsets += (subsets.empty() ? "" : "; ") + join_params(g);
  kv("fixed_subsets", subsets);

  out << "\n[likelihood]\n";
  kv("scale", c.likelihood.scale == Scale::log10 ? "log10" : "linear");
  num("sigma", c.likelihood.sigma);
  kv("infer_sigma", c.likelihood.infer_sigma ? "true" : "false");
  num("sigma_lo", c.likelihood.sigma_lo);
  num("sigma_hi", c.likelihood.sigma_hi);

  const auto& cal = c.calibration;
  out << "\n[calibration]\n";
  kv("data", cal.data);
  kv("params", join_params(cal.params));
  kv("samples_per_level", std::to_string(cal.tempering.samples_per_level));
  kv("steps_per_sample", std::to_string(cal.tempering.steps_per_sample));
  kv("levels", std::to_string(cal.tempering.levels));
  num("initial_scale", cal.tempering.initial_scale);
  kv("start", join_numbers(cal.start));
  kv("step", join_numbers(cal.step));
  kv("bounded", cal.bounded ? "true" : "false");

  const auto& pr = c.prediction;
  out << "\n[prediction]\n";
  kv("posterior", pr.posterior);
  kv("M", std::to_string(pr.M));
  kv("stresses", join_numbers(pr.stresses));
  kv("band", pr.band == BandKind::equal_tailed ? "equal_tailed" : "hdi");

  out << "\n[design_query]\n";
  num("N_target", c.design.N_target);
  num("reliability", c.design.rho);
  num("v_lo", c.design.v_lo);
  num("v_hi", c.design.v_hi);
  num("tol_p", c.design.tol_p);
  num("bracket_tol", c.design.bracket_tol);
  kv("scan_points", std::to_string(c.design.scan_points));
  return out.str();
}

}  // namespace fatigue::app
