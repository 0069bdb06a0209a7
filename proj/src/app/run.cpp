#include "fatigue/app/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <boost/version.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>
#include <openssl/opensslv.h>

#include "fatigue/errors.hpp"
#include "fatigue/export.hpp"
#include "fatigue/stats.hpp"

#ifndef FATIGUE_VERSION
#define FATIGUE_VERSION "0.0.0"
#endif

namespace fatigue::app {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

PosteriorChain load_posterior(const RunConfig& c) {
  if (c.prediction.posterior.empty()) {
    std::vector<std::string> names;
    std::vector<double> values;
    for (Param p : c.calibration.params) {
      names.emplace_back(param_name(p));
      values.push_back(get(c.material, p));
    }
    return point_posterior(std::move(names), std::move(values));
  }
  return parse_chain_csv(read_file(c.prediction.posterior));
}

PredictionSettings prediction_settings(const RunConfig& c) {
  PredictionSettings s;
  s.base = c.material;
  s.load = c.load;
  s.design = DesignSpec::from_magnitude(c.residual_strain);
  s.jump = c.jump;
  s.model = c.model;
  s.M = c.prediction.M;
  s.seed = c.seed;
  s.band = c.prediction.band;
  return s;
}

FatigueDataset load_data(const RunConfig& c) {
  if (c.calibration.data.empty()) throw ConfigError("no dataset given: use --data or calibration.data");
  return load_dataset(c.calibration.data);
}

ForwardScenario coupon_scenario(const RunConfig& c) {
  ForwardScenario sc = c.scenario();
  sc.design = DesignSpec::none();
  return sc;
}

std::string g17(double v) { return format_double(v); }

RunOutcome run_simulate(const RunConfig& c) {
  const ForwardScenario sc = c.scenario();
  const LifeResult life = simulate_life(sc.load, sc.design, sc.base, sc.jump, sc.model);
  std::ostringstream csv;
  csv << "sigma_max,R,residual_strain,N_f,runout,D_final,integrated_cycles\n"
      << g17(c.load.sigma_max) << ',' << g17(c.load.R) << ',' << g17(c.residual_strain) << ',' << life.N_f << ','
      << (life.runout ? 1 : 0) << ',' << g17(life.D_final) << ',' << life.integrated_cycles << '\n';
  std::ostringstream line;
  line << "N_f=" << life.N_f << " runout=" << (life.runout ? "true" : "false") << " D_final=" << g17(life.D_final)
       << " integrated_cycles=" << life.integrated_cycles;
  return {{{"simulate.csv", csv.str()}}, line.str()};
}

RunOutcome run_sensitivity(const RunConfig& c) {
  const ForwardScenario sc = c.scenario();
  const SaltelliOptions opts{c.seed, c.sensitivity.bootstrap};
  const auto study = run_sensitivity_study(c.distributions, sc, c.sensitivity.N, opts);
  const SampleMatrix A = draw_matrix(c.distributions, c.sensitivity.N, c.seed, kStreamA);
  const auto curves = kde_compare_study(c.distributions, sc, c.sensitivity.N, c.sensitivity.fixed_subsets, c.seed);
  RunOutcome out;
  out.files = {{"sensitivity_log10.csv", sensitivity_csv(study.log10)},
               {"sensitivity_linear.csv", sensitivity_csv(study.linear)},
               {"scatter.csv", ensemble_csv(A, study.base_outputs)},
               {"kde_compare.csv", kde_comparison_csv(curves)}};
  std::ostringstream s;
  s << "evaluations=" << study.log10.evaluations << " ranking(log10):";
  for (auto i : study.log10.ranking()) s << ' ' << study.log10.names[i] << '=' << g17(study.log10.S_T[i]);
  out.summary = s.str();
  return out;
}

RunOutcome run_calibrate(const RunConfig& c) {
  const FatigueDataset data = load_data(c);
  CalibrationSettings settings;
  settings.scenario = coupon_scenario(c);
  settings.tempering = c.calibration.tempering;
  settings.tempering.seed = c.seed;
  const CalibrationResult res = calibrate_bayes(data, c.priors(), c.likelihood, settings);

  std::ostringstream sum;
  sum << "records = " << data.size() << '\n'
      << "model_evaluations = " << res.model_evaluations << '\n'
      << "levels = " << res.chain.alphas.size() - 1 << '\n';
  for (std::size_t l = 0; l < res.chain.alphas.size(); ++l) {
    sum << "level " << l << " alpha = " << g17(res.chain.alphas[l]) << " acceptance = " << g17(res.chain.acceptance[l])
        << " ess = " << g17(res.chain.ess[l]) << " proposal_scale = " << g17(res.chain.proposal_scale[l]) << '\n';
  }
  sum << "degenerate_levels =";
  for (int l : res.chain.degenerate_levels) sum << ' ' << l;
  sum << '\n';
  std::ostringstream line;
  for (std::size_t j = 0; j < res.chain.dim; ++j) {
    auto col = res.chain.final_column(j);
    const bool log_sigma = res.chain.names[j] == "log_sigma";
    if (log_sigma) {
      for (auto& v : col) v = std::exp(v);
    }
    const std::string name = log_sigma ? "sigma" : res.chain.names[j];
    const auto ci = equal_tailed(col, 0.95);
    sum << name << ".mean = " << g17(mean(col)) << '\n'
        << name << ".q2.5 = " << g17(ci.lo) << '\n'
        << name << ".q97.5 = " << g17(ci.hi) << '\n';
    line << (j ? " " : "") << name << "=" << g17(mean(col)) << " [" << g17(ci.lo) << ", " << g17(ci.hi) << "]";
  }
  return {{{"chain.csv", chain_csv(res.chain)},
           {"marginals.csv", marginals_csv(res.chain, res.marginals)},
           {"calibration_summary.txt", sum.str()}},
          line.str()};
}

RunOutcome run_calibrate_det(const RunConfig& c) {
  const FatigueDataset data = load_data(c);
  std::optional<Box> bounds;
  if (c.calibration.bounded) bounds = prior_box(c.priors(), LikelihoodSpec{});
  const auto res = calibrate_deterministic(data, coupon_scenario(c), c.calibration.params, c.calibration.start,
                                           c.calibration.step, c.likelihood.scale, bounds);
  std::ostringstream txt, line;
  for (std::size_t j = 0; j < res.params.size(); ++j) {
    txt << param_name(res.params[j]) << " = " << g17(res.x[j]) << '\n';
    line << param_name(res.params[j]) << '=' << g17(res.x[j]) << ' ';
  }
  txt << "ssr = " << g17(res.ssr) << '\n'
      << "evaluations = " << res.search.evaluations << '\n'
      << "converged = " << (res.search.converged ? "true" : "false") << '\n'
      << "message = " << res.search.message << '\n'
      << "bounded = " << (c.calibration.bounded ? "true" : "false") << '\n';
  line << "ssr=" << g17(res.ssr) << " (" << res.search.message << ")";
  return {{{"calibrate_det.txt", txt.str()}}, line.str()};
}

RunOutcome run_sn_curve(const RunConfig& c) {
  const auto pts = sn_curve(load_posterior(c), c.prediction.stresses, c.load.R, prediction_settings(c));
  std::size_t flagged = 0;
  for (const auto& p : pts) flagged += p.all_runout;
  return {{{"sn_curve.csv", sn_csv(pts)}},
          "levels=" + std::to_string(pts.size()) + " all_runout_levels=" + std::to_string(flagged)};
}

RunOutcome run_life_dist(const RunConfig& c) {
  const auto dist = life_distribution(load_posterior(c), prediction_settings(c));
  std::ostringstream lives;
  lives << "draw,N_f,runout\n";
  for (std::size_t i = 0; i < dist.lives.size(); ++i) {
    lives << i << ',' << g17(dist.lives.cycles[i]) << ',' << static_cast<int>(dist.lives.runout[i]) << '\n';
  }
  const double p = reliability(dist.lives, c.design.N_target);
  return {{{"life_distribution.csv", distribution_csv(dist)}, {"lives.csv", lives.str()}},
          "P(N_f >= " + g17(c.design.N_target) + ")=" + g17(p) + (dist.degenerate ? " (degenerate)" : "")};
}

RunOutcome run_design(const RunConfig& c) {
  const auto settings = prediction_settings(c);
  const auto res = inverse_design(c.design, load_posterior(c), settings);
  return {{{"design_report.txt", design_report(c.design, settings, res)}, {"design_trace.csv", design_trace_csv(res)}},
          "v=" + g17(res.v) + " reliability=" + g17(res.achieved) + " (" + res.termination + ")" +
              (res.non_monotone ? " non-monotone" : "")};
}

}  // namespace

RunOutcome execute(std::string_view command, const RunConfig& config) {
  if (command == "simulate") return run_simulate(config);
  if (command == "sensitivity") return run_sensitivity(config);
  if (command == "calibrate") return run_calibrate(config);
  if (command == "calibrate-det") return run_calibrate_det(config);
  if (command == "sn-curve") return run_sn_curve(config);
  if (command == "life-dist") return run_life_dist(config);
  if (command == "design") return run_design(config);
  throw ConfigError("unknown command '" + std::string(command) + "'");
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("sha256 failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

std::string file_sha256(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

std::string make_manifest(std::string_view command, const RunConfig& config, const std::vector<OutputFile>& files) {
  using nlohmann::ordered_json;
  const std::string text = serialize_config(config);
  ordered_json m;
  m["command"] = command;
  m["seed"] = config.seed;
  m["config_sha256"] = sha256_hex(text);
  m["config"] = text;
  ordered_json inputs = ordered_json::object();
  if (!config.calibration.data.empty()) {
    inputs["data"] = {{"path", config.calibration.data}, {"sha256", file_sha256(config.calibration.data)}};
  }
  if (!config.prediction.posterior.empty()) {
    inputs["posterior"] = {{"path", config.prediction.posterior},
                           {"sha256", file_sha256(config.prediction.posterior)}};
  }
  m["inputs"] = inputs;
  ordered_json outputs = ordered_json::object();
  for (const auto& f : files) outputs[f.name] = sha256_hex(f.content);
  m["outputs"] = outputs;
  m["versions"] = {{"fatigue", FATIGUE_VERSION},
                   {"compiler", __VERSION__},
                   {"boost", BOOST_LIB_VERSION},
                   {"openssl", OPENSSL_VERSION_TEXT},
                   {"openmp", _OPENMP}};
  return m.dump(2) + "\n";
}

void commit(const std::filesystem::path& dir, const std::vector<OutputFile>& files) {
  std::filesystem::create_directories(dir);
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged;
  try {
    for (const auto& f : files) {
      const auto tmp = dir / ("." + f.name + ".tmp");
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << f.content;
      out.close();
      if (!out) throw DataError("cannot write '" + tmp.string() + "'");
      staged.emplace_back(tmp, dir / f.name);
    }
  } catch (...) {
    for (const auto& [tmp, dest] : staged) std::filesystem::remove(tmp);
    throw;
  }
  for (const auto& [tmp, dest] : staged) std::filesystem::rename(tmp, dest);
}

RunOutcome run_and_write(std::string_view command, const RunConfig& config, const std::filesystem::path& out_dir) {
  RunOutcome outcome = execute(command, config);
  auto files = outcome.files;
  files.push_back({"manifest.json", make_manifest(command, config, outcome.files)});
  commit(out_dir, files);
  return outcome;
}

ReplayReport replay(const std::filesystem::path& manifest, const std::filesystem::path& out_dir) {
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(read_file(manifest));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("manifest '" + manifest.string() + "': " + e.what());
  }
  if (!m.contains("command") || !m.contains("config")) throw DataError("manifest lacks command or config");
  const auto inputs = m.value("inputs", nlohmann::json::object());
  for (const auto& [name, input] : inputs.items()) {
    const std::string path = input.at("path");
    if (file_sha256(path) != input.at("sha256").get<std::string>()) {
      throw DataError("replay: input '" + name + "' at " + path + " changed since the recorded run");
    }
  }
  const std::string command = m.at("command");
  const RunConfig config = parse_config_text(m.at("config").get<std::string>());
  ReplayReport report;
  report.outcome = run_and_write(command, config, out_dir);
  const auto recorded = m.value("outputs", nlohmann::json::object());
  for (const auto& f : report.outcome.files) {
    if (!recorded.contains(f.name) || recorded.at(f.name).get<std::string>() != sha256_hex(f.content)) {
      report.mismatches.push_back(f.name);
    }
  }
  return report;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e)) return 2;
  if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return 3;
  if (dynamic_cast<const NumericalError*>(&e)) return 4;
  return 1;
}

}  // namespace fatigue::app
