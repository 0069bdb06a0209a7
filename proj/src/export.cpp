#include "fatigue/export.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "fatigue/errors.hpp"

namespace fatigue {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace {

class Csv {
 public:
  Csv& operator<<(double v) { return cell(format_double(v)); }
  Csv& operator<<(std::string_view s) { return cell(std::string(s)); }
  Csv& operator<<(std::size_t v) { return cell(std::to_string(v)); }
  Csv& operator<<(int v) { return cell(std::to_string(v)); }
  Csv& cell(const std::string& s) {
    if (!first_) out_ << ',';
    out_ << s;
    first_ = false;
    return *this;
  }
  void end() {
    out_ << '\n';
    first_ = true;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  bool first_ = true;
};

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + '"';
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out(1);
  for (char c : line) {
    if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

double parse_number(const std::string& s, std::size_t line) {
  if (s == "nan") return NAN;
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError("chain line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

std::string ensemble_csv(const SampleMatrix& inputs, const OutputEnsemble& outputs) {
  if (inputs.rows != outputs.size()) throw DomainError("ensemble_csv: inputs and outputs differ in length");
  Csv csv;
  csv << "row";
  for (std::size_t c = 0; c < inputs.cols(); ++c) {
    csv.cell(c < inputs.columns.size() ? std::string(param_name(inputs.columns[c])) : "x" + std::to_string(c + 1));
  }
  csv << "N_f" << "runout" << "error";
  csv.end();
  for (std::size_t r = 0; r < inputs.rows; ++r) {
    csv << r;
    for (std::size_t c = 0; c < inputs.cols(); ++c) csv << inputs(r, c);
    csv << outputs.cycles[r] << static_cast<int>(outputs.runout[r]) << quoted(outputs.errors[r]);
    csv.end();
  }
  return csv.str();
}

std::string sensitivity_csv(const SensitivityResult& result) {
  Csv csv;
  csv << "parameter" << "S_T" << "q05" << "q95";
  csv.end();
  for (std::size_t i = 0; i < result.names.size(); ++i) {
    csv << result.names[i] << result.S_T[i] << result.q05[i] << result.q95[i];
    csv.end();
  }
  return csv.str();
}

std::string kde_comparison_csv(const std::vector<KdeComparison>& curves) {
  Csv csv;
  csv << "label" << "x" << "density";
  csv.end();
  for (const auto& c : curves) {
    if (c.degenerate) {
      csv << c.label << c.point_value << "";
      csv.end();
      continue;
    }
    for (std::size_t i = 0; i < c.curve.x.size(); ++i) {
      csv << c.label << c.curve.x[i] << c.curve.density[i];
      csv.end();
    }
  }
  return csv.str();
}

std::string chain_csv(const PosteriorChain& chain) {
  Csv csv;
  csv << "step";
  for (const auto& n : chain.names) csv << (n == "log_sigma" ? std::string_view("sigma") : std::string_view(n));
  csv << "log_posterior" << "level";
  csv.end();
  for (std::size_t i = 0; i < chain.size(); ++i) {
    csv << i;
    for (std::size_t j = 0; j < chain.dim; ++j) {
      const double v = chain(i, j);
      csv << (chain.names[j] == "log_sigma" ? std::exp(v) : v);
    }
    csv << chain.log_target[i] << chain.level[i];
    csv.end();
  }
  return csv.str();
}

PosteriorChain parse_chain_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  PosteriorChain chain;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (header.empty()) {
      header = cells;
      if (header.size() < 4 || header.front() != "step" || header[header.size() - 2] != "log_posterior" ||
          header.back() != "level") {
        throw DataError("chain: expected header step,<parameters>,log_posterior,level");
      }
      for (std::size_t j = 1; j + 2 < header.size(); ++j) {
        chain.names.push_back(header[j] == "sigma" ? "log_sigma" : header[j]);
      }
      chain.dim = chain.names.size();
      continue;
    }
    if (cells.size() != header.size()) throw DataError("chain line " + std::to_string(lineno) + ": wrong field count");
    for (std::size_t j = 0; j < chain.dim; ++j) {
      const double v = parse_number(cells[j + 1], lineno);
      chain.samples.push_back(chain.names[j] == "log_sigma" ? std::log(v) : v);
    }
    chain.log_target.push_back(parse_number(cells[cells.size() - 2], lineno));
    chain.level.push_back(static_cast<int>(parse_number(cells.back(), lineno)));
  }
  if (chain.size() == 0) throw DataError("chain: no samples");
  return chain;
}

std::string marginals_csv(const PosteriorChain& chain, const std::vector<KdeCurve>& marginals) {
  Csv csv;
  csv << "parameter" << "x" << "density";
  csv.end();
  for (std::size_t j = 0; j < marginals.size() && j < chain.names.size(); ++j) {
    for (std::size_t i = 0; i < marginals[j].x.size(); ++i) {
      csv << chain.names[j] << marginals[j].x[i] << marginals[j].density[i];
      csv.end();
    }
  }
  return csv.str();
}

std::string sn_csv(const std::vector<SNPoint>& points) {
  Csv csv;
  csv << "stress" << "R" << "mean_log10_life" << "q2.5" << "q97.5" << "q25" << "q75" << "runouts" << "all_runout";
  csv.end();
  for (const auto& p : points) {
    csv << p.stress << p.R << p.mean_log10 << p.lo95 << p.hi95 << p.lo50 << p.hi50 << p.runouts
        << static_cast<int>(p.all_runout);
    csv.end();
  }
  return csv.str();
}

std::string distribution_csv(const LifeDistribution& dist) {
  Csv csv;
  csv << "log10_cycles" << "pdf" << "cdf";
  csv.end();
  for (std::size_t i = 0; i < dist.grid.size(); ++i) {
    csv << dist.grid[i];
    if (dist.degenerate) {
      csv << "";
    } else {
      csv << dist.pdf.density[i];
    }
    csv << dist.cdf[i];
    csv.end();
  }
  return csv.str();
}

std::string design_trace_csv(const DesignResult& result) {
  Csv csv;
  csv << "phase" << "v" << "reliability";
  csv.end();
  for (const auto& p : result.scan) {
    csv << "scan" << p.v << p.reliability;
    csv.end();
  }
  for (const auto& p : result.trace) {
    csv << "bisection" << p.v << p.reliability;
    csv.end();
  }
  return csv.str();
}

}  // namespace fatigue
