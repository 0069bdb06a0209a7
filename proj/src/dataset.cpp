#include "fatigue/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fatigue/errors.hpp"

namespace fatigue {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double number(const std::string& cell, const char* field, std::size_t line) {
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw DataError("line " + std::to_string(line) + ": " + field + " is not a number: '" + cell + "'");
  }
  return v;
}

void check_record(const FatigueRecord& r, const std::string& where) {
  if (!(r.cycles >= 1.0)) throw DataError(where + "cycles must be >= 1");
  if (!(r.remote_stress > 0.0)) throw DataError(where + "remote stress must be positive");
  if (!(r.notch_stress > 0.0)) throw DataError(where + "notch stress must be positive");
  if (r.notch_stress < r.remote_stress) throw DataError(where + "notch stress is below remote stress");
  if (!(r.R < 1.0)) throw DataError(where + "stress ratio must be < 1");
}

}  // namespace

void FatigueDataset::validate() const {
  for (const auto& r : records) check_record(r, "sample '" + r.sample_id + "': ");
}

FatigueDataset parse_dataset(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  bool with_R = false;
  FatigueDataset data;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(trim(line));
    if (!have_header) {
      const std::vector<std::string> base{"sample_id", "cycles", "remote_stress_ksi", "notch_stress_ksi"};
      auto with = base;
      with.push_back("R");
      if (cells == base) {
        with_R = false;
      } else if (cells == with) {
        with_R = true;
      } else {
        throw DataError("line " + std::to_string(lineno) +
                        ": expected header 'sample_id,cycles,remote_stress_ksi,notch_stress_ksi[,R]'");
      }
      have_header = true;
      continue;
    }
    const std::size_t want = with_R ? 5 : 4;
    if (cells.size() != want) {
      throw DataError("line " + std::to_string(lineno) + ": expected " + std::to_string(want) +
                      " fields, found " + std::to_string(cells.size()));
    }
    FatigueRecord r;
    r.sample_id = cells[0];
    if (r.sample_id.empty()) throw DataError("line " + std::to_string(lineno) + ": empty sample_id");
    r.cycles = number(cells[1], "cycles", lineno);
    r.remote_stress = number(cells[2], "remote_stress_ksi", lineno);
    r.notch_stress = number(cells[3], "notch_stress_ksi", lineno);
    if (with_R) r.R = number(cells[4], "R", lineno);
    check_record(r, "line " + std::to_string(lineno) + ": ");
    data.records.push_back(std::move(r));
  }
  if (!have_header) throw DataError("missing header");
  if (data.empty()) throw DataError("no records");
  return data;
}

FatigueDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset '" + path.string() + "'");
  return parse_dataset(in);
}

}  // namespace fatigue
