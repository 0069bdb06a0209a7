#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace fatigue {

/// One fatigue test. Stresses in ksi.
struct FatigueRecord {
  std::string sample_id;
  double cycles = 0.0;
  double remote_stress = 0.0;
  double notch_stress = 0.0;
  double R = 0.1;
};

struct FatigueDataset {
  std::vector<FatigueRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  void validate() const;
};

/// CSV with header `sample_id,cycles,remote_stress_ksi,notch_stress_ksi[,R]`.
/// Throws DataError naming the offending line.
FatigueDataset parse_dataset(std::istream& in);
FatigueDataset load_dataset(const std::filesystem::path& path);

}  // namespace fatigue
