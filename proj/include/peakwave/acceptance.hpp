#pragma once

// The acceptance suite shared by `peakwave verify` and the acceptance test
// binary. Results carry no timings except `seconds`, which callers must keep
// out of emitted files.

#include <filesystem>
#include <string>
#include <vector>

namespace peakwave {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  int jobs = 1;
  /// Where the determinism check writes its two pipeline runs.
  std::filesystem::path scratch_dir = std::filesystem::temp_directory_path();
};

inline constexpr int kCriterionCount = 12;

const char* criterion_name(int id);
CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

/// Byte comparison of every regular file under two directories.
/// Returns an empty string when identical, otherwise the first difference.
std::string compare_trees(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace peakwave
