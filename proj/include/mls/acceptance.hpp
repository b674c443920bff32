#pragma once

// The fourteen acceptance experiments. One pass evaluates criteria 1-13 and
// writes every CSV/JSON artifact under a directory; the determinism criterion
// compares two passes run with different worker counts.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mls {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::filesystem::path output_dir = "acceptance-out";
  int workers = 1;
  int determinism_workers = 8;
  std::uint64_t seed = 20240607;
  bool check_determinism = true;
};

/// Criteria 1-13; artifacts go to `out` (created if missing).
std::vector<CriterionResult> run_acceptance_pass(const std::filesystem::path& out, int workers, std::uint64_t seed);

/// Byte comparison of every regular file under two directories.
CriterionResult compare_outputs(const std::filesystem::path& a, const std::filesystem::path& b);

/// Pass at `workers` into output_dir/workers-N, and when requested a second
/// pass at `determinism_workers` with criterion 14 comparing the two.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "[PASS] 1 exact-counting: ..." style line.
std::string format_result(const CriterionResult& r);

}  // namespace mls
