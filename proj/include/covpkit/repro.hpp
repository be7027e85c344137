#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "covpkit/enumerate.hpp"

namespace covpkit {

enum class ClaimStatus { pass, fail, inconclusive, recorded, skipped };

[[nodiscard]] const char* to_string(ClaimStatus s) noexcept;

struct Claim {
  std::string claim;
  std::string citation;
  nlohmann::json expected;
  nlohmann::json computed;
  ClaimStatus status = ClaimStatus::pass;
  double seconds = 0.0;
};

/// `recorded` claims document a discrepancy in the source; neither they nor
/// `skipped` claims count as failures.
struct ReproReport {
  std::string scenario;
  std::vector<Claim> claims;

  [[nodiscard]] bool passed() const;
  /// Byte-identical across runs unless `timing` adds wall-clock seconds.
  [[nodiscard]] nlohmann::json to_json(bool timing = false) const;
};

[[nodiscard]] const std::vector<std::string>& repro_scenarios();

/// example1, rank-md, dims or conjecture. Throws InputError for other names.
[[nodiscard]] ReproReport run_repro(const std::string& scenario, const SearchBudget& budget = SearchBudget::from_env());

}  // namespace covpkit
