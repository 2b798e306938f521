#pragma once

#include "quadham/systems.hpp"

#include <json.hpp>

#include <cstdint>

namespace quadham {

inline constexpr const char* kVersion = "0.1.0";

enum class ClaimStatus { pass, fail, mismatch_reported };

const char* status_name(ClaimStatus s);

struct Claim {
  std::string id;
  std::string anchor;
  double residual = 0.0;
  double tolerance = 0.0;
  ClaimStatus status = ClaimStatus::pass;
  std::string note;
  nlohmann::json details;  // null when absent
};

struct VerifyConfig {
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  Params params;
  // Multiplies every upper-bound tolerance.
  double tol_scale = 1.0;
};

struct VerificationReport {
  std::string system;
  std::string anchor;
  Params params;
  std::vector<Claim> claims;  // sorted by id
  std::uint64_t seed = 0;
  std::size_t samples = 0;

  const Claim* find(const std::string& id) const;
  bool hard_failure() const;
  std::size_t count(ClaimStatus s) const;
};

/// Runs every registered claim for `system`. Throws UnknownSystemError,
/// ConstraintError, or std::invalid_argument for bad parameters.
VerificationReport verify_system(const std::string& system, const VerifyConfig& cfg);

/// Deterministic mode omits the timestamp.
nlohmann::json to_json(const VerificationReport& report, bool deterministic);

/// Concatenates claims of several reports. Each claim carries its source
/// system, environments are kept per source, and a warning is set when the
/// sources disagree on the version.
nlohmann::json merge_reports(const std::vector<nlohmann::json>& reports);

}  // namespace quadham
