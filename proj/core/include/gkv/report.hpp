#pragma once

// Residual bookkeeping and check reports.
//
// A residual compares two evaluations of the same quantity:
//   abs    = max_k |lhs_k - rhs_k|
//   scaled = abs / max(1, |lhs|_inf, |rhs|_inf, extra)
// and a required identity passes when the largest scaled residual over all
// probes and points stays below its tolerance.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gkv/expr.hpp"

namespace gkv {

enum class Status { pass, fail, informational };

std::string to_string(Status s);
Status status_from_string(std::string_view s);

// Side magnitude a substantive identity must reach on at least one probe.
inline constexpr double kNondegenerateSide = 0.1;

struct IdentitySpec {
  std::string id;
  std::string anchor;  // the formula being checked
  std::string group;
  bool required = true;
  bool substantive = false;
  bool exact = false;  // passes only on a zero residual
  std::optional<double> tolerance;  // overrides the run tolerance
};

class Residual {
 public:
  void observe(std::span<const double> lhs, std::span<const double> rhs,
               std::span<const double> point, std::string_view probe, double extra_scale = 0.0);
  void observe(double lhs, double rhs, std::span<const double> point, std::string_view probe,
               double extra_scale = 0.0);
  // Combines with a tally from a later point; ties keep the earlier worst.
  void merge(const Residual& later);

  double max_scaled() const noexcept { return max_scaled_; }
  double max_abs() const noexcept { return max_abs_; }
  double max_side() const noexcept { return max_side_; }
  std::size_t samples() const noexcept { return samples_; }
  const std::vector<double>& worst_point() const noexcept { return worst_point_; }
  const std::string& worst_probe() const noexcept { return worst_probe_; }

 private:
  double max_scaled_ = 0.0;
  double max_abs_ = 0.0;
  double max_side_ = 0.0;
  std::size_t samples_ = 0;
  bool have_worst_ = false;
  std::vector<double> worst_point_;
  std::string worst_probe_;
};

struct IdentityRecord {
  std::string id;
  std::string anchor;
  std::string group;
  Status status = Status::pass;
  bool substantive = false;
  double tolerance = 0.0;
  double max_residual = 0.0;
  double max_abs_residual = 0.0;
  double max_side_magnitude = 0.0;
  std::size_t samples = 0;
  std::vector<double> worst_point;
  std::string worst_probe;
  std::optional<double> value;
  std::string note;
};

IdentityRecord make_record(const IdentitySpec& spec, const Residual& r, double run_tolerance);
// A reported quantity rather than a comparison; always informational.
IdentityRecord value_record(std::string id, std::string anchor, std::string group, double value,
                            std::vector<double> point, std::string note = {});

// Per-point tallies for a fixed, ordered list of identities.
class Tally {
 public:
  explicit Tally(const std::vector<IdentitySpec>* specs);
  Residual& operator[](std::string_view id);
  void merge(const Tally& later);
  std::vector<IdentityRecord> records(double run_tolerance) const;

 private:
  const std::vector<IdentitySpec>* specs_;
  std::vector<Residual> residuals_;
};

struct CheckReport {
  std::string suite;
  std::string target;
  ParamTable params;
  std::uint64_t seed = 0;
  std::size_t points = 0;
  double tolerance = 0.0;
  int jet_order = 0;
  std::vector<IdentityRecord> records;
  std::vector<std::pair<std::string, std::string>> verdicts;
  std::vector<std::string> notes;
  // Shown in the text report only, so structured reports stay reproducible.
  double duration_seconds = 0.0;

  bool passed() const;
  const IdentityRecord* find(std::string_view id) const;
};

struct RunOptions {
  std::size_t points = 100;
  std::uint64_t seed = 42;
  double tolerance = 1e-8;
  int jet_order = 3;
  unsigned threads = 0;
};

// Report header filled from the run options.
CheckReport start_report(std::string suite, std::string target, ParamTable params,
                         const RunOptions& opt);

nlohmann::json to_json(const CheckReport& r);
CheckReport report_from_json(const nlohmann::json& j);
std::string format_structured(const CheckReport& r);
std::string format_text(const CheckReport& r);

}  // namespace gkv
