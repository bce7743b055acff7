#include "gkv/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gkv/error.hpp"

namespace gkv {

using nlohmann::json;

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::informational: return "informational";
  }
  return "fail";
}

Status status_from_string(std::string_view s) {
  if (s == "pass") return Status::pass;
  if (s == "fail") return Status::fail;
  if (s == "informational") return Status::informational;
  throw InvalidArgument("unknown status '" + std::string(s) + "'");
}

namespace {

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// NaN compares false everywhere; treat it as the largest residual.
bool worse(double a, double b) { return std::isnan(a) ? !std::isnan(b) : a > b; }

}  // namespace

void Residual::observe(std::span<const double> lhs, std::span<const double> rhs,
                       std::span<const double> point, std::string_view probe,
                       double extra_scale) {
  double abs = 0.0;
  for (std::size_t k = 0; k < lhs.size(); ++k) {
    const double d = std::abs(lhs[k] - rhs[k]);
    if (worse(d, abs)) abs = d;
  }
  const double l = inf_norm(lhs), r = inf_norm(rhs);
  const double scale = std::max({1.0, l, r, std::abs(extra_scale)});
  const double scaled = abs / scale;
  ++samples_;
  max_side_ = std::max(max_side_, std::min(l, r));
  if (worse(abs, max_abs_)) max_abs_ = abs;
  if (!have_worst_ || worse(scaled, max_scaled_)) {
    have_worst_ = true;
    max_scaled_ = scaled;
    worst_point_.assign(point.begin(), point.end());
    worst_probe_.assign(probe);
  }
}

void Residual::observe(double lhs, double rhs, std::span<const double> point,
                       std::string_view probe, double extra_scale) {
  observe(std::span<const double>(&lhs, 1), std::span<const double>(&rhs, 1), point, probe,
          extra_scale);
}

void Residual::merge(const Residual& later) {
  if (later.samples_ == 0) return;
  samples_ += later.samples_;
  max_side_ = std::max(max_side_, later.max_side_);
  if (worse(later.max_abs_, max_abs_)) max_abs_ = later.max_abs_;
  if (!have_worst_ || worse(later.max_scaled_, max_scaled_)) {
    have_worst_ = true;
    max_scaled_ = later.max_scaled_;
    worst_point_ = later.worst_point_;
    worst_probe_ = later.worst_probe_;
  }
}

IdentityRecord make_record(const IdentitySpec& spec, const Residual& r, double run_tolerance) {
  IdentityRecord rec;
  rec.id = spec.id;
  rec.anchor = spec.anchor;
  rec.group = spec.group;
  rec.substantive = spec.substantive;
  rec.tolerance = spec.exact ? 0.0 : spec.tolerance.value_or(run_tolerance);
  rec.max_residual = r.max_scaled();
  rec.max_abs_residual = r.max_abs();
  rec.max_side_magnitude = r.max_side();
  rec.samples = r.samples();
  rec.worst_point = r.worst_point();
  rec.worst_probe = r.worst_probe();

  bool ok = spec.exact ? r.max_abs() == 0.0 : r.max_scaled() < rec.tolerance;
  if (r.samples() == 0) {
    ok = false;
    rec.note = "no samples";
  } else if (!ok) {
    rec.note = spec.exact ? "expected an exact zero" : "residual above tolerance";
  } else if (spec.substantive && r.max_side() < kNondegenerateSide) {
    ok = false;
    rec.note = "degenerate: both sides stay below the nondegeneracy floor";
  }
  if (!spec.required) {
    rec.status = Status::informational;
    if (rec.note.empty() && !ok) rec.note = "informational";
  } else {
    rec.status = ok ? Status::pass : Status::fail;
  }
  return rec;
}

IdentityRecord value_record(std::string id, std::string anchor, std::string group, double value,
                            std::vector<double> point, std::string note) {
  IdentityRecord rec;
  rec.id = std::move(id);
  rec.anchor = std::move(anchor);
  rec.group = std::move(group);
  rec.status = Status::informational;
  rec.value = value;
  rec.samples = 1;
  rec.worst_point = std::move(point);
  rec.note = std::move(note);
  return rec;
}

Tally::Tally(const std::vector<IdentitySpec>* specs) : specs_(specs), residuals_(specs->size()) {}

Residual& Tally::operator[](std::string_view id) {
  for (std::size_t i = 0; i < specs_->size(); ++i)
    if ((*specs_)[i].id == id) return residuals_[i];
  throw InvalidArgument("no identity named '" + std::string(id) + "' in this suite");
}

void Tally::merge(const Tally& later) {
  for (std::size_t i = 0; i < residuals_.size(); ++i) residuals_[i].merge(later.residuals_[i]);
}

std::vector<IdentityRecord> Tally::records(double run_tolerance) const {
  std::vector<IdentityRecord> out;
  out.reserve(residuals_.size());
  for (std::size_t i = 0; i < residuals_.size(); ++i)
    out.push_back(make_record((*specs_)[i], residuals_[i], run_tolerance));
  return out;
}

bool CheckReport::passed() const {
  return std::none_of(records.begin(), records.end(),
                      [](const IdentityRecord& r) { return r.status == Status::fail; });
}

const IdentityRecord* CheckReport::find(std::string_view id) const {
  for (const auto& r : records)
    if (r.id == id) return &r;
  return nullptr;
}

CheckReport start_report(std::string suite, std::string target, ParamTable params,
                         const RunOptions& opt) {
  CheckReport r;
  r.suite = std::move(suite);
  r.target = std::move(target);
  r.params = std::move(params);
  r.seed = opt.seed;
  r.points = opt.points;
  r.tolerance = opt.tolerance;
  r.jet_order = opt.jet_order;
  return r;
}

namespace {

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

std::vector<double> numbers_from(const json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number_from(x));
  return out;
}

}  // namespace

json to_json(const CheckReport& r) {
  json records = json::array();
  for (const auto& rec : r.records) {
    json jr = {{"id", rec.id},
               {"anchor", rec.anchor},
               {"group", rec.group},
               {"status", to_string(rec.status)},
               {"substantive", rec.substantive},
               {"tolerance", number(rec.tolerance)},
               {"max_residual", number(rec.max_residual)},
               {"max_abs_residual", number(rec.max_abs_residual)},
               {"max_side_magnitude", number(rec.max_side_magnitude)},
               {"samples", rec.samples},
               {"worst_point", numbers(rec.worst_point)},
               {"worst_probe", rec.worst_probe}};
    if (rec.value) jr["value"] = number(*rec.value);
    if (!rec.note.empty()) jr["note"] = rec.note;
    records.push_back(std::move(jr));
  }
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = number(v);
  json verdicts = json::array();
  for (const auto& [k, v] : r.verdicts) verdicts.push_back({{"name", k}, {"verdict", v}});
  return {{"suite", r.suite},
          {"target", r.target},
          {"params", params},
          {"seed", r.seed},
          {"points", r.points},
          {"tolerance", number(r.tolerance)},
          {"jet_order", r.jet_order},
          {"status", r.passed() ? "PASS" : "FAIL"},
          {"verdicts", verdicts},
          {"notes", r.notes},
          {"records", records}};
}

CheckReport report_from_json(const json& j) {
  CheckReport r;
  r.suite = j.at("suite").get<std::string>();
  r.target = j.at("target").get<std::string>();
  for (const auto& [k, v] : j.at("params").items()) r.params[k] = number_from(v);
  r.seed = j.at("seed").get<std::uint64_t>();
  r.points = j.at("points").get<std::size_t>();
  r.tolerance = number_from(j.at("tolerance"));
  r.jet_order = j.at("jet_order").get<int>();
  for (const auto& v : j.at("verdicts"))
    r.verdicts.emplace_back(v.at("name").get<std::string>(), v.at("verdict").get<std::string>());
  r.notes = j.at("notes").get<std::vector<std::string>>();
  for (const auto& jr : j.at("records")) {
    IdentityRecord rec;
    rec.id = jr.at("id").get<std::string>();
    rec.anchor = jr.at("anchor").get<std::string>();
    rec.group = jr.at("group").get<std::string>();
    rec.status = status_from_string(jr.at("status").get<std::string>());
    rec.substantive = jr.at("substantive").get<bool>();
    rec.tolerance = number_from(jr.at("tolerance"));
    rec.max_residual = number_from(jr.at("max_residual"));
    rec.max_abs_residual = number_from(jr.at("max_abs_residual"));
    rec.max_side_magnitude = number_from(jr.at("max_side_magnitude"));
    rec.samples = jr.at("samples").get<std::size_t>();
    rec.worst_point = numbers_from(jr.at("worst_point"));
    rec.worst_probe = jr.at("worst_probe").get<std::string>();
    if (jr.contains("value")) rec.value = number_from(jr.at("value"));
    if (jr.contains("note")) rec.note = jr.at("note").get<std::string>();
    r.records.push_back(std::move(rec));
  }
  return r;
}

std::string format_structured(const CheckReport& r) { return to_json(r).dump(2) + "\n"; }

std::string format_text(const CheckReport& r) {
  std::string out;
  char buf[512];
  auto line = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    out += buf;
  };
  line("suite      %s\n", r.suite.c_str());
  line("target     %s\n", r.target.c_str());
  if (!r.params.empty()) {
    std::string ps;
    for (const auto& [k, v] : r.params) {
      char b[64];
      std::snprintf(b, sizeof b, "%s%s=%.17g", ps.empty() ? "" : ", ", k.c_str(), v);
      ps += b;
    }
    line("params     %s\n", ps.c_str());
  }
  line("seed       %llu\n", static_cast<unsigned long long>(r.seed));
  line("points     %zu\n", r.points);
  line("tolerance  %.3g\n", r.tolerance);
  line("jet order  %d\n", r.jet_order);
  line("duration   %.3f s\n\n", r.duration_seconds);

  line("%-40s %-13s %-11s %-11s %-9s %s\n", "identity", "status", "residual", "|side|max",
       "samples", "worst probe");
  for (const auto& rec : r.records) {
    char resid[32];
    if (rec.value)
      std::snprintf(resid, sizeof resid, "=%.6g", *rec.value);
    else
      std::snprintf(resid, sizeof resid, "%.3e", rec.max_residual);
    line("%-40s %-13s %-11s %-11.3e %-9zu %s\n", rec.id.c_str(), to_string(rec.status).c_str(),
         resid, rec.max_side_magnitude, rec.samples, rec.worst_probe.c_str());
    if (!rec.note.empty()) line("%-40s   note: %s\n", "", rec.note.c_str());
  }
  out += "\n";
  for (const auto& [k, v] : r.verdicts) line("verdict %-20s %s\n", k.c_str(), v.c_str());
  for (const auto& n : r.notes) line("note: %s\n", n.c_str());
  line("overall: %s\n", r.passed() ? "PASS" : "FAIL");
  return out;
}

}  // namespace gkv
