// gkv: run identity checks on built-in or file-defined targets.
//
// Exit status: 0 all required checks pass, 1 a check failed, 2 usage or
// input error (unknown target, unreadable file, bad flag values,
// insufficient jet order).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gkv/error.hpp"
#include "gkv/expr.hpp"
#include "gkv/specfile.hpp"
#include "gkv/suites.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

gkv::ParamTable parse_assignments(const std::vector<std::string>& items, const char* flag) {
  gkv::ParamTable out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw gkv::InvalidArgument(std::string(flag) + " expects name=value, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size())
      throw gkv::InvalidArgument(std::string(flag) + " value for '" + name + "' is not a number");
    out[name] = value;
  }
  return out;
}

struct CheckArgs {
  std::string suite;
  std::string target;
  std::size_t points = 100;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  int jet_order = 3;
  std::string report_path;
  std::string format = "text";
  std::vector<std::string> params;
  unsigned threads = 0;
  std::optional<std::uint64_t> mix_normals;
};

int run_check(const CheckArgs& a) {
  gkv::RunOptions opt;
  opt.points = a.points;
  opt.seed = a.seed;
  opt.tolerance = a.tol;
  opt.jet_order = a.jet_order;
  opt.threads = a.threads;
  gkv::SubmanifoldOptions sub;
  sub.normal_mixing_seed = a.mix_normals;

  const gkv::Target target = gkv::resolve_target(a.target, parse_assignments(a.params, "--param"));
  const gkv::CheckReport report = gkv::run_suite(a.suite, target, opt, sub);

  if (a.format == "structured")
    std::cout << gkv::format_structured(report);
  else
    std::cout << gkv::format_text(report);
  if (!a.report_path.empty()) {
    std::ofstream out(a.report_path);
    if (!out) throw gkv::InvalidArgument("cannot write report to '" + a.report_path + "'");
    out << gkv::format_structured(report);
  }
  return report.passed() ? kExitPass : kExitFail;
}

int run_show(const std::string& name, const std::vector<std::string>& params) {
  if (name.empty()) {
    for (const auto& e : gkv::zoo_entries()) {
      std::cout << e.name << " (" << e.kind << "): " << e.summary;
      for (const auto& [k, v] : e.defaults) std::cout << " [" << k << "=" << v << "]";
      std::cout << "\n";
    }
    return kExitPass;
  }
  std::cout << gkv::describe_target(gkv::resolve_target(name, parse_assignments(params, "--param")));
  return kExitPass;
}

int run_eval(const std::string& text, const std::vector<std::string>& at,
             const std::vector<std::string>& params, int order) {
  std::vector<std::string> names;
  std::vector<double> point;
  for (const auto& item : at) {
    const auto one = parse_assignments({item}, "--at");
    names.push_back(one.begin()->first);
    point.push_back(one.begin()->second);
  }
  const gkv::Expr e = gkv::resolve(gkv::parse(text), names, parse_assignments(params, "--param"));
  char buf[128];
  std::snprintf(buf, sizeof buf, "value %.17g\n", gkv::evaluate(e, point));
  std::cout << "expr  " << e.to_string() << "\n" << buf;
  if (names.empty() || order < 1) return kExitPass;
  const auto env = gkv::Jet::seed_all(point, order);
  const gkv::Jet j = gkv::evaluate(e, env);
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::snprintf(buf, sizeof buf, "d/d%s %.17g\n", names[i].c_str(), j.d(static_cast<int>(i)));
    std::cout << buf;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gkv: numerical checks for f-structures and their invariant submanifolds"};
  app.require_subcommand(1);

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "run a check suite");
  check->add_option("suite", ca.suite, "axioms | kenmotsu | normality | submanifold | all")
      ->required()
      ->check(CLI::IsMember(gkv::suite_names()));
  check->add_option("--target", ca.target, "zoo name or spec file path")->required();
  check->add_option("--points", ca.points, "sample points")->check(CLI::Range(1, 1000000));
  check->add_option("--seed", ca.seed, "sampling seed");
  check->add_option("--tol", ca.tol, "scaled residual tolerance")->check(CLI::PositiveNumber);
  check->add_option("--jet-order", ca.jet_order, "jet truncation order")
      ->check(CLI::IsMember({2, 3, 4}));
  check->add_option("--report", ca.report_path, "also write the structured report here");
  check->add_option("--format", ca.format, "stdout format")
      ->check(CLI::IsMember({"text", "structured"}));
  check->add_option("--param", ca.params, "target parameter override name=value");
  check->add_option("--threads", ca.threads, "worker threads (0 = hardware)");
  check->add_option("--mix-normals", ca.mix_normals,
                    "re-mix the normal frame with rotations seeded by this value");

  std::string show_target;
  std::vector<std::string> show_params;
  auto* show = app.add_subcommand("show", "print a target's fields (no name: list the zoo)");
  show->add_option("target", show_target, "zoo name or spec file path");
  show->add_option("--param", show_params, "target parameter override name=value");

  std::string eval_text;
  std::vector<std::string> eval_at, eval_params;
  int eval_order = 1;
  auto* eval = app.add_subcommand("eval", "evaluate an expression at a point");
  eval->add_option("expr", eval_text, "expression")->required();
  eval->add_option("--at", eval_at, "coordinate value name=value, in variable order");
  eval->add_option("--param", eval_params, "parameter name=value");
  eval->add_option("--order", eval_order, "also print first derivatives when >= 1")
      ->check(CLI::Range(0, 4));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*check) return run_check(ca);
    if (*show) return run_show(show_target, show_params);
    if (*eval) return run_eval(eval_text, eval_at, eval_params, eval_order);
  } catch (const gkv::SyntaxError& e) {
    std::cerr << "gkv: syntax error at offset " << e.offset() << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const gkv::InsufficientOrderError& e) {
    std::cerr << "gkv: insufficient jet order: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gkv::Error& e) {
    std::cerr << "gkv: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
