#include "gkv/suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "gkv/error.hpp"

namespace gkv {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<CheckReport> structure_parts(const std::string& suite, const FStructure& fs,
                                         const RunOptions& opt) {
  std::vector<CheckReport> parts;
  if (suite == "axioms" || suite == "all") parts.push_back(check_axioms(fs, opt));
  if (suite == "kenmotsu" || suite == "all") {
    parts.push_back(check_gak(fs, opt));
    parts.push_back(check_kenmotsu_nabla_phi(fs, opt));
    parts.push_back(check_xi_and_curvature(fs, opt));
  }
  if (suite == "normality" || suite == "all") parts.push_back(check_normality(fs, opt));
  if (suite == "all") parts.push_back(check_curvature_engine(fs.base(), opt));
  if ((suite == "kenmotsu" || suite == "all") && fs.name() == "example1") {
    CheckReport errata = start_report("errata", fs.name(), fs.base().chart().params, opt);
    errata.records = example1_errata(fs, opt);
    parts.push_back(std::move(errata));
  }
  return parts;
}

std::vector<CheckReport> submanifold_parts(const Immersion& imm, const RunOptions& opt,
                                           const SubmanifoldOptions& sub) {
  std::vector<CheckReport> parts;
  parts.push_back(check_invariant(imm, opt, sub));
  parts.push_back(check_induced(imm, opt, sub));
  if (!parts.front().passed()) {
    parts.back().notes.push_back(
        "immersion is not invariant; the invariant-submanifold identities (section3, section4) "
        "were not evaluated");
    return parts;
  }
  parts.push_back(check_section3(imm, opt, sub));
  parts.push_back(check_section4(imm, opt, sub));
  if (imm.name() == "example2")
    parts.back().notes.push_back(
        "example2 is the coordinate slice (u, v, w1, w2, w3) -> (u, v, 0, 0, w1, w2, w3); its "
        "tangent distribution is span{d_x1, d_y1, d_z1, d_z2, d_z3}");
  return parts;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"axioms", "kenmotsu", "normality",
                                                 "submanifold", "all"};
  return names;
}

CheckReport run_suite(const std::string& suite, const Target& target, const RunOptions& opt,
                      const SubmanifoldOptions& sub) {
  bool known = false;
  for (const auto& n : suite_names()) known |= n == suite;
  if (!known) throw InvalidArgument("unknown suite '" + suite + "'");
  if (!target.structure) throw InvalidArgument("target '" + target.name + "' is empty");
  if (suite == "submanifold" && !target.immersion)
    throw InvalidArgument("suite 'submanifold' needs an immersion target; '" + target.name +
                          "' is a structure");

  std::vector<CheckReport> parts;
  if (suite != "submanifold") parts = structure_parts(suite, *target.structure, opt);
  if (target.immersion && (suite == "submanifold" || suite == "all")) {
    auto sp = submanifold_parts(*target.immersion, opt, sub);
    parts.insert(parts.end(), sp.begin(), sp.end());
  }
  CheckReport out = combine(suite, parts);
  out.target = target.name;
  out.params = target.structure->base().chart().params;
  if (target.immersion)
    for (const auto& [k, v] : target.immersion->source().params) out.params[k] = v;
  out.seed = opt.seed;
  out.points = opt.points;
  out.tolerance = opt.tolerance;
  out.jet_order = opt.jet_order;
  return out;
}

std::vector<IdentityRecord> example1_errata(const FStructure& fs, const RunOptions& opt) {
  std::vector<IdentityRecord> out;
  const std::size_t dim = fs.dim();
  const Vec origin(dim, 0.0);
  const StructureJets sj(fs, origin, 1);
  const double phi01 = sj.fundamental_form()(0, 1).value();
  out.push_back(value_record("errata.Phi_x1y1_origin", "Phi(d_x1, d_y1) = g(d_x1, phi d_y1) at 0",
                             "errata", phi01, origin,
                             "equals -1/(f1^2+f2^2) = -e^{2(z1+z2+z3)}/(c1^2+c2^2)"));

  const auto& params = fs.base().chart().params;
  const double c1 = params.count("c1") ? params.at("c1") : 1.0;
  const double c2 = params.count("c2") ? params.at("c2") : 1.0;
  const double alt = -2.0 / (c1 * c1 + c2 * c2);
  char note[160];
  std::snprintf(note, sizeof note,
                "closed form -2 e^{2(z1+z2+z3)}/(c1^2+c2^2) at 0; differs from the computed "
                "value by %s",
                fmt(alt - phi01).c_str());
  out.push_back(value_record("errata.Phi_x1y1_origin_alt",
                             "-2 e^{2(z1+z2+z3)}/(c1^2+c2^2) at 0 (factor-2 variant)", "errata", alt,
                             origin, note));

  RunOptions nopt = opt;
  const CheckReport normality = check_normality(fs, nopt);
  const IdentityRecord* max = normality.find("normality.max_norm");
  out.push_back(value_record("errata.normality_max_norm",
                             "max |[phi,phi] + 2 sum_i d eta^i (x) xi_i| over frame pairs",
                             "errata", max ? *max->value : std::nan(""),
                             max ? max->worst_point : Vec{},
                             "the structure is normal when this vanishes"));
  return out;
}

std::string describe_target(const Target& target) {
  std::string out;
  auto chart_lines = [&](const Chart& c, const char* label) {
    out += std::string(label) + " chart: " + c.name + "\n  coords:";
    for (const auto& x : c.coords) out += " " + x;
    out += "\n";
    if (!c.params.empty()) {
      out += "  params:";
      for (const auto& [k, v] : c.params) out += " " + k + "=" + fmt(v);
      out += "\n";
    }
    out += "  sample box:";
    for (const auto& b : c.sample_box) out += " [" + fmt(b.lo) + ", " + fmt(b.hi) + "]";
    out += "\n";
  };
  out += "target: " + target.name + "\n";
  if (target.immersion) {
    const Immersion& imm = *target.immersion;
    out += "kind: immersion (dim " + std::to_string(imm.dim()) + " into " +
           std::to_string(imm.ambient_dim()) + ")\n";
    chart_lines(imm.source(), "source");
    out += "  map:\n";
    const auto& tc = imm.target().base().chart().coords;
    for (std::size_t i = 0; i < imm.map().size(); ++i)
      out += "    " + tc[i] + " = " + imm.map()[i].to_string() + "\n";
  } else {
    out += "kind: fstructure\n";
  }
  const FStructure& fs = *target.structure;
  const Chart& c = fs.base().chart();
  chart_lines(c, target.immersion ? "target" : "structure");
  out += "  dim " + std::to_string(fs.dim()) + ", n " + std::to_string(fs.n()) + ", s " +
         std::to_string(fs.s()) + ", normality " +
         (fs.normality_required() ? "required" : "informational") + "\n";
  out += "  metric (nonzero entries):\n";
  for (std::size_t i = 0; i < fs.dim(); ++i)
    for (std::size_t j = i; j < fs.dim(); ++j) {
      const Expr& e = fs.base().metric(i, j);
      if (!e.is_number(0.0))
        out += "    g(" + c.coords[i] + ", " + c.coords[j] + ") = " + e.to_string() + "\n";
    }
  out += "  phi (nonzero entries, component k of phi(d_j)):\n";
  for (std::size_t k = 0; k < fs.dim(); ++k)
    for (std::size_t j = 0; j < fs.dim(); ++j) {
      const Expr& e = fs.phi().at(k, j);
      if (!e.is_number(0.0))
        out += "    phi[" + c.coords[k] + "][" + c.coords[j] + "] = " + e.to_string() + "\n";
    }
  for (int i = 0; i < fs.s(); ++i) {
    out += "  xi" + std::to_string(i + 1) + " = (";
    for (std::size_t k = 0; k < fs.dim(); ++k)
      out += (k ? ", " : "") + fs.xi(i).components[k].to_string();
    out += ")\n  eta" + std::to_string(i + 1) + " = (";
    for (std::size_t k = 0; k < fs.dim(); ++k)
      out += (k ? ", " : "") + fs.eta(i).components[k].to_string();
    out += ")\n";
  }
  for (const auto& [name, f] : fs.frame()) {
    out += "  " + name + " = (";
    for (std::size_t k = 0; k < fs.dim(); ++k)
      out += (k ? ", " : "") + f.components[k].to_string();
    out += ")\n";
  }
  return out;
}

}  // namespace gkv
