#include "gkv/specfile.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "gkv/error.hpp"

namespace gkv {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SpecFileError(where + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing member '") + key + "'");
  return *it;
}

Expr expr_at(const json& j, const std::string& where) {
  try {
    if (j.is_number()) return Expr::number(j.get<double>());
    if (j.is_string()) return parse(j.get<std::string>());
  } catch (const Error& e) {
    fail(where, e.what());
  }
  fail(where, "expected a number or an expression string");
}

std::vector<Expr> expr_list(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n)
    fail(where, "expected an array of " + std::to_string(n) + " entries");
  std::vector<Expr> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(expr_at(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<Expr>> expr_matrix(const json& j, std::size_t n,
                                           const std::string& where) {
  if (!j.is_array() || j.size() != n) fail(where, "expected " + std::to_string(n) + " rows");
  std::vector<std::vector<Expr>> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(expr_list(j[i], n, where + "[" + std::to_string(i) + "]"));
  return out;
}

ParamTable apply_overrides(ParamTable declared, const ParamTable& overrides,
                           std::set<std::string>* used) {
  for (const auto& [k, v] : overrides)
    if (declared.count(k)) {
      declared[k] = v;
      if (used) used->insert(k);
    }
  return declared;
}

void check_all_used(const ParamTable& overrides, const std::set<std::string>& used,
                    const std::string& where) {
  for (const auto& [k, v] : overrides)
    if (!used.count(k)) fail(where, "no parameter named '" + k + "'");
}

// Chart block shared by structures and immersion sources.
Chart read_chart(const json& doc, const std::string& name, const ParamTable& overrides,
                 std::set<std::string>* used, const std::string& where) {
  Chart c;
  c.name = name;
  const json& coords = member(doc, "coords", where);
  if (!coords.is_array()) fail(where + ".coords", "expected an array of names");
  for (const auto& x : coords) {
    if (!x.is_string()) fail(where + ".coords", "expected an array of names");
    c.coords.push_back(x.get<std::string>());
  }
  if (doc.contains("params")) {
    const json& ps = doc.at("params");
    if (!ps.is_object()) fail(where + ".params", "expected an object of numbers");
    for (const auto& [k, v] : ps.items()) {
      if (!v.is_number()) fail(where + ".params." + k, "expected a number");
      c.params[k] = v.get<double>();
    }
  }
  c.params = apply_overrides(c.params, overrides, used);
  const json& box = member(doc, "sample_box", where);
  if (!box.is_array() || box.size() != c.coords.size())
    fail(where + ".sample_box", "expected one [lo, hi] pair per coordinate");
  for (std::size_t i = 0; i < box.size(); ++i) {
    const json& b = box[i];
    if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
      fail(where + ".sample_box[" + std::to_string(i) + "]", "expected [lo, hi]");
    c.sample_box.push_back({b[0].get<double>(), b[1].get<double>()});
  }
  try {
    c.validate();
  } catch (const Error& e) {
    fail(where, e.what());
  }
  return c;
}

std::string name_of(const json& doc, const std::string& fallback) {
  if (doc.is_object() && doc.contains("name") && doc.at("name").is_string())
    return doc.at("name").get<std::string>();
  return fallback;
}

int int_member(const json& doc, const char* key, const std::string& where) {
  const json& v = member(doc, key, where);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

std::shared_ptr<const FStructure> structure_impl(const json& doc, const ParamTable& overrides,
                                                 std::set<std::string>* used,
                                                 const std::string& where) {
  const std::string name = name_of(doc, "manifold");
  const Chart chart = read_chart(doc, name, overrides, used, where);
  const std::size_t dim = chart.dim();
  if (doc.contains("dim") && (!doc.at("dim").is_number_integer() ||
                              doc.at("dim").get<std::size_t>() != dim))
    fail(where + ".dim", "does not match the number of coordinates");
  const int n = int_member(doc, "n", where);
  const int s = int_member(doc, "s", where);

  const json& jm = member(doc, "metric", where);
  std::vector<std::vector<Expr>> metric;
  if (jm.is_array() && !jm.empty() && !jm[0].is_array()) {
    const auto diag = expr_list(jm, dim, where + ".metric");
    metric.assign(dim, std::vector<Expr>(dim, Expr::number(0.0)));
    for (std::size_t i = 0; i < dim; ++i) metric[i][i] = diag[i];
  } else {
    metric = expr_matrix(jm, dim, where + ".metric");
  }

  TensorField11 phi(dim);
  const auto rows = expr_matrix(member(doc, "phi", where), dim, where + ".phi");
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t j = 0; j < dim; ++j) phi.components[k * dim + j] = rows[k][j];

  std::vector<VectorFieldC> xi;
  std::vector<CovectorFieldC> eta;
  const json& jx = member(doc, "xi", where);
  const json& je = member(doc, "eta", where);
  if (!jx.is_array() || !je.is_array()) fail(where, "xi and eta must be arrays of fields");
  for (std::size_t i = 0; i < jx.size(); ++i)
    xi.push_back({expr_list(jx[i], dim, where + ".xi[" + std::to_string(i) + "]")});
  for (std::size_t i = 0; i < je.size(); ++i)
    eta.push_back({expr_list(je[i], dim, where + ".eta[" + std::to_string(i) + "]")});

  std::shared_ptr<FStructure> fs;
  try {
    fs = std::make_shared<FStructure>(ChartManifold(chart, metric), n, s, phi, xi, eta);
    if (doc.contains("frame")) {
      const json& jf = doc.at("frame");
      if (!jf.is_object()) fail(where + ".frame", "expected an object of named fields");
      std::vector<std::pair<std::string, VectorFieldC>> frame;
      for (const auto& [k, v] : jf.items())
        frame.emplace_back(k, VectorFieldC{expr_list(v, dim, where + ".frame." + k)});
      fs->set_frame(std::move(frame));
    }
  } catch (const SpecFileError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
  if (doc.contains("normality")) {
    const json& v = doc.at("normality");
    if (v == "required")
      fs->set_normality_required(true);
    else if (v == "informational")
      fs->set_normality_required(false);
    else
      fail(where + ".normality", "expected \"required\" or \"informational\"");
  }
  return fs;
}

std::shared_ptr<const Immersion> immersion_impl(const json& doc, const ParamTable& overrides,
                                                std::set<std::string>* used,
                                                const std::string& where) {
  const std::string name = name_of(doc, "immersion");
  const Chart source = read_chart(member(doc, "source", where), name, overrides, used,
                                  where + ".source");
  const json& jt = member(doc, "target", where);
  std::shared_ptr<const FStructure> target;
  if (jt.is_string()) {
    ParamTable tp;
    if (doc.contains("target_params")) {
      for (const auto& [k, v] : doc.at("target_params").items()) {
        if (!v.is_number()) fail(where + ".target_params." + k, "expected a number");
        tp[k] = v.get<double>();
      }
    }
    const std::string tname = jt.get<std::string>();
    ParamTable defaults;
    for (const auto& e : zoo_entries())
      if (e.name == tname) defaults = e.defaults;
    for (const auto& [k, v] : overrides)
      if (defaults.count(k) && !source.params.count(k)) {
        tp[k] = v;
        if (used) used->insert(k);
      }
    try {
      const Target t = zoo_target(tname, tp);
      if (t.immersion) fail(where + ".target", "'" + tname + "' is not a structure");
      target = t.structure;
    } catch (const SpecFileError&) {
      throw;
    } catch (const Error& e) {
      fail(where + ".target", e.what());
    }
  } else {
    target = structure_impl(jt, overrides, used, where + ".target");
  }
  const auto map = expr_list(member(doc, "map", where), target->dim(), where + ".map");
  try {
    return std::make_shared<Immersion>(name, source, target, map);
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

}  // namespace

std::shared_ptr<const FStructure> structure_from_json(const json& doc, const ParamTable& params) {
  std::set<std::string> used;
  auto fs = structure_impl(doc, params, &used, "structure");
  check_all_used(params, used, "structure");
  return fs;
}

std::shared_ptr<const Immersion> immersion_from_json(const json& doc, const ParamTable& params) {
  std::set<std::string> used;
  auto imm = immersion_impl(doc, params, &used, "immersion");
  check_all_used(params, used, "immersion");
  return imm;
}

Target target_from_json(const json& doc, const ParamTable& params) {
  if (!doc.is_object()) throw SpecFileError("spec: expected a JSON object");
  Target t;
  if (doc.contains("map")) {
    t.immersion = immersion_from_json(doc, params);
    t.structure = t.immersion->target_ptr();
    t.name = t.immersion->name();
  } else {
    t.structure = structure_from_json(doc, params);
    t.name = t.structure->name();
  }
  return t;
}

Target load_target_file(const std::string& path, const ParamTable& params) {
  std::ifstream in(path);
  if (!in) throw SpecFileError("cannot read spec file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw SpecFileError("'" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return target_from_json(doc, params);
  } catch (const SpecFileError& e) {
    throw SpecFileError("'" + path + "': " + e.what());
  }
}

Target resolve_target(const std::string& name_or_path, const ParamTable& params) {
  for (const auto& e : zoo_entries())
    if (e.name == name_or_path) return zoo_target(name_or_path, params);
  std::error_code ec;
  if (std::filesystem::exists(name_or_path, ec)) return load_target_file(name_or_path, params);
  throw InvalidArgument("unknown target '" + name_or_path + "'");
}

}  // namespace gkv
