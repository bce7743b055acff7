#include "gkv/fstructure.hpp"

#include "gkv/error.hpp"
#include "gkv/sampling.hpp"

namespace gkv {

FStructure::FStructure(ChartManifold base, int n, int s, TensorField11 phi,
                       std::vector<VectorFieldC> xi, std::vector<CovectorFieldC> eta)
    : base_(std::move(base)), n_(n), s_(s), phi_(std::move(phi)), xi_(std::move(xi)),
      eta_(std::move(eta)) {
  const std::size_t dim = base_.dim();
  if (n < 0 || s < 0 || static_cast<std::size_t>(2 * n + s) != dim)
    throw InvalidArgument("structure on '" + name() + "' needs dim = 2n + s (dim " +
                          std::to_string(dim) + ", n " + std::to_string(n) + ", s " +
                          std::to_string(s) + ")");
  if (phi_.dim != dim || phi_.components.size() != dim * dim)
    throw InvalidArgument("phi of '" + name() + "' must be " + std::to_string(dim) + " x " +
                          std::to_string(dim));
  if (xi_.size() != static_cast<std::size_t>(s) || eta_.size() != static_cast<std::size_t>(s))
    throw InvalidArgument("structure on '" + name() + "' needs exactly s = " +
                          std::to_string(s) + " xi fields and eta forms");
  const Chart& c = base_.chart();
  for (auto& e : phi_.components) e = c.bind(e);
  for (auto& f : xi_) {
    if (f.components.size() != dim)
      throw InvalidArgument("xi field of '" + name() + "' has the wrong component count");
    for (auto& e : f.components) e = c.bind(e);
  }
  for (auto& f : eta_) {
    if (f.components.size() != dim)
      throw InvalidArgument("eta form of '" + name() + "' has the wrong component count");
    for (auto& e : f.components) e = c.bind(e);
  }
}

void FStructure::set_frame(std::vector<std::pair<std::string, VectorFieldC>> frame) {
  for (auto& [label, f] : frame) {
    if (f.components.size() != dim())
      throw InvalidArgument("frame field '" + label + "' has the wrong component count");
    for (auto& e : f.components) e = base_.chart().bind(e);
  }
  frame_ = std::move(frame);
}

StructureJets::StructureJets(const FStructure& fs, std::span<const double> p, int order)
    : chart(fs.base(), p, order) {
  const auto coords = chart.coords();
  phi = evaluate_tensor(fs.phi(), coords);
  for (int i = 0; i < fs.s(); ++i) {
    xi.push_back(evaluate_field(fs.xi(i).components, coords));
    eta.push_back(evaluate_field(fs.eta(i).components, coords));
  }
  g = values(chart.metric());
  g_inv = values(chart.metric_inverse());
  phi_v = values(phi);
  for (const auto& f : xi) xi_v.push_back(values(f));
  for (const auto& f : eta) eta_v.push_back(values(f));
}

Matrix<Jet> StructureJets::fundamental_form() const {
  const std::size_t n = dim();
  const auto& gj = chart.metric();
  Matrix<Jet> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Jet s;
      for (std::size_t k = 0; k < n; ++k) {
        const Jet& a = gj(i, k);
        const Jet& b = phi(k, j);
        if ((a.is_constant() && a.value() == 0.0) || (b.is_constant() && b.value() == 0.0))
          continue;
        s += a * b;
      }
      out(i, j) = std::move(s);
    }
  return out;
}

std::vector<Probe> probe_set(const std::vector<std::string>& coord_names,
                             const std::vector<Probe>& extra, std::size_t random,
                             std::uint64_t seed) {
  const std::size_t n = coord_names.size();
  std::vector<Probe> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({"d_" + coord_names[i], unit_vector(n, i)});
  for (const auto& e : extra) out.push_back(e);
  Rng rng(seed);
  for (std::size_t r = 0; r < random; ++r)
    out.push_back({"r" + std::to_string(r + 1), rng.direction(n)});
  return out;
}

CheckReport combine(std::string suite, const std::vector<CheckReport>& parts) {
  CheckReport out;
  out.suite = std::move(suite);
  if (!parts.empty()) {
    const auto& first = parts.front();
    out.target = first.target;
    out.params = first.params;
    out.seed = first.seed;
    out.points = first.points;
    out.tolerance = first.tolerance;
    out.jet_order = first.jet_order;
  }
  for (const auto& p : parts) {
    out.records.insert(out.records.end(), p.records.begin(), p.records.end());
    out.verdicts.insert(out.verdicts.end(), p.verdicts.begin(), p.verdicts.end());
    out.notes.insert(out.notes.end(), p.notes.begin(), p.notes.end());
    out.duration_seconds += p.duration_seconds;
  }
  return out;
}

}  // namespace gkv
