#pragma once

// Metric f-structures (phi, xi_i, eta^i, g) on a chart and their checks.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gkv/chart.hpp"
#include "gkv/forms.hpp"
#include "gkv/report.hpp"

namespace gkv {

class FStructure {
 public:
  // phi.at(k, j) is the k-th coordinate component of phi(d_j).  All
  // expressions are bound against the base chart here.
  FStructure(ChartManifold base, int n, int s, TensorField11 phi, std::vector<VectorFieldC> xi,
             std::vector<CovectorFieldC> eta);

  const ChartManifold& base() const noexcept { return base_; }
  const std::string& name() const noexcept { return base_.name(); }
  std::size_t dim() const noexcept { return base_.dim(); }
  int n() const noexcept { return n_; }
  int s() const noexcept { return s_; }
  const TensorField11& phi() const noexcept { return phi_; }
  const VectorFieldC& xi(int i) const { return xi_.at(i); }
  const CovectorFieldC& eta(int i) const { return eta_.at(i); }

  // Whether the normality check counts toward pass/fail for this structure.
  bool normality_required() const noexcept { return normality_required_; }
  void set_normality_required(bool v) noexcept { normality_required_ = v; }

  // Optional named frame the structure was defined in (bound on set).
  const std::vector<std::pair<std::string, VectorFieldC>>& frame() const noexcept {
    return frame_;
  }
  void set_frame(std::vector<std::pair<std::string, VectorFieldC>> frame);

 private:
  ChartManifold base_;
  int n_, s_;
  TensorField11 phi_;
  std::vector<VectorFieldC> xi_;
  std::vector<CovectorFieldC> eta_;
  bool normality_required_ = true;
  std::vector<std::pair<std::string, VectorFieldC>> frame_;
};

// Every structure field as jets around one point, plus plain values.
struct StructureJets {
  StructureJets(const FStructure& fs, std::span<const double> p, int order);

  ChartJets chart;
  Matrix<Jet> phi;
  std::vector<std::vector<Jet>> xi;
  std::vector<std::vector<Jet>> eta;

  // Values at the base point.
  Matrix<double> g, g_inv, phi_v;
  std::vector<Vec> xi_v, eta_v;

  std::size_t dim() const noexcept { return g.rows(); }
  int s() const noexcept { return static_cast<int>(xi.size()); }
  Vec phi_of(std::span<const double> x) const { return act(phi_v, x); }
  double eta_of(int i, std::span<const double> x) const { return dot(eta_v[i], x); }
  double inner(std::span<const double> x, std::span<const double> y) const {
    return metric_dot<double>(g, x, y);
  }
  // Phi_{ij} = g(d_i, phi d_j) as jets.
  Matrix<Jet> fundamental_form() const;
};

// Value of eta^1 ^ ... ^ eta^s ^ Phi^n on the coordinate basis.
double structure_volume(const StructureJets& sj, int n);

// A named probe vector.
struct Probe {
  std::string name;
  Vec v;
};

// Coordinate basis, the given extra vectors, and `random` seeded directions.
std::vector<Probe> probe_set(const std::vector<std::string>& coord_names,
                             const std::vector<Probe>& extra, std::size_t random,
                             std::uint64_t seed);

CheckReport check_axioms(const FStructure& fs, const RunOptions& opt);
CheckReport check_gak(const FStructure& fs, const RunOptions& opt);
CheckReport check_normality(const FStructure& fs, const RunOptions& opt);
CheckReport check_kenmotsu_nabla_phi(const FStructure& fs, const RunOptions& opt);
CheckReport check_xi_and_curvature(const FStructure& fs, const RunOptions& opt);
// Levi-Civita sanity on any chart: symmetry, Bianchi, metric compatibility.
CheckReport check_curvature_engine(const ChartManifold& m, const RunOptions& opt);

// Concatenates records (and notes) of several reports under one suite name.
CheckReport combine(std::string suite, const std::vector<CheckReport>& parts);

}  // namespace gkv
