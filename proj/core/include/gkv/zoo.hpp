#pragma once

// Built-in manifolds, structures and immersions.

#include <memory>
#include <string>
#include <vector>

#include "gkv/fstructure.hpp"
#include "gkv/immersion.hpp"

namespace gkv {

// The R^7 generalized Kenmotsu structure with n = 2, s = 3 built from the
// frame e1..e7 and f1, f2 in (z1+z2+z3).  Both constants must be nonzero.
// The first call for a parameter pair runs the structural self-check.
std::shared_ptr<const FStructure> example1(double c1 = 1.0, double c2 = 1.0);

// Slice (u, v, w1, w2, w3) -> (u, v, 0, 0, w1, w2, w3) into example1.
std::shared_ptr<const Immersion> example2(double c1 = 1.0, double c2 = 1.0);

// Complex-quadratic graph x2 + i y2 = a (x1 + i y1)^2 with the z's free:
// invariant, but not totally geodesic when a != 0.
std::shared_ptr<const Immersion> holomorphic_graph(double a = 0.5, double c1 = 1.0,
                                                   double c2 = 1.0);

// Flat chart on R^dim with coordinates x1..xdim (x, y, z for dim 3).
ChartManifold euclidean(std::size_t dim);
// Flat chart with the trivial structure phi = 0, n = 0, s = dim, xi_i = d_i.
std::shared_ptr<const FStructure> euclidean_structure(std::size_t dim);

// Round sphere of radius r in euclidean_structure(3), colatitude/longitude.
std::shared_ptr<const Immersion> sphere(double r = 1.0);

// The identity map of a structure's chart, as an immersion.
std::shared_ptr<const Immersion> identity_immersion(std::shared_ptr<const FStructure> fs);

struct ZooEntry {
  std::string name;
  std::string kind;  // "fstructure" or "immersion"
  std::string summary;
  ParamTable defaults;
};
const std::vector<ZooEntry>& zoo_entries();

// A check target: a structure, optionally with an immersion into it.
struct Target {
  std::string name;
  std::shared_ptr<const FStructure> structure;
  std::shared_ptr<const Immersion> immersion;
};

// Looks up a zoo entry; `params` override its defaults.  Unknown names and
// unknown parameters raise InvalidArgument.
Target zoo_target(const std::string& name, const ParamTable& params = {});

}  // namespace gkv
