#pragma once

// Named check suites as run from the command line.

#include <string>
#include <vector>

#include "gkv/report.hpp"
#include "gkv/subman.hpp"
#include "gkv/zoo.hpp"

namespace gkv {

// axioms, kenmotsu, normality, submanifold, all
const std::vector<std::string>& suite_names();

// Throws InvalidArgument for an unknown suite or a suite that does not
// apply to the target (submanifold on a bare structure).
CheckReport run_suite(const std::string& suite, const Target& target, const RunOptions& opt,
                      const SubmanifoldOptions& sub = {});

// Informational records for the R^7 example: Phi(d_x1, d_y1) at the origin,
// the alternative closed form with an extra factor 2, and the normality
// tensor's max norm.
std::vector<IdentityRecord> example1_errata(const FStructure& fs, const RunOptions& opt);

// Human-readable listing of a target's fields.
std::string describe_target(const Target& target);

}  // namespace gkv
