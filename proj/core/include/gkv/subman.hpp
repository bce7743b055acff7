#pragma once

// Check suites for immersions into f-structured charts.

#include <cstdint>
#include <optional>
#include <string>

#include "gkv/immersion.hpp"
#include "gkv/report.hpp"

namespace gkv {

struct SubmanifoldOptions {
  // Re-mixes the normal frame at every point with a seeded rotation.
  std::optional<std::uint64_t> normal_mixing_seed;
};

inline constexpr const char* kTotallyGeodesicConsistent = "TOTALLY-GEODESIC-CONSISTENT";
inline constexpr const char* kTheoremViolationSuspect = "THEOREM-VIOLATION-SUSPECT";

// Both maxima below tol, or both at or above it, is consistent with
// "semiparallel iff totally geodesic"; anything else is suspect.
std::string semiparallel_verdict(double h_max, double operator_max, double tol);

// Tangency of every xi_i and phi-stability of the tangent space.
CheckReport check_invariant(const Immersion& imm, const RunOptions& opt,
                            const SubmanifoldOptions& sub = {});
// Frame, second fundamental form and Gauss equation consistency.
CheckReport check_induced(const Immersion& imm, const RunOptions& opt,
                          const SubmanifoldOptions& sub = {});
// Identities that hold on invariant submanifolds of generalized Kenmotsu
// manifolds.  Throws PreconditionError when the immersion is not invariant.
CheckReport check_section3(const Immersion& imm, const RunOptions& opt,
                           const SubmanifoldOptions& sub = {});
// Semiparallel and 2-semiparallel operators, proof steps and verdicts.
CheckReport check_section4(const Immersion& imm, const RunOptions& opt,
                           const SubmanifoldOptions& sub = {});

}  // namespace gkv
