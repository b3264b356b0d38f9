#pragma once

namespace occulp {

// Central numeric ledger. Everything that compares floating-point values
// pulls its tolerance from here so the thresholds cannot drift apart.
//
//   kStructuralTol  - model well-formedness (stochastic rows, probability
//                     vectors, weight sums)
//   kLpTol          - LP feasibility/optimality and the simplex pivot
//                     tolerance; doubles as the support threshold for
//                     "randomized state" detection
//   kCrossCheckTol  - agreement between two independent computation routes
//                     (occupancy round-trips, decomposition residuals)

inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kLpTol = 1e-9;
inline constexpr double kCrossCheckTol = 1e-7;

}  // namespace occulp
