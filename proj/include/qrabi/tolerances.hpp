#pragma once

namespace qrabi::tol {

// Pinned numerical tolerances shared across modules and recorded in run
// manifests. Values are part of the public contract of this library.
inline constexpr double hermiticity = 1e-14;
inline constexpr double eig_residual_rel = 1e-10;    // times max |H_ij|
inline constexpr double nullspace_rel = 1e-10;       // times sigma_max
inline constexpr double precondition_abs = 1e-10;    // parameter conditions
inline constexpr double dark_residual = 1e-10;       // ||H psi - E psi||
inline constexpr double crossing_energy = 1e-8;      // true-crossing gap
inline constexpr double avoided_gap = 1e-6;          // avoided-crossing floor
inline constexpr double bisection_energy = 1e-10;    // |lambda - E| target
inline constexpr double bisection_interval = 1e-12;  // g-interval fallback
inline constexpr double degeneracy_cluster = 1e-9;   // eigenvalue clustering
inline constexpr double ratio_cross_product = 1e-12; // coupling-column ratio

}  // namespace qrabi::tol
