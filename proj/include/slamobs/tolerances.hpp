#pragma once

// Central tolerance table. Every numeric threshold used by the library and its
// self checks lives here so runs and tests agree on one set of constants.

namespace slamobs::tol {

// Structural validation
inline constexpr double orthonormality      = 1e-9;   // ||R^T R - I||_F bound on inputs and integrator snapshots
inline constexpr double group_identity      = 1e-12;  // ||X X^{-1} - I||_F
inline constexpr double algebra_closure     = 1e-12;  // skew/zero-row residues after adjoint, projection
inline constexpr double unit_axis           = 1e-9;   // |  ||axis|| - 1  | for rotation constructors
inline constexpr double unit_bearing        = 1e-12;  // bearing renormalization check

// Numerical switches
inline constexpr double jacobian_taylor     = 1e-6;   // ||omega||*dt below which the exp uses series coefficients
inline constexpr double reorthonormalize_at = 1e-12;  // drift level that triggers re-projection of R; must sit
                                                      // below `orthonormality` or the constructor rejects the
                                                      // drifted matrix before the repair can run

// Observer and cost checks
inline constexpr double cost_equivalence    = 1e-10;  // measurement-form vs trace-form cost
inline constexpr double gradient_check      = 1e-5;   // relative error vs central finite differences
inline constexpr double flow_step_slack     = 1e-8;   // allowed per-step cost increase under discretization
inline constexpr double jump_decrease_slack = 1e-9;   // jump must improve cost by at least delta minus this

}  // namespace slamobs::tol
