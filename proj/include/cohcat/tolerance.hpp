#pragma once

namespace cohcat::tol {

// Global tolerance ladder. Each rung leaves one order of magnitude of
// headroom over the one below it.

/// Elementwise Hermiticity slack.
inline constexpr double symmetry = 1e-12;
/// Eigenvalues above this (in magnitude) are treated as nonzero.
inline constexpr double eigen_clamp = 1e-12;
/// Allowed negative eigenvalues / trace deviation of a state.
inline constexpr double psd = 1e-10;
/// Equality assertions on derived quantities.
inline constexpr double equality = 1e-9;
/// Slack granted to values produced by the formation optimizer.
inline constexpr double optimizer = 1e-6;

}  // namespace cohcat::tol
