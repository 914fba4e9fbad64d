#pragma once

namespace kobball::tol {

// Orthonormality, rank and unitarity checks.
inline constexpr double kLinearAlgebra = 1e-10;
// Boundary membership, nearest-point agreement, scale agreement.
inline constexpr double kGeometric = 1e-7;
// artanh arguments are clamped to [0, 1 - kArtanhGuard].
inline constexpr double kArtanhGuard = 1e-15;
// Slack for comparing a computed distance against a strict inequality.
inline constexpr double kInequality = 1e-12;
// Minimal modulus of the pivot coefficient of a W_j normal.
inline constexpr double kDegenerateNormal = 1e-8;

}  // namespace kobball::tol
