#pragma once

// Numeric tolerances used throughout the library. Eigenvalues in
// (-psd, 0] are clipped to zero; anything more negative fails state
// validation.
namespace qhelper::tol {

inline constexpr double herm = 1e-9;   // Hermiticity deviation
inline constexpr double tr = 1e-9;     // trace / norm deviation
inline constexpr double num = 1e-9;    // generic elementwise comparisons
inline constexpr double psd = 1e-10;   // eigenvalue negativity
inline constexpr double ent = 1e-8;    // entropic identities / inequalities
inline constexpr double rank = 1e-10;  // eigenvalue cutoff for rank decisions
inline constexpr double opt = 1e-3;    // optimizer dominance / endpoint slack

}  // namespace qhelper::tol
