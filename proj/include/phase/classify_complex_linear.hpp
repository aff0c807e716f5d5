#pragma once

// Conjugacy of linear actions on C^n at all four regularity levels.

#include "phase/core.hpp"

#include <span>

namespace phase {

// n = 1 topological: q_r = p_r |p_r|^alpha or q_r = conj(p_r) |p_r|^alpha with
// a common alpha, Re(alpha) > -1.
Verdict classify_scalar_top(std::span<const cplx> ps, std::span<const cplx> qs,
                            const ToleranceConfig& tol);

// n > 1 abelian topological: simultaneous diagonalization plus a coordinate
// permutation and per-coordinate exponents; premises are the simplicity of the
// principal-log eigenvalue collections.
Verdict classify_diag_top(const GeneratorSet& ps, const GeneratorSet& qs,
                          const ToleranceConfig& tol);

// Smooth / R-holomorphic level: invertible real-linear intertwiner
// w -> A w + B conj(w).
Verdict classify_rlinear(const GeneratorSet& ps, const GeneratorSet& qs, const ToleranceConfig& tol,
                         Category category = Category::Smooth);

// Holomorphic level: invertible linear intertwiner.
Verdict classify_holo(const GeneratorSet& ps, const GeneratorSet& qs, const ToleranceConfig& tol);

// Non-abelian topological requests ride on the rigid criterion; absence of a
// rigid witness is Inconclusive, never NotEquivalent.
Verdict classify_nonabelian_top(const GeneratorSet& ps, const GeneratorSet& qs,
                                const ToleranceConfig& tol);

Verdict classify_complex_linear(const GeneratorSet& ps, const GeneratorSet& qs, Category category,
                                const ToleranceConfig& tol);

} // namespace phase
