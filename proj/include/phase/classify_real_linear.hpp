#pragma once

// Conjugacy of linear actions on R^n.

#include "phase/core.hpp"

#include <span>

namespace phase {

// n = 1 topological: q_r = p_r |p_r|^alpha with a common real alpha > -1;
// signs must match and unit-modulus generators must agree exactly.
Verdict classify_real_scalar_top(std::span<const double> ps, std::span<const double> qs,
                                 const ToleranceConfig& tol);

// Single strongly hyperbolic generator: stable dimensions equal and both
// det-sign products positive; the witness chains the canonical radial/spiral
// block homeomorphisms.
Verdict classify_single_hyperbolic(const RMat& p, const RMat& q, const ToleranceConfig& tol);

// Abelian strongly hyperbolic families: common real block structure, then
// generator 1 is reduced per block to the canonical contraction/expansion and
// the remaining generators must match exactly under block permutations.
Verdict classify_real_abelian_top(const GeneratorSet& ps, const GeneratorSet& qs,
                                  const ToleranceConfig& tol);

// Smooth and holomorphic levels: invertible real intertwiner.
Verdict classify_real_rigid(const GeneratorSet& ps, const GeneratorSet& qs,
                            const ToleranceConfig& tol, Category category = Category::Smooth);

Verdict classify_real_linear(const GeneratorSet& ps, const GeneratorSet& qs, Category category,
                             const ToleranceConfig& tol);

} // namespace phase
