#pragma once

// Conjugacy of linear-fractional actions on CP^n; generators are
// (n+1) x (n+1) matrices modulo nonzero scale.

#include "phase/core.hpp"

namespace phase {

// Necessary structure match on CP^1: per index, both matrices scalar, both
// diagonalizable non-scalar, or both defective.
bool jordan_block_count_compatible(const GeneratorSet& ps, const GeneratorSet& qs,
                                   const ToleranceConfig& tol);

// Abelian topological criterion on CP^1 via eigenvalue ratios; Re(alpha) = -1
// is excluded and Re(alpha) < -1 swaps the two fixed points.
Verdict classify_cp1_top(const GeneratorSet& ps, const GeneratorSet& qs,
                         const ToleranceConfig& tol);

// Abelian topological criterion on CP^n, n > 1: one common exponent and a
// permutation of the n+1 coordinates; premise is simplicity of the ratio-log
// collections.
Verdict classify_cpn_top(const GeneratorSet& ps, const GeneratorSet& qs,
                         const ToleranceConfig& tol);

// Smooth / R-holomorphic / holomorphic levels: projective intertwiner with
// per-generator scale factors resolved by det normalization and root
// enumeration; the antiholomorphic branch is admitted below Holomorphic.
Verdict classify_proj_rigid(const GeneratorSet& ps, const GeneratorSet& qs, Category level,
                            const ToleranceConfig& tol);

Verdict classify_projective(const GeneratorSet& ps, const GeneratorSet& qs, Category category,
                            const ToleranceConfig& tol);

} // namespace phase
